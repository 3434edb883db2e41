#pragma once

#include <map>
#include <string_view>
#include <vector>

#include <affhom/series.hpp>

namespace affhom {

// Factorial-normalized Taylor coefficients F_alpha = alpha! * [x^alpha] F.
template <class C>
struct JetTable {
    int num_vars = 0;
    int bound = 0;
    std::map<Exponents, C, GradedOrder> entries;

    C at(const Exponents& alpha) const
    {
        auto it = entries.find(alpha);
        return it == entries.end() ? C(0) : it->second;
    }
    friend bool operator==(const JetTable&, const JetTable&) = default;
};

template <class C>
JetTable<C> jet_of(const TruncatedSeries<C>& s)
{
    JetTable<C> j{s.num_vars(), s.bound(), {}};
    for (const auto& [e, c] : s.terms()) {
        j.entries.emplace(e, c * multi_factorial(e));
    }
    return j;
}

template <class C>
TruncatedSeries<C> series_of(const JetTable<C>& j)
{
    TruncatedSeries<C> s(j.num_vars, j.bound);
    for (const auto& [e, c] : j.entries) {
        s.set(e, c * (Rational(1) / multi_factorial(e)));
    }
    return s;
}

// Jet symbol such as F[2,1] or G[6,0,0,1].
Symbol jet_symbol(std::string_view head, const Exponents& alpha);

// Parses "F[2,1]" back to its index; throws ParseError for other names.
Exponents jet_index(Symbol s);

// x1^2/2 plus one symbol head[alpha] for every alpha of order 3..bound with
// transverse degree <= 1: the free data of a rank-1 jet before completion.
PSeries generic_transverse_jet(int num_vars, int bound, std::string_view head);

// Replaces every head-symbol by the other head ("F[2,1]" -> "G[2,1]").
Substitution rename_jet_symbols(const PSeries& s, std::string_view from, std::string_view to);

} // namespace affhom
