#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <affhom/rational.hpp>
#include <affhom/symbol.hpp>

namespace affhom {

using SymbolSet = std::set<Symbol>;

// Product of symbol powers. Exponents may be negative, but the algebra only
// produces negative ones when dividing by registered-nonzero symbols.
class Monomial {
public:
    Monomial() = default;
    static Monomial of(Symbol s, int exponent = 1);

    bool is_one() const noexcept { return factors_.empty(); }
    int exponent(Symbol s) const;
    int degree() const;
    bool has_negative() const;
    const std::vector<std::pair<Symbol, int>>& factors() const noexcept { return factors_; }

    Monomial without(Symbol s) const;
    Monomial inverse() const;
    // componentwise minimum exponent (gcd for non-negative monomials)
    static Monomial meet(const Monomial& a, const Monomial& b);

    friend Monomial operator*(const Monomial& a, const Monomial& b);
    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.factors_ <=> b.factors_; }

    // factors sorted by name, "a[1,1]^2*F[2,1]"
    std::string to_string() const;
    std::vector<std::pair<Symbol, int>> by_name() const;

private:
    std::vector<std::pair<Symbol, int>> factors_; // sorted by id, no zero exponents
};

using Substitution = std::map<Symbol, class ParamPoly>;

// Polynomial in named symbols with exact rational coefficients.
class ParamPoly {
public:
    using Terms = std::map<Monomial, Rational>;

    ParamPoly() = default;
    ParamPoly(const Rational& c);
    ParamPoly(int c) : ParamPoly(Rational(c)) {}
    ParamPoly(Symbol s);
    ParamPoly(const Monomial& m, const Rational& c);

    static ParamPoly named(std::string_view name) { return ParamPoly(Symbol::named(name)); }

    const Terms& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const;
    // value of the constant term (0 when absent)
    Rational constant_term() const;
    // valid only when is_constant()
    Rational constant() const;
    bool is_monomial() const { return terms_.size() == 1; }

    int degree_in(Symbol s) const;     // max exponent of s (0 when absent)
    int min_degree_in(Symbol s) const; // min exponent of s over terms
    bool contains(Symbol s) const;
    ParamPoly coefficient_of(Symbol s, int k) const;
    SymbolSet symbols() const;
    int total_degree() const;

    Monomial content() const; // monomial gcd of all terms
    ParamPoly divide(const Monomial& m) const;
    ParamPoly substitute(const Substitution& assignment) const;
    ParamPoly pow(unsigned k) const;

    ParamPoly& operator+=(const ParamPoly& other);
    ParamPoly& operator-=(const ParamPoly& other);
    ParamPoly& operator*=(const ParamPoly& other);
    ParamPoly& operator*=(const Rational& c);
    // multiply-accumulate: *this += a * b
    void add_product(const ParamPoly& a, const ParamPoly& b);

    friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
    friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
    friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b);
    friend ParamPoly operator*(ParamPoly a, const Rational& c) { return a *= c; }
    friend ParamPoly operator*(const Rational& c, ParamPoly a) { return a *= c; }
    friend ParamPoly operator-(ParamPoly a);
    friend bool operator==(const ParamPoly&, const ParamPoly&) = default;

    // Canonical text: graded lexicographic on symbol names, e.g.
    // "-1/2*a[1,1]^2*F[2,1] + a[1,1]^2*a[2,2]*G[2,1]".
    std::string to_string() const;

private:
    void add_term(const Monomial& m, const Rational& c);
    Terms terms_;
};

inline bool is_zero(const ParamPoly& p) { return p.is_zero(); }
std::string to_string(const ParamPoly& p);

// True when p is a nonzero rational times a monomial in registered symbols.
bool certifiably_nonzero(const ParamPoly& p, const SymbolSet& registry);

// Unique solution s = value of p = 0, for p of degree exactly 1 in s whose
// s-coefficient is certifiably nonzero. Throws SolveError otherwise.
ParamPoly solve_linear_in(const ParamPoly& p, Symbol s, const SymbolSet& registry);

// Divides out the part of content(p) made of registered symbols.
ParamPoly strip_registered_content(const ParamPoly& p, const SymbolSet& registry);

} // namespace affhom
