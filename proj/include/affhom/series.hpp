#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <affhom/errors.hpp>
#include <affhom/exponents.hpp>
#include <affhom/param_poly.hpp>
#include <affhom/rational.hpp>

namespace affhom {

inline bool is_zero_coefficient(const Rational& c) { return sgn(c) == 0; }
inline bool is_zero_coefficient(const ParamPoly& c) { return c.is_zero(); }

// Sparse power series in num_vars variables, known through total degree
// bound(). Coefficients are raw (not factorial-normalized).
template <class C>
class TruncatedSeries {
public:
    using Coefficient = C;
    using Terms = std::map<Exponents, C, GradedOrder>;

    TruncatedSeries() = default;
    TruncatedSeries(int num_vars, int bound);

    static TruncatedSeries constant(int num_vars, int bound, const C& c);
    static TruncatedSeries variable(int num_vars, int bound, int index);
    static TruncatedSeries monomial(int num_vars, int bound, const Exponents& e, const C& c);

    int num_vars() const noexcept { return num_vars_; }
    int bound() const noexcept { return bound_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    C coefficient(const Exponents& e) const;
    C constant_term() const { return coefficient(Exponents(num_vars_)); }
    // Overwrites; zero removes. Terms above the bound are rejected.
    void set(const Exponents& e, const C& c);
    void add(const Exponents& e, const C& c);

    TruncatedSeries truncated(int bound) const;
    TruncatedSeries homogeneous_part(int degree) const;
    int min_degree() const; // lowest degree with a stored term; bound+1 when zero

    template <class Fn>
    auto map_coefficients(Fn&& fn) const -> TruncatedSeries<decltype(fn(std::declval<const C&>()))>
    {
        TruncatedSeries<decltype(fn(std::declval<const C&>()))> r(num_vars_, bound_);
        for (const auto& [e, c] : terms_) {
            r.set(e, fn(c));
        }
        return r;
    }

    TruncatedSeries& operator+=(const TruncatedSeries& other);
    TruncatedSeries& operator-=(const TruncatedSeries& other);
    TruncatedSeries& operator*=(const Rational& c);
    // *this += c * s
    void add_scaled(const TruncatedSeries& s, const C& c);

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator-(TruncatedSeries a) { return a *= Rational(-1); }
    friend TruncatedSeries operator*(TruncatedSeries a, const Rational& c) { return a *= c; }
    friend TruncatedSeries operator*(const Rational& c, TruncatedSeries a) { return a *= c; }
    friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

private:
    int num_vars_ = 0;
    int bound_ = 0;
    Terms terms_;
};

using RSeries = TruncatedSeries<Rational>;
using PSeries = TruncatedSeries<ParamPoly>;

// Reference product: plain double loop over the sparse terms.
template <class C>
TruncatedSeries<C> series_mul_serial(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b);

// Same product, split by output degree and parallelized with OpenMP.
template <class C>
TruncatedSeries<C> series_mul_parallel(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b);

// Dispatches to the parallel kernel for large operands.
template <class C>
TruncatedSeries<C> series_mul(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b);

template <class C>
TruncatedSeries<C> operator*(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b)
{
    return series_mul(a, b);
}

template <class C>
TruncatedSeries<C> series_pow(const TruncatedSeries<C>& s, unsigned k);

template <class C>
TruncatedSeries<C> series_compose(const TruncatedSeries<C>& outer, const std::vector<TruncatedSeries<C>>& inner);

template <class C>
TruncatedSeries<C> series_diff(const TruncatedSeries<C>& s, int var_index);

// (1 + t)^exponent by the binomial series; the constant term must be 1.
template <class C>
TruncatedSeries<C> series_pow_rational(const TruncatedSeries<C>& s, const Rational& exponent);

template <class C>
TruncatedSeries<C> series_divide_monomial(const TruncatedSeries<C>& s, const Exponents& divisor);

PSeries series_substitute(const PSeries& s, const Substitution& assignment);

// Factorial-normalized coefficient F_alpha = alpha! * raw coefficient.
template <class C>
C taylor_coeff(const TruncatedSeries<C>& s, const Exponents& alpha);

Rational multi_factorial(const Exponents& alpha);

PSeries lift(const RSeries& s);
// Throws PreconditionError if a coefficient is not a rational constant.
RSeries lower(const PSeries& s);

extern template class TruncatedSeries<Rational>;
extern template class TruncatedSeries<ParamPoly>;

} // namespace affhom
