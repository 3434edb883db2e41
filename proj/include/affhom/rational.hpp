#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace affhom {

// Exact rational; GMP keeps it canonical (positive denominator, reduced).
using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p", "-p", "p/q", "-p/q" with decimal digits; throws ParseError.
Rational parse_rational(std::string_view text);

// Canonical text: "p" when the denominator is 1, otherwise "p/q".
std::string to_string(const Rational& q);

// p/q in lowest terms (mpq_class(p, q) alone does not reduce).
inline Rational ratio(long p, long q)
{
    Rational r(p, q);
    r.canonicalize();
    return r;
}

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

Rational factorial(unsigned k);

// Exact k-th root when q is a perfect k-th power (real roots only; for even
// k the positive root is returned).
std::optional<Rational> exact_root(const Rational& q, unsigned k);

} // namespace affhom
