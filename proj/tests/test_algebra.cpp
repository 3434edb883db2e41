#include <doctest.h>

#include <random>
#include <sstream>

#include "test_support.hpp"

#include <affhom/expr_parser.hpp>
#include <affhom/jet.hpp>
#include <affhom/series.hpp>
#include <affhom/series_io.hpp>

using namespace affhom;

namespace {

RSeries rs(std::string_view text, int n, int bound)
{
    return parse_series(text, n, bound);
}

PSeries ps(std::string_view text, int n, int bound)
{
    return parse_pseries(text, n, bound);
}

RSeries random_series(std::mt19937& rng, int n, int bound, int terms, bool unit_constant = false)
{
    std::uniform_int_distribution<int> deg(unit_constant ? 1 : 0, bound);
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 4);
    RSeries s(n, bound);
    for (int t = 0; t < terms; ++t) {
        const int d = deg(rng);
        Exponents e(n);
        int left = d;
        for (int i = 0; i < n - 1; ++i) {
            std::uniform_int_distribution<int> part(0, left);
            const int k = part(rng);
            e.set(i, k);
            left -= k;
        }
        e.set(n - 1, left);
        s.add(e, ratio(num(rng), den(rng)));
    }
    if (unit_constant) {
        s.set(Exponents(n), Rational(1));
    }
    return s;
}

} // namespace

TEST_CASE("rationals stay canonical")
{
    const Rational q = parse_rational("-6/4");
    CHECK(to_string(q) == "-3/2");
    CHECK(to_string(parse_rational("0/7")) == "0");
    CHECK(q.get_den() > 0);
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK(*exact_root(Rational(-8, 27), 3) == Rational(-2, 3));
    CHECK_FALSE(exact_root(Rational(2), 2).has_value());
}

TEST_CASE("series_mul")
{
    SUBCASE("difference of squares")
    {
        CHECK(rs("1 + y", 2, 4) * rs("1 - y", 2, 4) == rs("1 - y^2", 2, 4));
    }
    SUBCASE("square of the closed-form radicand")
    {
        const RSeries s = rs("1 - 2*y + y^2 - 2*x*z", 3, 6);
        const RSeries sq = s * s;
        CHECK(sq.coefficient({2, 0, 1 + 1}) == 4);
        // full hand expansion
        CHECK(sq == rs("1 - 4*y + 6*y^2 - 4*y^3 + y^4 - 4*x*z + 8*x*y*z - 4*x*y^2*z + 4*x^2*z^2", 3, 6));
    }
    SUBCASE("zero absorbs")
    {
        const RSeries s = rs("1 + x + x*y^3", 2, 5);
        CHECK((s * RSeries(2, 5)).is_zero());
    }
    SUBCASE("bound is the minimum")
    {
        CHECK((rs("1 + x", 1, 3) * rs("1 + x", 1, 7)).bound() == 3);
    }
    SUBCASE("variable count mismatch")
    {
        CHECK_THROWS_AS(rs("x", 1, 3) * rs("x", 2, 3), PreconditionError);
    }
}

TEST_CASE("series_compose")
{
    SUBCASE("linear substitution")
    {
        const PSeries outer = ps("x^2/2", 2, 4);
        const PSeries r = series_compose(outer, {ps("a*x", 2, 4), ps("y", 2, 4)});
        CHECK(r == ps("a^2*x^2/2", 2, 4));
    }
    SUBCASE("nonlinear substitution")
    {
        const RSeries r = series_compose(rs("x^2/2", 1, 4), {rs("x + x^2/2", 1, 4)});
        CHECK(r == rs("x^2/2 + x^3/2 + x^4/8", 1, 4));
    }
    SUBCASE("constant term in the inner series")
    {
        CHECK_THROWS_AS(series_compose(rs("x^2/2", 1, 4), {rs("1 + x", 1, 4)}), PreconditionError);
    }
}

TEST_CASE("series_diff")
{
    CHECK(series_diff(rs("x^2*y^2/2", 2, 4), 1) == rs("x^2*y", 2, 3));
    CHECK(series_diff(rs("x^2/2 + x^2*y/2", 2, 3), 0) == rs("x + x*y", 2, 2));
    const RSeries d = series_diff(rs("x^3 + x*y", 3, 4), 2);
    CHECK(d.is_zero());
    CHECK(d.bound() == 3);
    CHECK_THROWS_AS(series_diff(rs("x", 2, 2), 2), PreconditionError);
}

TEST_CASE("series_pow_rational")
{
    const RSeries t = rs("1 + x", 1, 6);
    SUBCASE("square root")
    {
        // binomial coefficients C(1/2, k)
        CHECK(series_pow_rational(t, Rational(1, 2))
              == rs("1 + x/2 - x^2/8 + x^3/16 - 5/128*x^4 + 7/256*x^5 - 21/1024*x^6", 1, 6));
    }
    SUBCASE("geometric series")
    {
        CHECK(series_pow_rational(rs("1 - y", 2, 7), Rational(-1))
              == rs("1 + y + y^2 + y^3 + y^4 + y^5 + y^6 + y^7", 2, 7));
    }
    SUBCASE("zeroth power")
    {
        CHECK(series_pow_rational(rs("1 + x - 3*x^2", 1, 5), Rational(0)) == rs("1", 1, 5));
    }
    SUBCASE("constant term must be one")
    {
        CHECK_THROWS_AS(series_pow_rational(rs("2 + x", 1, 5), Rational(1, 2)), PreconditionError);
    }
}

TEST_CASE("series_divide_monomial")
{
    const RSeries q = series_divide_monomial(rs("x^2*y", 2, 5), Exponents{1, 0});
    CHECK(q == rs("x*y", 2, 4));
    CHECK(q.bound() == 4);

    try {
        series_divide_monomial(rs("1 + x", 1, 4), Exponents{1});
        FAIL("expected a division error");
    } catch (const NotDivisibleError& e) {
        CHECK(e.witness() == "[0]");
    }

    // the removable 1/z^2 of the n = 3 closed form
    const int N = 6;
    const RSeries radicand = rs("1 - 2*y + y^2 - 2*x*z", 3, N + 2);
    const RSeries numerator = series_pow_rational(radicand, Rational(3, 2))
                              - rs("1 - y", 3, N + 2) * rs("1 - 2*y + y^2 - 3*x*z", 3, N + 2);
    const RSeries u = series_divide_monomial(numerator, Exponents{0, 0, 2}) * Rational(1, 3);
    CHECK(u.bound() == N);
    CHECK(u.min_degree() == 2);
    CHECK(u.homogeneous_part(2) == rs("x^2/2", 3, N));
}

TEST_CASE("taylor_coeff and jets")
{
    CHECK(taylor_coeff(rs("1/8*x^4*z^2", 3, 6), Exponents{4, 0, 2}) == 6);
    CHECK(taylor_coeff(rs("1/30*x^5*y", 2, 6), Exponents{5, 1}) == 4);
    CHECK(taylor_coeff(rs("x^2/2", 2, 3), Exponents{2, 0}) == 1);
    CHECK_THROWS_AS(taylor_coeff(rs("x^2/2", 2, 3), Exponents{4, 0}), PreconditionError);

    const RSeries s = rs("x^2/2 + x^2*y/2 + 1/54*x^5 + 1/162*x^6", 2, 6);
    const auto jet = jet_of(s);
    CHECK(jet.at({5, 0}) == Rational(20, 9));
    CHECK(jet.at({6, 0}) == Rational(40, 9));
    CHECK(series_of(jet) == s);
}

TEST_CASE("poly_substitute")
{
    const ParamPoly p = parse_poly("-a[1,1]^2*F[2,1] + a[1,1]^2*a[2,2]*G[2,1]");
    const Substitution sub{{Symbol::named("a[2,2]"), ParamPoly::named("F[2,1]")},
                           {Symbol::named("G[2,1]"), ParamPoly(1)}};
    CHECK(p.substitute(sub).is_zero());
    CHECK(p.substitute({}) == p);
    CHECK(parse_poly("xs^2").substitute({{Symbol::named("xs"), ParamPoly(2)}}) == ParamPoly(4));
}

TEST_CASE("poly_solve_linear_in")
{
    const Symbol a11 = Symbol::named("a[1,1]");
    const Symbol b1 = Symbol::named("b[1]");
    const SymbolSet registry{a11};
    const ParamPoly p = parse_poly("1/2*a[1,1]*b[1] + 1/2*a[1,1]^2*a[2,1]");
    CHECK(solve_linear_in(p, b1, registry) == parse_poly("-a[1,1]*a[2,1]"));
    CHECK(solve_linear_in(parse_poly("-T[0]"), Symbol::named("T[0]"), {}).is_zero());
    CHECK_THROWS_AS(solve_linear_in(parse_poly("b[1]^2 + 1"), b1, registry), SolveError);
    // a[1,1] unregistered: its vanishing is undecided
    CHECK_THROWS_AS(solve_linear_in(p, b1, {}), SolveError);
}

TEST_CASE("canonical polynomial text")
{
    const ParamPoly p = parse_poly("a[1,1]^2*a[2,2]*G[2,1] - 1/2*a[1,1]^2*F[2,1]");
    CHECK(p.to_string() == "-1/2*a[1,1]^2*F[2,1] + a[1,1]^2*a[2,2]*G[2,1]");
    CHECK(parse_poly("0*x + 0").is_zero());
    CHECK_THROWS_AS(parse_poly("(a + 1"), ParseError);
}

TEST_CASE("series text format round-trips")
{
    const RSeries s = rs("x^2/2 + x^2*y/2 - 7/3*x^3*y^2", 2, 6);
    const std::string text = series_text(s);
    CHECK(text.rfind("vars=2 bound=6\n", 0) == 0);
    std::istringstream in(text);
    CHECK(read_series(in) == s);

    std::istringstream bad("vars=2 bound=2\n3 0 : 1\n");
    CHECK_THROWS_AS(read_series(bad), ParseError);
}

TEST_CASE("ring axioms on random series")
{
    std::mt19937 rng(20261015);
    for (int round = 0; round < 40; ++round) {
        const int n = 1 + round % 3;
        const int bound = 2 + round % 5;
        const RSeries a = random_series(rng, n, bound, 8);
        const RSeries b = random_series(rng, n, bound, 8);
        const RSeries c = random_series(rng, n, bound, 8);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * b == b * a);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(series_mul_serial(a, b) == series_mul_parallel(a, b));
    }
}

TEST_CASE("successive linear substitutions compose")
{
    std::mt19937 rng(7);
    for (int round = 0; round < 10; ++round) {
        const RSeries f = random_series(rng, 2, 5, 8);
        std::uniform_int_distribution<int> entry(-3, 3);
        const int p[4] = {entry(rng), entry(rng), entry(rng), entry(rng)};
        const int q[4] = {entry(rng), entry(rng), entry(rng), entry(rng)};
        auto lin = [](int r, int s) {
            RSeries l(2, 5);
            l.add({1, 0}, Rational(r));
            l.add({0, 1}, Rational(s));
            return l;
        };
        const RSeries step = series_compose(series_compose(f, {lin(p[0], p[1]), lin(p[2], p[3])}),
                                            {lin(q[0], q[1]), lin(q[2], q[3])});
        // (P q)(x) rows: P applied after Q
        const RSeries once = series_compose(
            f, {lin(p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3]),
                lin(p[2] * q[0] + p[3] * q[2], p[2] * q[1] + p[3] * q[3])});
        CHECK(step == once);
    }
}

TEST_CASE("rational powers invert integral powers")
{
    std::mt19937 rng(11);
    for (int round = 0; round < 12; ++round) {
        const int n = 1 + round % 3;
        const RSeries s = random_series(rng, n, 5, 6, true);
        const int pnum = 1 + round % 4 - 2;
        const unsigned qden = 2 + static_cast<unsigned>(round % 3);
        const RSeries r = series_pow_rational(s, Rational(pnum, static_cast<int>(qden)));
        const RSeries lhs = series_pow(r, qden);
        const RSeries rhs = pnum >= 0 ? series_pow(s, static_cast<unsigned>(pnum))
                                      : series_pow_rational(series_pow(s, static_cast<unsigned>(-pnum)), Rational(-1));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("mixed partials commute and jets round-trip")
{
    std::mt19937 rng(3);
    for (int round = 0; round < 20; ++round) {
        const int n = 2 + round % 3;
        const RSeries s = random_series(rng, n, 6, 10);
        CHECK(series_diff(series_diff(s, 0), 1) == series_diff(series_diff(s, 1), 0));
        CHECK(series_diff(series_diff(s, n - 1), 1) == series_diff(series_diff(s, 1), n - 1));
        const auto jet = jet_of(s);
        CHECK(jet_of(series_of(jet)) == jet);
    }
}
