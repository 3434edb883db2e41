#include <doctest.h>

#include "test_support.hpp"

#include <affhom/equivalence.hpp>
#include <affhom/expr_parser.hpp>
#include <affhom/hessian.hpp>
#include <affhom/jet.hpp>

using namespace affhom;

namespace {

ParamPoly P(std::string_view text)
{
    return parse_poly(text);
}

Symbol S(std::string_view name)
{
    return Symbol::named(name);
}

// x^2/2 plus free symbols of transverse degree <= 1, completed to rank 1.
NormalizationState generic_n2(int bound)
{
    return NormalizationState::initial(rank1_complete(generic_transverse_jet(2, bound, "F")),
                                       AffineMapSym::general(2));
}

const ParamPoly* solved(const StabilityResult& r, std::string_view name)
{
    for (const auto& [s, v] : r.solved) {
        if (s.name() == name) {
            return &v;
        }
    }
    return nullptr;
}

NormalizationState order3_normalized()
{
    NormalizationState st = stabilize_through(generic_n2(4), 2);
    st = normalize_step(st, {3, 0}, 0, S("b[1]"), true);
    st = assume_nonzero(st, S("F[2,1]"));
    st = normalize_step(st, {2, 1}, 1, S("a[2,2]"), true);
    return st;
}

} // namespace

TEST_CASE("build_eqFG")
{
    SUBCASE("order one")
    {
        const NormalizationState st = generic_n2(3);
        const auto eqs = build_eqFG(st.F, st.G, st.map, 1);
        REQUIRE(eqs.size() == 3);
        CHECK(eqs[0].identically_zero());
        CHECK(eqs[1].alpha == Exponents{1, 0});
        CHECK(eqs[1].value == P("-c[1]"));
        CHECK(eqs[2].value == P("-c[2]"));
    }
    SUBCASE("order three after the order-two stabilization")
    {
        const NormalizationState st = stabilize_through(generic_n2(3), 2);
        const auto eqs = build_eqFG(st.F, st.G, st.map, 3);
        const auto it = std::find_if(eqs.begin(), eqs.end(), [](const auto& e) { return e.alpha == Exponents{2, 1}; });
        REQUIRE(it != eqs.end());
        // raw coefficient of x^2 y; the factorial-normalized form is twice it
        CHECK(it->value * Rational(2) == P("-a[1,1]^2*F[2,1] + a[1,1]^2*a[2,2]*G[2,1]"));
        for (const auto& e : eqs) {
            if (e.alpha == Exponents{1, 2} || e.alpha == Exponents{0, 3}) {
                CHECK(e.identically_zero());
            }
        }
    }
    SUBCASE("identity map on equal jets")
    {
        const PSeries F = rank1_complete(generic_transverse_jet(3, 5, "F"));
        for (const auto& e : build_eqFG(F, F, AffineMapSym::identity(3), 5)) {
            CHECK(e.identically_zero());
        }
    }
    SUBCASE("order beyond the truncation")
    {
        const NormalizationState st = generic_n2(3);
        CHECK_THROWS_AS(build_eqFG(st.F, st.G, st.map, 4), PreconditionError);
    }
}

TEST_CASE("normalize_step")
{
    const NormalizationState st2 = stabilize_through(generic_n2(4), 2);

    SUBCASE("G[3,0] := 0 solving b[1]")
    {
        const NormalizationState st = normalize_step(st2, {3, 0}, 0, S("b[1]"), false);
        CHECK(st.map.b[0] == P("1/3*a[1,1]*F[3,0] - a[1,1]*a[2,1]*G[2,1]"));
        CHECK(st.log.back() == "normalize G[3,0] := 0 solving b[1]");
        CHECK(st.F.coefficient({3, 0}) == P("1/6*F[3,0]"));
        CHECK(st.G.coefficient({3, 0}).is_zero());
    }
    SUBCASE("G[2,1] := 1 solving a[2,2]")
    {
        const NormalizationState reg = assume_nonzero(st2, S("F[2,1]"));
        const NormalizationState st = normalize_step(reg, {2, 1}, 1, S("a[2,2]"), false);
        CHECK(st.map.a[1][1] == P("F[2,1]"));
        // without the nonzero assumption the value is not certifiably invertible
        CHECK_THROWS_AS(normalize_step(st2, {2, 1}, 1, S("a[2,2]"), false), SolveError);
    }
    SUBCASE("relative invariant assumed zero")
    {
        const NormalizationState zero = assume_zero(st2, S("F[2,1]"));
        try {
            normalize_step(zero, {2, 1}, 1, S("a[2,2]"), false);
            FAIL("expected a refusal");
        } catch (const SolveError& e) {
            CHECK(std::string(e.what()).find("relative invariant vanishes identically") != std::string::npos);
        }
    }
    SUBCASE("mirroring")
    {
        const NormalizationState st = order3_normalized();
        CHECK(st.F.coefficient({2, 1}) == P("1/2"));
        CHECK(st.G.coefficient({2, 1}) == P("1/2"));
        CHECK(st.F.coefficient({3, 0}).is_zero());
        CHECK(st.map.b[0] == P("-a[1,1]*a[2,1]"));
    }
}

TEST_CASE("stability_check")
{
    SUBCASE("order two")
    {
        const StabilityResult r = stability_check(generic_n2(3), 2);
        REQUIRE(solved(r, "c[1]"));
        CHECK(solved(r, "c[1]")->is_zero());
        CHECK(solved(r, "c[2]")->is_zero());
        CHECK(*solved(r, "d") == P("a[1,1]^2"));
        CHECK(solved(r, "a[1,2]")->is_zero());
        CHECK(r.relations.empty());
    }
    SUBCASE("order three")
    {
        const StabilityResult r = stability_check(order3_normalized(), 3);
        CHECK(r.map.b[0] == P("-a[1,1]*a[2,1]"));
        CHECK(r.map.a[1][1] == P("1"));
        CHECK(r.relations.empty());
    }
    SUBCASE("order four")
    {
        NormalizationState st = stabilize_through(order3_normalized(), 3);
        st = normalize_step(st, {4, 0}, 0, S("b[2]"), true);
        const StabilityResult r = stability_check(st, 4);
        CHECK(r.map.b[1] == P("-1/2*a[2,1]^2 - 2/3*a[1,1]*a[2,1]*G[3,1]"));
        REQUIRE(r.relations.size() == 1);
        CHECK(r.relations[0] * Rational(6) == P("a[1,1]*G[3,1] - G[3,1]"));
        const std::vector<Symbol> expected_free{S("a[1,1]"), S("a[2,1]")};
        CHECK(r.free_parameters == expected_free);
    }
    SUBCASE("identity-normalized state")
    {
        NormalizationState st = NormalizationState::initial(rank1_complete(generic_transverse_jet(2, 6, "F")),
                                                            AffineMapSym::general(2));
        st = stabilize_through(st, 2);
        st = normalize_step(st, {3, 0}, 0, S("b[1]"), true);
        st = assume_nonzero(st, S("F[2,1]"));
        st = normalize_step(st, {2, 1}, 1, S("a[2,2]"), true);
        st = stabilize_through(st, 3);
        st = normalize_step(st, {4, 0}, 0, S("b[2]"), true);
        st = assume_zero(st, S("F[3,1]"));
        st = assume_zero(st, S("F[4,1]"));
        st = assume_nonzero(st, S("F[5,0]"));
        st = normalize_step(st, {5, 0}, 1, S("a[1,1]"), true);
        st = assign_jet(st, S("F[5,1]"), 4); // forced by homogeneity
        st = normalize_step(st, {6, 0}, 0, S("a[2,1]"), true);
        const StabilityResult r = stability_check(st, 6);
        CHECK(r.free_parameters.empty());
        CHECK(r.map == AffineMapSym::identity(2));
    }
}

TEST_CASE("assumption log replays exactly")
{
    NormalizationState st = order3_normalized();
    st = stabilize_through(st, 3);
    st = normalize_step(st, {4, 0}, 0, S("b[2]"), true);
    st = assign_jet(st, S("F[3,1]"), P("2*theta"));
    const NormalizationState replayed = replay_log(generic_n2(4), st.log);
    CHECK(replayed == st);
    CHECK(st.log.front() == "stabilize-through 2");
    CHECK_THROWS_AS(replay_log(generic_n2(4), {"frobnicate"}), ParseError);
}

TEST_CASE("regraphing inverts a numeric map")
{
    const int N = 7;
    const RSeries F = series_pow_rational(parse_series("1 - y", 2, N), Rational(-1)) * parse_series("x^2/2", 2, N);
    const std::vector<std::vector<Rational>> a{{Rational(2), Rational(1)}, {Rational(-1), Rational(3)}};
    const std::vector<Rational> b{Rational(1, 2), Rational(-2)};
    const std::vector<Rational> c{Rational(0), Rational(0)};
    const Rational d(5);
    const RSeries G = regraph(F, a, b, c, d);

    AffineMapSym map = AffineMapSym::identity(2);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            map.a[i][j] = ParamPoly(a[i][j]);
        }
        map.b[i] = ParamPoly(b[i]);
        map.c[i] = ParamPoly(c[i]);
    }
    map.d = ParamPoly(d);
    for (const auto& e : build_eqFG(lift(F), lift(G), map, N)) {
        CHECK(e.identically_zero());
    }
    CHECK(check_hessian_rank1(G).rank1);
}
