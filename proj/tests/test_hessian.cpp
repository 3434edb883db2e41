#include <doctest.h>

#include <random>

#include "test_support.hpp"

#include <affhom/hessian.hpp>
#include <affhom/jet.hpp>
#include <affhom/series_io.hpp>

using namespace affhom;

namespace {

RSeries rs(std::string_view text, int n, int bound)
{
    return parse_series(text, n, bound);
}

RSeries cayley(int bound)
{
    return series_pow_rational(rs("1 - y", 2, bound), Rational(-1)) * rs("x^2/2", 2, bound);
}

std::filesystem::path data(const char* name)
{
    return std::filesystem::path(AFFHOM_DATA_DIR) / name;
}

} // namespace

TEST_CASE("hessian_matrix")
{
    const auto h = hessian_matrix(rs("x^2/2", 2, 4));
    CHECK(h[0][0] == rs("1", 2, 2));
    CHECK(h[0][1].is_zero());
    CHECK(h[1][1].is_zero());

    const auto g = hessian_matrix(rs("x^2/2 + x^2*y/2", 2, 3));
    CHECK(g[0][1] == rs("x", 2, 1));
    CHECK(g[1][0] == g[0][1]);

    const auto d = hessian_matrix(rs("x^2/2 + y^2/2", 2, 3));
    CHECK(d[0][0] == rs("1", 2, 1));
    CHECK(d[1][1] == rs("1", 2, 1));
    CHECK(d[0][1].is_zero());

    CHECK_THROWS_AS(hessian_matrix(rs("x", 2, 1)), PreconditionError);
}

TEST_CASE("check_hessian_rank1")
{
    SUBCASE("rank one closed form")
    {
        const HessianReport r = check_hessian_rank1(cayley(10));
        CHECK(r.rank1);
        CHECK(r.unit_ok);
        CHECK(r.checked_through_order == 8);
        CHECK(r.to_text({"x", "y"}).find("rank1: yes") != std::string::npos);
    }
    SUBCASE("rank two")
    {
        const HessianReport r = check_hessian_rank1(rs("x^2/2 + y^2/2", 2, 4));
        CHECK_FALSE(r.rank1);
        REQUIRE(r.failing_minor.has_value());
        CHECK(r.failing_minor->v == 1);
        CHECK(r.failing_minor->w == 1);
        CHECK(r.failing_minor->monomial == Exponents{0, 0});
        CHECK(r.to_text({"x", "y"}).find("failing-minor: (y,y) at monomial [0,0]") != std::string::npos);
    }
    SUBCASE("degenerate quadratic part")
    {
        const HessianReport r = check_hessian_rank1(rs("y^2/2", 2, 4));
        CHECK_FALSE(r.unit_ok);
        CHECK_FALSE(r.rank1);
    }
}

TEST_CASE("rank1_complete")
{
    SUBCASE("n = 2 order 4 values")
    {
        const RSeries partial = rs("x^2/2 + x^2*y/2", 2, 4);
        const auto jet = jet_of(rank1_complete(partial));
        CHECK(jet.at({2, 2}) == 2);
        CHECK(jet.at({1, 3}) == 0);
        CHECK(jet.at({0, 4}) == 0);
    }
    SUBCASE("vanishing mixed data")
    {
        const RSeries partial = rs("x^2/2 + x^3/3 + x^5/7", 2, 7);
        CHECK(rank1_complete(partial) == partial);
    }
    SUBCASE("prenormalized n = 3 data")
    {
        SeriesHeader h;
        const PSeries partial = load_pseries(data("prenormalized_n3.series"), &h);
        const PSeries full = rank1_complete(partial);
        CHECK(full.coefficient({2, 2, 0}) == ParamPoly(Rational(1, 2)));
        CHECK(check_hessian_rank1(full).rank1);
    }
    SUBCASE("prenormalized n = 4 data")
    {
        const PSeries full = rank1_complete(load_pseries(data("prenormalized_n4.series")));
        CHECK(full.coefficient({2, 2, 0, 0}) == ParamPoly(Rational(1, 2)));
        CHECK(check_hessian_rank1(full).rank1);
    }
    SUBCASE("inconsistent transverse data")
    {
        RSeries partial = rs("x^2/2 + x^2*y/2 + 5*x^2*y^2", 2, 4);
        CHECK_THROWS_AS(rank1_complete(partial), InconsistencyError);
    }
}

TEST_CASE("completion properties")
{
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> val(-4, 4);
    for (int round = 0; round < 12; ++round) {
        const int n = 2 + round % 3;
        const int bound = 5 + round % 2;
        RSeries partial(n, bound);
        partial.set(Exponents::unit(n, 0) + Exponents::unit(n, 0), Rational(1, 2));
        for (int d = 3; d <= bound; ++d) {
            for_each_of_degree(n, d, [&](const Exponents& e) {
                if (e.transverse_degree() <= 1) {
                    partial.set(e, ratio(val(rng), 1 + (val(rng) + 4) % 3));
                }
            });
        }
        const RSeries full = rank1_complete(partial);
        CHECK(check_hessian_rank1(full).rank1);
        CHECK(rank1_complete(full) == full);

        // verdict unchanged by linear substitutions among the transverse variables
        std::vector<RSeries> inner;
        inner.push_back(RSeries::variable(n, bound, 0));
        for (int i = 1; i < n; ++i) {
            RSeries v(n, bound);
            // triangular with nonzero diagonal, so invertible
            v.add(Exponents::unit(n, i), Rational(1 + (val(rng) + 4) % 3));
            if (i + 1 < n) {
                v.add(Exponents::unit(n, i + 1), Rational(val(rng)));
            }
            inner.push_back(v);
        }
        CHECK(check_hessian_rank1(series_compose(full, inner)).rank1);
        const RSeries broken = full + rs("y^2", n, bound);
        CHECK_FALSE(check_hessian_rank1(series_compose(broken, inner)).rank1);
    }
}
