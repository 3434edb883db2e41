#include <doctest.h>

#include <fstream>

#include "test_support.hpp"

#include <affhom/errors.hpp>
#include <affhom/expr_parser.hpp>
#include <affhom/hessian.hpp>
#include <affhom/models.hpp>
#include <affhom/series_io.hpp>
#include <affhom/symmetry.hpp>

using namespace affhom;

namespace {

Rational coefficient(const PSeries& s, const Exponents& e)
{
    return s.coefficient(e).constant();
}

const char* const catalog_text = R"(affhom-catalog version=1
model toy
n 2
construction closed-form cayley2
listing models/cayley2.series
min-order 5
generator (1 - y) d/dx + x d/du
generator (1 - y) d/dy + u d/du
generator x d/dx + 2*u d/du
generator -u d/dx + x d/dy
bracket 1 2 = 1 0 0 0
bracket 1 3 = 1 0 0 0
bracket 1 4 = 0 1 0 0
bracket 2 4 = 0 0 0 1
bracket 3 4 = 0 0 0 1
end
)";

std::filesystem::path write_temp(const std::string& name, const std::string& text)
{
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << text;
    return p;
}

} // namespace

TEST_CASE("catalog contents")
{
    const std::vector<std::pair<const char*, int>> dims{{"cayley2", 4}, {"s-theta", 2}, {"prop214", 2},
                                                         {"merker3", 4}, {"merker4-plus", 4}, {"merker4-minus", 4}};
    CHECK(catalog().size() == dims.size());
    for (const auto& [name, dim] : dims) {
        const ModelSpec& m = find_model(name);
        CHECK(m.dimension() == dim);
        for (const auto& b : m.brackets) {
            CHECK(static_cast<int>(b.coefficients.size()) == dim);
            CHECK(b.i >= 1);
            CHECK(b.j <= dim);
        }
    }
    CHECK(find_model("merker4-plus").sign == 1);
    CHECK(find_model("merker4-minus").sign == -1);
    CHECK(find_model("s-theta").parameter == "theta");
    CHECK_THROWS_AS(find_model("nosuch"), PreconditionError);
}

TEST_CASE("catalog parsing")
{
    SUBCASE("a well-formed record")
    {
        const auto models = load_catalog(write_temp("affhom_toy.catalog", catalog_text));
        REQUIRE(models.size() == 1);
        CHECK(models[0].name == "toy");
        CHECK(models[0].dimension() == 4);
        CHECK(models[0].brackets.size() == 5);
    }
    SUBCASE("a wrong version")
    {
        std::string text = catalog_text;
        text.replace(text.find("version=1"), 9, "version=9");
        CHECK_THROWS_AS(load_catalog(write_temp("affhom_bad1.catalog", text)), ParseError);
    }
    SUBCASE("a bracket index past the generators")
    {
        std::string text = catalog_text;
        text.replace(text.find("bracket 3 4"), 11, "bracket 3 5");
        CHECK_THROWS_AS(load_catalog(write_temp("affhom_bad2.catalog", text)), ParseError);
    }
    SUBCASE("a bracket with too few coefficients")
    {
        std::string text = catalog_text;
        text.replace(text.find("= 0 0 0 1"), 9, "= 0 0 1");
        CHECK_THROWS_AS(load_catalog(write_temp("affhom_bad3.catalog", text)), ParseError);
    }
}

TEST_CASE("model_series examples")
{
    SUBCASE("cayley2 through order 6 is the sum of x^2 y^k / 2")
    {
        PSeries expected(2, 6);
        for (int k = 0; k <= 4; ++k) {
            expected.set({2, k}, ParamPoly(ratio(1, 2)));
        }
        CHECK(model_series("cayley2", 6) == expected);
    }
    SUBCASE("n = 3 closed form")
    {
        const PSeries s = model_series("merker3", 10);
        CHECK(coefficient(s, {4, 0, 2}) == ratio(1, 8));
        CHECK(coefficient(s, {5, 0, 3}) == ratio(1, 8));
        CHECK(coefficient(s, {6, 0, 4}) == ratio(7, 48));
        CHECK(coefficient(s, {2, 0, 0}) == ratio(1, 2));
    }
    SUBCASE("n = 3 closed form equals its listing through order 10")
    {
        CHECK(model_series("merker3", 10) == model_listing(find_model("merker3"), 10));
    }
    SUBCASE("s-theta x^9 coefficient")
    {
        CHECK(model_series("s-theta", 9).coefficient({9, 0}) == parse_poly("1/90720*theta^2"));
        CHECK(model_series("s-theta", 9, Rational(0)).coefficient({9, 0}).is_zero());
        CHECK(model_series("s-theta", 9, Rational(1)).coefficient({9, 0}) == ParamPoly(ratio(1, 90720)));
    }
    SUBCASE("relations between listed coefficients of the F31 model")
    {
        const PSeries s = model_series("prop214", 8);
        const Rational f50 = coefficient(s, {5, 0}) * 120;
        const Rational f60 = coefficient(s, {6, 0}) * 720;
        CHECK(f50 == ratio(20, 9));
        CHECK(f60 == ratio(40, 9));
        CHECK(f60 == ratio(-34, 3) * f50 + ratio(800, 27));
    }
    SUBCASE("n = 4 listed coefficients")
    {
        const PSeries s = model_series("merker4-plus", 8);
        CHECK(coefficient(s, {8, 0, 0, 0}) == ratio(-1, 54000));
        CHECK(coefficient(s, {7, 0, 1, 0}) == ratio(-1, 5400));
    }
    SUBCASE("jet models stop at their listing")
    {
        CHECK_THROWS_AS(model_series("prop214", 9), PreconditionError);
        CHECK_NOTHROW(model_series("cayley2", 12));
    }
    SUBCASE("every model is rank 1")
    {
        for (const auto& m : catalog()) {
            const int order = m.construction == Construction::jet ? m.max_order : 10;
            CHECK(check_hessian_rank1(model_series(m.name, order)).rank1);
        }
    }
}

TEST_CASE("verify_model passes for every catalog model")
{
    const std::vector<std::pair<const char*, int>> runs{{"cayley2", 10}, {"s-theta", 9}, {"prop214", 8},
                                                         {"merker3", 10}, {"merker4-plus", 8}, {"merker4-minus", 8}};
    for (const auto& [name, order] : runs) {
        const VerificationReport r = verify_model(name, order);
        CAPTURE(r.to_text());
        CHECK(r.pass);
        CHECK(r.transitive);
        CHECK(r.series_ok);
    }
    for (int theta : {0, 1, -2}) {
        const VerificationReport r = verify_model("s-theta", 9, Rational(theta));
        CAPTURE(r.to_text());
        CHECK(r.pass);
        REQUIRE(r.brackets.size() == 1);
        CHECK(r.brackets[0].expected == "0");
        CHECK(r.dimension == 2);
        CHECK(r.span_ok);
    }
}

TEST_CASE("verify_model report text")
{
    const std::string text = verify_model("cayley2", 10).to_text();
    CHECK(text.find("[e1, e4] = e2: ok") != std::string::npos);
    CHECK(text.find("[e3, e4] = e4: ok") != std::string::npos);
    CHECK(text.find("verdict: pass") != std::string::npos);
    CHECK(verify_model("prop214", 8).to_text().find("[e1, e2] = -e1 - 1/3*e2: ok") != std::string::npos);
    const std::string m4 = verify_model("merker4-plus", 8).to_text();
    CHECK(m4.find("[e1, e4] = 5/4*e1: ok") != std::string::npos);
    CHECK(m4.find("[e1, e3] = -4/15*e4: ok") != std::string::npos);
    CHECK(m4.find("[e3, e4] = -5/4*e3: ok") != std::string::npos);
}

TEST_CASE("verify_model preconditions")
{
    CHECK_THROWS_AS(verify_model("merker4-plus", 3), PreconditionError);
    CHECK_THROWS_AS(verify_model("prop214", 9), PreconditionError);
    CHECK_THROWS_AS(verify_model("cayley2", 10, Rational(1)), PreconditionError);
}

TEST_CASE("sign variants of the generators are not tangent")
{
    struct Variant {
        const char* model;
        int index;
        const char* text;
        int failure;
    };
    const std::vector<Variant> variants{
        {"prop214", 1, "(u - 2*x) d/dx + (4/3*x - y + 8/9*u + 1) d/dy - 3*u d/du", 3},
        {"merker4-plus", 1, "(1 - y) d/dy - z d/dz + (-x - w) d/dw - u d/du", 2},
        {"merker4-plus", 3,
         "5/4*x d/dx + 1/2*u d/dy + (-x + 5/4*z) d/dz + (1 - y - 5/2*w - 1/15*u) d/dw + 5/2*u d/du", 4},
    };
    for (const auto& v : variants) {
        CAPTURE(v.text);
        const ModelSpec& m = find_model(v.model);
        const PSeries F = model_series(v.model, m.max_order);
        CHECK_FALSE(tangency_failure(F, m.generators[static_cast<std::size_t>(v.index)], m.max_order - 1));
        CHECK(tangency_failure(F, parse_field(v.text, m.n), m.max_order - 1) == v.failure);
    }
}
