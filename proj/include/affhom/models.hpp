#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <affhom/hessian.hpp>
#include <affhom/symmetry.hpp>

namespace affhom {

struct ExpectedBracket {
    int i = 0; // 1-based generator indices
    int j = 0;
    std::vector<Rational> coefficients; // in the generator basis
};

enum class Construction { closed_form, jet };

struct ModelSpec {
    std::string name;
    int n = 0;
    std::optional<int> sign;       // +1 / -1 for the paired n = 4 models
    Construction construction = Construction::jet;
    std::string source;            // closed-form id or listing file
    std::string listing;           // listed coefficients, relative to the data directory
    std::optional<std::string> parameter; // free symbol, e.g. theta
    std::vector<Rational> samples;        // parameter values checked by default
    std::vector<std::string> generator_text;
    std::vector<PField> generators;
    std::vector<ExpectedBracket> brackets; // omitted pairs commute
    int min_order = 0; // lowest series order whose eqL pins the algebra down
    int max_order = 0; // listing bound for jet models
    std::optional<std::string> script; // branch script that regenerates the jet

    int dimension() const { return static_cast<int>(generators.size()); }
};

// Versioned line-oriented catalog; throws ParseError on malformed records.
std::vector<ModelSpec> load_catalog(const std::filesystem::path& path);
// The catalog shipped in the data directory, loaded once.
const std::vector<ModelSpec>& catalog();
const ModelSpec& find_model(std::string_view name);

std::filesystem::path data_path(std::string_view relative);

// Series of the model through the order. A parameter left unset stays a
// symbol. Throws PreconditionError beyond the listing of a jet model.
PSeries model_series(std::string_view name, int order, std::optional<Rational> parameter = std::nullopt);
// The listed coefficients through the order.
PSeries model_listing(const ModelSpec& model, int order);

// Generators with the parameter substituted when given.
std::vector<PField> model_generators(const ModelSpec& model, std::optional<Rational> parameter);

struct TangencyCheck {
    std::string field;
    std::optional<int> failure_order; // lowest failing eqL order
};

struct BracketCheck {
    int i = 0;
    int j = 0;
    std::string expected;
    std::string computed;
    bool ok = false;
};

// Brackets of all generator pairs against the catalog table.
std::vector<BracketCheck> check_brackets(const ModelSpec& model, std::optional<Rational> parameter);

struct CoefficientDiff {
    Exponents alpha;
    ParamPoly computed;
    ParamPoly listed;
};

struct VerificationReport {
    std::string model;
    int n = 0;
    int order = 0;
    std::optional<Rational> parameter;
    HessianReport hessian;
    std::vector<TangencyCheck> tangency; // eqL checked through order - 1
    std::vector<BracketCheck> brackets;
    bool series_ok = false;
    int series_order = 0;
    std::vector<CoefficientDiff> series_diffs;
    bool transitive = false;
    std::optional<int> dimension; // solve_symmetry at order - 1 (rational models)
    bool span_ok = false;
    bool pass = false;

    std::string to_text() const;
};

// Throws PreconditionError when the order lies outside the model's range.
VerificationReport verify_model(std::string_view name, int order, std::optional<Rational> parameter = std::nullopt);

} // namespace affhom
