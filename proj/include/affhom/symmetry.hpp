#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <affhom/equivalence.hpp>
#include <affhom/linalg.hpp>
#include <affhom/series.hpp>

namespace affhom {

// Affine vector field on (x_1..x_n, u). Row i < n is the d/dx_i component
// T_i + sum_j A_ij x_j + B_i u; row n is the d/du component T_0 + sum_j C_j x_j + D u.
// Column j < n holds the x_j coefficient, column n the u coefficient,
// column n + 1 the constant.
template <class C>
struct AffineField {
    int n = 0;
    std::vector<std::vector<C>> m;

    AffineField() = default;
    explicit AffineField(int num_vars);

    // 1-based indices as in the ∂-notation; T(0) is the u translation
    C& T(int i) { return m[i == 0 ? n : i - 1][n + 1]; }
    C& A(int i, int j) { return m[i - 1][j - 1]; }
    C& B(int i) { return m[i - 1][n]; }
    C& Cx(int j) { return m[n][j - 1]; }
    C& D() { return m[n][n]; }
    const C& translation(int row) const { return m[row][n + 1]; }

    bool is_zero() const;
    friend bool operator==(const AffineField&, const AffineField&) = default;
};

using RField = AffineField<Rational>;
using PField = AffineField<ParamPoly>;

// Field with one symbol per entry: T[0..n], A[i,j], B[i], C[j], D.
PField general_field(int n);
PField lift(const RField& f);
RField lower(const PField& f);
PField substitute(const PField& f, const Substitution& sub);

// d/dx notation, e.g. "(1 - y) d/dx + x d/du"; "0" for the zero field.
std::string render_field(const RField& f);
std::string render_field(const PField& f);
// Inverse of render_field; coordinates x, y, z, w (by n) and u.
PField parse_field(std::string_view text, int n);

// Origin value (T_1..T_n) of the field.
std::vector<Rational> origin_value(const RField& f);
std::vector<Rational> flatten(const RField& f);
RField unflatten(const std::vector<Rational>& v, int n);

// eqL = sum_i (d/dx_i component) dF/dx_i - (d/du component), at u = F,
// through the order; needs F through order + 1.
PSeries eqL_series(const PSeries& F, const PField& field, int order);
std::vector<CoefficientEquation> build_eqL(const PSeries& F, const PField& field, int order);

// Lowest order with a nonzero eqL coefficient, or nullopt if tangent through
// the order.
std::optional<int> tangency_failure(const PSeries& F, const PField& field, int order);

struct SymmetryResult {
    std::vector<RField> basis;
    int order = 0;
    int dimension = 0;
    int dimension_previous = 0; // at order - 1
    bool stabilized() const { return dimension == dimension_previous; }
};

// Kernel of the eqL system through the order, by exact elimination with the
// unknowns ordered A (row-major), B, C, D, T_0, then T_1..T_n (never pivots).
SymmetryResult solve_symmetry(const RSeries& F, int order);

RField lie_bracket(const RField& X, const RField& Y);
PField lie_bracket(const PField& X, const PField& Y);

// Coefficients of X in the basis, or nullopt when X is outside the span.
std::optional<std::vector<Rational>> coordinates_in(const std::vector<RField>& basis, const RField& X);

// True when the fields span the same space.
bool same_span(const std::vector<RField>& a, const std::vector<RField>& b);

// ---- homogeneity propagation ----------------------------------------------

// Two incompatible values for one jet symbol.
struct Conflict {
    Symbol symbol;
    ParamPoly forced;
    ParamPoly alternative;
};

struct Contradiction {
    Exponents alpha;
    std::string transitivity; // e.g. "T[3]", or "1" for the constant part
    ParamPoly value;          // nonzero residual coefficient
    // when the residual equation is linear in an already forced symbol, the
    // value it would force instead
    std::optional<Conflict> conflict;
    std::string to_text() const;
};

struct PropagationOutcome {
    int order = 0;
    std::vector<std::pair<Symbol, ParamPoly>> isotropy; // solved, fully reduced
    std::vector<std::pair<Symbol, ParamPoly>> forced;   // jet symbols, solving order
    std::optional<Contradiction> contradiction;
    std::optional<Symbol> split_request;
    std::vector<CoefficientEquation> pending; // equations blocked by an undecided coefficient
    PSeries F;                                // jet after the forced values

    const ParamPoly* forced_value(Symbol s) const;
    std::string to_text() const;
};

// Eliminates the isotropy unknowns from the eqL equations through the order,
// requires every transitivity coefficient to vanish and solves the resulting
// constraints for jet symbols. registry lists symbols known to be nonzero.
PropagationOutcome propagate_homogeneity(const PSeries& F, const SymbolSet& registry, int order);

} // namespace affhom
