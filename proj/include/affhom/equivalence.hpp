#pragma once

#include <string>
#include <utility>
#include <vector>

#include <affhom/jet.hpp>
#include <affhom/param_poly.hpp>
#include <affhom/series.hpp>

namespace affhom {

// Linear map (x, u) -> (r, v): r_i = sum_j a_ij x_j + b_i u, v = sum_j c_j x_j + d u.
struct AffineMapSym {
    int n = 0;
    std::vector<std::vector<ParamPoly>> a;
    std::vector<ParamPoly> b;
    std::vector<ParamPoly> c;
    ParamPoly d;
    SymbolSet registry; // symbols assumed nonzero

    static AffineMapSym general(int n);
    static AffineMapSym identity(int n);
    // diagonal a_ii = diag[i], d = diag[n], b = c = 0
    static AffineMapSym diagonal(const std::vector<ParamPoly>& diag);

    AffineMapSym substitute(const Substitution& sub) const;
    ParamPoly determinant() const;
    // registers the symbols of the determinant's monomial content
    void register_determinant();
    SymbolSet parameters() const;
    std::string to_text() const;

    friend bool operator==(const AffineMapSym&, const AffineMapSym&) = default;
};

struct CoefficientEquation {
    Exponents alpha;
    ParamPoly value; // raw coefficient of x^alpha in eqFG
    bool identically_zero() const { return value.is_zero(); }
};

// eqFG = G(a x + b F) - c.x - d F, all coefficients with |alpha| <= order.
std::vector<CoefficientEquation> build_eqFG(const PSeries& F, const PSeries& G, const AffineMapSym& map,
                                            int order);

// The same identity as a series.
PSeries eqFG_series(const PSeries& F, const PSeries& G, const AffineMapSym& map, int order);

struct NormalizationState {
    PSeries F;
    PSeries G;
    AffineMapSym map;
    std::vector<std::string> log;  // replayable assumption log
    std::vector<std::string> notes; // solved values and relations, for reports

    // F as given, G the same jet with F-symbols renamed to G-symbols.
    static NormalizationState initial(const PSeries& F, AffineMapSym map);

    friend bool operator==(const NormalizationState& x, const NormalizationState& y)
    {
        return x.F == y.F && x.G == y.G && x.map == y.map && x.log == y.log;
    }
};

// The F/G twin of a jet symbol, e.g. F[2,1] <-> G[2,1].
Symbol twin_symbol(Symbol s);

NormalizationState assume_zero(const NormalizationState& state, Symbol s);
NormalizationState assume_nonzero(const NormalizationState& state, Symbol s);
// Sets both twins to a value forced elsewhere (e.g. by homogeneity).
NormalizationState assign_jet(const NormalizationState& state, Symbol s, const ParamPoly& value);

// Sets G[alpha] := value and solves the alpha-equation of eqFG for solve_for.
// With mirror, F[alpha] := value as well. Throws SolveError when the equation
// cannot be solved without a branching decision.
NormalizationState normalize_step(const NormalizationState& state, const Exponents& alpha, const Rational& value,
                                  Symbol solve_for, bool mirror);

struct StabilityResult {
    std::vector<std::pair<Symbol, ParamPoly>> solved; // in solving order, fully reduced
    std::vector<ParamPoly> relations;                  // unresolved constraints
    std::vector<Symbol> free_parameters;
    AffineMapSym map;                                  // map after substitution
    std::string to_text() const;
};

// Solves the eqFG coefficient equations of the G-jet against itself through
// the order, for the map parameters.
StabilityResult stability_check(const NormalizationState& state, int order);

// stability_check followed by substituting the solutions into the state.
NormalizationState stabilize_through(const NormalizationState& state, int order);

// Replays an assumption log from an initial state.
NormalizationState replay_log(const NormalizationState& initial, const std::vector<std::string>& log);

// Inverts r = A x + b F(x), v = c x + d F(x) for a numeric invertible map and
// returns the graphing function G of the image through F's bound.
RSeries regraph(const RSeries& F, const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
                const std::vector<Rational>& c, const Rational& d);

} // namespace affhom
