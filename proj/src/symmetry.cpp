#include <affhom/symmetry.hpp>

#include <algorithm>
#include <regex>

#include <affhom/expr_parser.hpp>
#include <affhom/jet.hpp>
#include <affhom/series_io.hpp>

namespace affhom {

// ---- fields ----------------------------------------------------------------

template <class C>
AffineField<C>::AffineField(int num_vars)
    : n(num_vars), m(static_cast<std::size_t>(num_vars) + 1, std::vector<C>(static_cast<std::size_t>(num_vars) + 2))
{
}

template <class C>
bool AffineField<C>::is_zero() const
{
    for (const auto& row : m) {
        for (const auto& e : row) {
            if (!is_zero_coefficient(e)) {
                return false;
            }
        }
    }
    return true;
}

template struct AffineField<Rational>;
template struct AffineField<ParamPoly>;

namespace {

Symbol field_symbol(const std::string& name)
{
    return Symbol::intern(SymbolKind::field_parameter, name);
}

std::vector<std::string> coordinate_names(int n)
{
    auto names = base_variable_names(n);
    names.push_back("u");
    return names;
}

template <class C, class Fn>
auto map_field(const AffineField<C>& f, Fn&& fn)
{
    AffineField<decltype(fn(std::declval<const C&>()))> r(f.n);
    for (std::size_t i = 0; i < f.m.size(); ++i) {
        for (std::size_t j = 0; j < f.m[i].size(); ++j) {
            r.m[i][j] = fn(f.m[i][j]);
        }
    }
    return r;
}

// Component of one row as a polynomial in the coordinate symbols.
ParamPoly component(const PField& f, std::size_t row, const std::vector<Symbol>& coords)
{
    ParamPoly p = f.m[row][static_cast<std::size_t>(f.n) + 1];
    for (int j = 0; j <= f.n; ++j) {
        p += f.m[row][static_cast<std::size_t>(j)] * ParamPoly(coords[static_cast<std::size_t>(j)]);
    }
    return p;
}

std::vector<Symbol> coordinate_symbols(int n)
{
    std::vector<Symbol> coords;
    for (const auto& name : coordinate_names(n)) {
        coords.push_back(Symbol::intern(SymbolKind::coordinate, name));
    }
    return coords;
}

} // namespace

PField general_field(int n)
{
    PField f(n);
    for (int i = 1; i <= n; ++i) {
        f.T(i) = ParamPoly(field_symbol("T[" + std::to_string(i) + "]"));
        for (int j = 1; j <= n; ++j) {
            f.A(i, j) = ParamPoly(field_symbol("A[" + std::to_string(i) + "," + std::to_string(j) + "]"));
        }
        f.B(i) = ParamPoly(field_symbol("B[" + std::to_string(i) + "]"));
        f.Cx(i) = ParamPoly(field_symbol("C[" + std::to_string(i) + "]"));
    }
    f.T(0) = ParamPoly(field_symbol("T[0]"));
    f.D() = ParamPoly(field_symbol("D"));
    return f;
}

PField lift(const RField& f)
{
    return map_field(f, [](const Rational& q) { return ParamPoly(q); });
}

RField lower(const PField& f)
{
    return map_field(f, [](const ParamPoly& p) { return p.constant(); });
}

PField substitute(const PField& f, const Substitution& sub)
{
    return map_field(f, [&](const ParamPoly& p) { return p.substitute(sub); });
}

std::string render_field(const PField& f)
{
    const auto coords = coordinate_symbols(f.n);
    const auto names = coordinate_names(f.n);
    std::string out;
    for (std::size_t row = 0; row < f.m.size(); ++row) {
        const ParamPoly p = component(f, row, coords);
        if (p.is_zero()) {
            continue;
        }
        if (!out.empty()) {
            out += " + ";
        }
        const std::string d = "d/d" + names[row];
        if (p == ParamPoly(1)) {
            out += d;
        } else if (p.is_monomial() && p.terms().begin()->second == 1) {
            out += p.to_string() + " " + d;
        } else {
            out += "(" + p.to_string() + ") " + d;
        }
    }
    return out.empty() ? "0" : out;
}

std::string render_field(const RField& f)
{
    return render_field(lift(f));
}

PField parse_field(std::string_view text, int n)
{
    const auto names = coordinate_names(n);
    std::string s(text);
    s = std::regex_replace(s, std::regex(R"(\s*d/d([a-z]))"), "*_d$1");
    s = std::regex_replace(s, std::regex(R"((^|[-+(])(\s*)\*)"), "$1$2");
    const ParamPoly p = parse_poly(s);
    const auto coords = coordinate_symbols(n);

    PField f(n);
    for (const auto& [mono, c] : p.terms()) {
        int row = -1;
        Monomial rest = mono;
        for (std::size_t k = 0; k < names.size(); ++k) {
            const auto d = Symbol::find("_d" + names[k]);
            if (d && mono.exponent(*d) != 0) {
                if (row >= 0 || mono.exponent(*d) != 1) {
                    throw ParseError("malformed field term in '" + std::string(text) + "'");
                }
                row = static_cast<int>(k);
                rest = rest.without(*d);
            }
        }
        if (row < 0) {
            throw ParseError("term without d/d... in '" + std::string(text) + "'");
        }
        int col = n + 1;
        for (std::size_t k = 0; k < coords.size(); ++k) {
            const int e = rest.exponent(coords[k]);
            if (e == 0) {
                continue;
            }
            if (e != 1 || col != n + 1) {
                throw ParseError("field '" + std::string(text) + "' is not affine");
            }
            col = static_cast<int>(k);
            rest = rest.without(coords[k]);
        }
        for (const auto& [sym, e] : rest.factors()) {
            if (sym.kind() == SymbolKind::coordinate) {
                throw ParseError("unknown coordinate '" + sym.name() + "' for n = " + std::to_string(n));
            }
        }
        f.m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] += ParamPoly(rest, c);
    }
    return f;
}

std::vector<Rational> origin_value(const RField& f)
{
    std::vector<Rational> v;
    for (int i = 0; i < f.n; ++i) {
        v.push_back(f.translation(i));
    }
    return v;
}

std::vector<Rational> flatten(const RField& f)
{
    std::vector<Rational> v;
    for (const auto& row : f.m) {
        v.insert(v.end(), row.begin(), row.end());
    }
    return v;
}

RField unflatten(const std::vector<Rational>& v, int n)
{
    RField f(n);
    const std::size_t width = static_cast<std::size_t>(n) + 2;
    if (v.size() != width * (width - 1)) {
        throw PreconditionError("wrong length for a field with n = " + std::to_string(n));
    }
    for (std::size_t i = 0; i < f.m.size(); ++i) {
        for (std::size_t j = 0; j < width; ++j) {
            f.m[i][j] = v[i * width + j];
        }
    }
    return f;
}

// ---- eqL -------------------------------------------------------------------

PSeries eqL_series(const PSeries& F, const PField& field, int order)
{
    const int n = F.num_vars();
    if (field.n != n) {
        throw PreconditionError("field and jet disagree on the dimension");
    }
    if (order + 1 > F.bound()) {
        throw PreconditionError("eqL through order " + std::to_string(order) + " needs the jet through order "
                                + std::to_string(order + 1));
    }
    const PSeries Ft = F.truncated(order + 1);
    const PSeries Fo = F.truncated(order);
    PSeries eq(n, order);
    for (int i = 0; i < n; ++i) {
        const PSeries dF = series_diff(Ft, i);
        const auto& row = field.m[static_cast<std::size_t>(i)];
        eq.add_scaled(dF, row[static_cast<std::size_t>(n) + 1]);
        for (int j = 0; j < n; ++j) {
            const ParamPoly& a = row[static_cast<std::size_t>(j)];
            if (!a.is_zero()) {
                eq.add_scaled(series_mul(dF, PSeries::variable(n, order, j)), a);
            }
        }
        if (!row[static_cast<std::size_t>(n)].is_zero()) {
            eq.add_scaled(series_mul(dF, Fo), row[static_cast<std::size_t>(n)]);
        }
    }
    const auto& last = field.m[static_cast<std::size_t>(n)];
    eq.add(Exponents(n), -last[static_cast<std::size_t>(n) + 1]);
    for (int j = 0; j < n; ++j) {
        if (order >= 1) {
            eq.add(Exponents::unit(n, j), -last[static_cast<std::size_t>(j)]);
        }
    }
    eq.add_scaled(Fo, -last[static_cast<std::size_t>(n)]);
    return eq;
}

std::vector<CoefficientEquation> build_eqL(const PSeries& F, const PField& field, int order)
{
    const PSeries eq = eqL_series(F, field, order);
    std::vector<CoefficientEquation> out;
    for (int deg = 0; deg <= order; ++deg) {
        for_each_of_degree(F.num_vars(), deg, [&](const Exponents& e) { out.push_back({e, eq.coefficient(e)}); });
    }
    return out;
}

std::optional<int> tangency_failure(const PSeries& F, const PField& field, int order)
{
    const PSeries eq = eqL_series(F, field, order);
    if (eq.is_zero()) {
        return std::nullopt;
    }
    return eq.terms().begin()->first.degree();
}

// ---- symmetry algebra ------------------------------------------------------

namespace {

// Unknown order for elimination; the translations T_1..T_n come last.
std::vector<std::pair<std::size_t, std::size_t>> unknown_cells(int n)
{
    const std::size_t N = static_cast<std::size_t>(n);
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            cells.emplace_back(i, j);
        }
    }
    for (std::size_t i = 0; i < N; ++i) {
        cells.emplace_back(i, N);
    }
    for (std::size_t j = 0; j < N; ++j) {
        cells.emplace_back(N, j);
    }
    cells.emplace_back(N, N);
    cells.emplace_back(N, N + 1);
    for (std::size_t i = 0; i < N; ++i) {
        cells.emplace_back(i, N + 1);
    }
    return cells;
}

std::vector<RField> kernel_at(const RSeries& F, int order, int* dimension)
{
    const int n = F.num_vars();
    const PField L = general_field(n);
    const auto cells = unknown_cells(n);
    std::vector<Symbol> unknowns;
    for (const auto& [i, j] : cells) {
        unknowns.push_back(L.m[i][j].terms().begin()->first.factors().front().first);
    }
    RMatrix rows;
    for (const auto& eq : build_eqL(lift(F), L, order)) {
        if (eq.value.is_zero()) {
            continue;
        }
        std::vector<Rational> row(unknowns.size());
        for (std::size_t k = 0; k < unknowns.size(); ++k) {
            row[k] = eq.value.coefficient_of(unknowns[k], 1).constant();
        }
        rows.push_back(std::move(row));
    }
    const auto basis = kernel_basis(rref(std::move(rows), static_cast<int>(unknowns.size())));
    *dimension = static_cast<int>(basis.size());
    std::vector<RField> fields;
    for (const auto& v : basis) {
        RField f(n);
        for (std::size_t k = 0; k < cells.size(); ++k) {
            f.m[cells[k].first][cells[k].second] = v[k];
        }
        fields.push_back(std::move(f));
    }
    return fields;
}

template <class C>
AffineField<C> bracket_impl(const AffineField<C>& X, const AffineField<C>& Y)
{
    // [X, Y] with X = M z + t, Y = N z + s is (N M - M N) z + (N t - M s)
    const std::size_t w = static_cast<std::size_t>(X.n) + 1;
    if (X.n != Y.n) {
        throw PreconditionError("fields of different dimensions");
    }
    AffineField<C> r(X.n);
    for (std::size_t i = 0; i < w; ++i) {
        for (std::size_t j = 0; j < w; ++j) {
            C acc(0);
            for (std::size_t k = 0; k < w; ++k) {
                acc += Y.m[i][k] * X.m[k][j];
                acc -= X.m[i][k] * Y.m[k][j];
            }
            r.m[i][j] = acc;
        }
        C acc(0);
        for (std::size_t k = 0; k < w; ++k) {
            acc += Y.m[i][k] * X.m[k][w];
            acc -= X.m[i][k] * Y.m[k][w];
        }
        r.m[i][w] = acc;
    }
    return r;
}

} // namespace

SymmetryResult solve_symmetry(const RSeries& F, int order)
{
    SymmetryResult r;
    r.order = order;
    r.basis = kernel_at(F, order, &r.dimension);
    if (order >= 1) {
        kernel_at(F, order - 1, &r.dimension_previous);
    } else {
        r.dimension_previous = r.dimension;
    }
    return r;
}

RField lie_bracket(const RField& X, const RField& Y)
{
    return bracket_impl(X, Y);
}

PField lie_bracket(const PField& X, const PField& Y)
{
    return bracket_impl(X, Y);
}

std::optional<std::vector<Rational>> coordinates_in(const std::vector<RField>& basis, const RField& X)
{
    std::vector<std::vector<Rational>> vectors;
    for (const auto& b : basis) {
        vectors.push_back(flatten(b));
    }
    return solve_combination(vectors, flatten(X));
}

bool same_span(const std::vector<RField>& a, const std::vector<RField>& b)
{
    RMatrix ma, mb, both;
    for (const auto& f : a) {
        ma.push_back(flatten(f));
    }
    for (const auto& f : b) {
        mb.push_back(flatten(f));
    }
    both = ma;
    both.insert(both.end(), mb.begin(), mb.end());
    if (both.empty()) {
        return true;
    }
    const int cols = static_cast<int>(both.front().size());
    const int r = rank(both, cols);
    return rank(ma, cols) == r && rank(mb, cols) == r;
}

// ---- propagation -----------------------------------------------------------

std::string Contradiction::to_text() const
{
    std::string s = "contradiction at " + alpha.index_string() + ": coefficient of " + transitivity + " is "
                    + value.to_string();
    if (conflict) {
        s += "; " + conflict->symbol.name() + " = " + conflict->forced.to_string() + " vs "
             + conflict->alternative.to_string();
    }
    return s;
}

const ParamPoly* PropagationOutcome::forced_value(Symbol s) const
{
    for (const auto& [sym, v] : forced) {
        if (sym == s) {
            return &v;
        }
    }
    return nullptr;
}

std::string PropagationOutcome::to_text() const
{
    std::string s = "propagation through order " + std::to_string(order) + "\n";
    for (const auto& [sym, v] : isotropy) {
        s += "  isotropy " + sym.name() + " = " + v.to_string() + "\n";
    }
    for (const auto& [sym, v] : forced) {
        s += "  forced " + sym.name() + " = " + v.to_string() + "\n";
    }
    if (contradiction) {
        s += "  " + contradiction->to_text() + "\n";
    }
    if (split_request) {
        s += "  split on " + split_request->name() + "\n";
    }
    return s;
}

namespace {

bool is_transitivity(Symbol s, int n)
{
    const std::string& name = s.name();
    if (s.kind() != SymbolKind::field_parameter || name.rfind("T[", 0) != 0) {
        return false;
    }
    const int i = std::stoi(name.substr(2));
    return i >= 1 && i <= n;
}

// T[0], D, C ascending, B ascending, A row-major descending.
std::vector<Symbol> isotropy_preference(int n)
{
    const PField L = general_field(n);
    auto sym = [](const ParamPoly& p) { return p.terms().begin()->first.factors().front().first; };
    PField g = L;
    std::vector<Symbol> out{sym(g.T(0)), sym(g.D())};
    for (int j = 1; j <= n; ++j) {
        out.push_back(sym(g.Cx(j)));
    }
    for (int i = 1; i <= n; ++i) {
        out.push_back(sym(g.B(i)));
    }
    for (int i = n; i >= 1; --i) {
        for (int j = n; j >= 1; --j) {
            out.push_back(sym(g.A(i, j)));
        }
    }
    return out;
}

std::optional<Symbol> first_undecided(const ParamPoly& p, const SymbolSet& registry)
{
    std::vector<Symbol> candidates;
    for (Symbol s : p.symbols()) {
        if (!registry.contains(s)
            && (s.kind() == SymbolKind::jet_coefficient || s.kind() == SymbolKind::branch_parameter)) {
            candidates.push_back(s);
        }
    }
    if (candidates.empty()) {
        return std::nullopt;
    }
    // lowest order first: that is where the tree branches
    std::sort(candidates.begin(), candidates.end(), [](Symbol a, Symbol b) {
        if (a.kind() != b.kind()) {
            return a.kind() == SymbolKind::jet_coefficient;
        }
        if (a.kind() == SymbolKind::jet_coefficient) {
            const Exponents ea = jet_index(a);
            const Exponents eb = jet_index(b);
            if (ea.degree() != eb.degree()) {
                return ea.degree() < eb.degree();
            }
            return ea > eb;
        }
        return a.name() < b.name();
    });
    return candidates.front();
}

struct Propagator {
    int n;
    const SymbolSet& registry;
    std::vector<CoefficientEquation> eqs;
    std::vector<ParamPoly> cur;
    std::vector<ParamPoly> raw; // cur without the forced jet values
    std::vector<Symbol> transitivity;
    std::vector<Symbol> preference;
    PropagationOutcome out;

    void apply(Symbol s, const ParamPoly& v, bool to_raw)
    {
        const Substitution sub{{s, v}};
        for (auto& e : cur) {
            if (e.contains(s)) {
                e = e.substitute(sub);
            }
        }
        if (to_raw) {
            for (auto& e : raw) {
                if (e.contains(s)) {
                    e = e.substitute(sub);
                }
            }
        }
        for (auto& [k, old] : out.isotropy) {
            if (old.contains(s)) {
                old = old.substitute(sub);
            }
        }
        for (auto& [k, old] : out.forced) {
            if (old.contains(s)) {
                old = old.substitute(sub);
            }
        }
    }

    void solve_isotropy(Symbol s, const ParamPoly& v)
    {
        apply(s, v, true);
        out.isotropy.emplace_back(s, v);
    }

    void force_jet(Symbol s, const ParamPoly& v)
    {
        apply(s, v, false);
        out.forced.emplace_back(s, v);
    }

    bool has_isotropy(const ParamPoly& p) const
    {
        for (Symbol s : p.symbols()) {
            if (s.kind() == SymbolKind::field_parameter && !is_transitivity(s, n)) {
                return true;
            }
        }
        return false;
    }

    // splits an isotropy-free equation into its transitivity coefficients
    std::vector<std::pair<std::string, ParamPoly>> constraints(const ParamPoly& p) const
    {
        std::vector<std::pair<std::string, ParamPoly>> cs;
        Substitution zero;
        for (Symbol t : transitivity) {
            cs.emplace_back(t.name(), p.coefficient_of(t, 1));
            zero.emplace(t, ParamPoly());
        }
        cs.emplace_back("1", p.substitute(zero));
        return cs;
    }

    // Looks for a forced symbol that the residual equation, with every other
    // forced value substituted, would determine differently.
    std::optional<Conflict> find_conflict(std::size_t index, const std::string& which) const
    {
        for (auto it = out.forced.rbegin(); it != out.forced.rend(); ++it) {
            const Symbol s = it->first;
            Substitution others;
            for (const auto& [t, v] : out.forced) {
                if (t != s) {
                    others.emplace(t, v);
                }
            }
            ParamPoly c;
            for (const auto& [name, v] : constraints(raw[index].substitute(others))) {
                if (name == which) {
                    c = v;
                }
            }
            if (c.degree_in(s) != 1 || c.min_degree_in(s) < 0
                || !certifiably_nonzero(c.coefficient_of(s, 1), registry)) {
                continue;
            }
            const ParamPoly alternative = solve_linear_in(c, s, registry);
            if (alternative != it->second) {
                return Conflict{s, it->second, alternative};
            }
        }
        return std::nullopt;
    }

    // One pass; true when something was solved (callers restart).
    bool step()
    {
        out.pending.clear();
        out.split_request.reset();
        for (std::size_t k = 0; k < cur.size(); ++k) {
            const ParamPoly& v = cur[k];
            if (v.is_zero()) {
                continue;
            }
            if (has_isotropy(v)) {
                for (Symbol s : preference) {
                    if (v.degree_in(s) == 1 && certifiably_nonzero(v.coefficient_of(s, 1), registry)) {
                        solve_isotropy(s, solve_linear_in(v, s, registry));
                        return true;
                    }
                }
                for (Symbol s : preference) {
                    if (v.degree_in(s) == 1) {
                        if (!out.split_request) {
                            out.split_request = first_undecided(v.coefficient_of(s, 1), registry);
                        }
                        break;
                    }
                }
                out.pending.push_back({eqs[k].alpha, v});
                continue;
            }
            for (const auto& [which, c] : constraints(v)) {
                if (c.is_zero()) {
                    continue;
                }
                if (c.is_constant()) {
                    out.contradiction = Contradiction{eqs[k].alpha, which, c, find_conflict(k, which)};
                    return false;
                }
                if (solve_constraint(k, which, c)) {
                    return true;
                }
                if (out.contradiction) {
                    return false;
                }
            }
        }
        return false;
    }

    bool solve_constraint(std::size_t k, const std::string& which, const ParamPoly& c)
    {
        std::vector<Symbol> jets;
        for (Symbol s : c.symbols()) {
            if (s.kind() == SymbolKind::jet_coefficient) {
                jets.push_back(s);
            }
        }
        // highest order first, ties to the larger exponent in lexicographic order
        std::sort(jets.begin(), jets.end(), [](Symbol a, Symbol b) {
            const Exponents ea = jet_index(a);
            const Exponents eb = jet_index(b);
            if (ea.degree() != eb.degree()) {
                return ea.degree() > eb.degree();
            }
            return ea > eb;
        });
        for (Symbol s : jets) {
            if (c.degree_in(s) == 1 && c.min_degree_in(s) >= 0
                && certifiably_nonzero(c.coefficient_of(s, 1), registry)) {
                const ParamPoly value = solve_linear_in(c, s, registry);
                if (registry.contains(s) && value.is_zero()) {
                    out.contradiction = Contradiction{eqs[k].alpha, which, c, std::nullopt};
                    return false;
                }
                force_jet(s, value);
                return true;
            }
        }
        if (c.is_monomial()) {
            std::vector<Symbol> open;
            for (const auto& [s, e] : c.terms().begin()->first.factors()) {
                if (!registry.contains(s)) {
                    open.push_back(s);
                }
            }
            if (open.empty()) {
                out.contradiction = Contradiction{eqs[k].alpha, which, c, std::nullopt};
                return false;
            }
            if (open.size() == 1 && open.front().kind() == SymbolKind::jet_coefficient) {
                force_jet(open.front(), ParamPoly());
                return true;
            }
        }
        if (!out.split_request) {
            out.split_request = first_undecided(c, registry);
        }
        out.pending.push_back({eqs[k].alpha, c});
        return false;
    }
};

} // namespace

PropagationOutcome propagate_homogeneity(const PSeries& F, const SymbolSet& registry, int order)
{
    const int n = F.num_vars();
    Propagator p{n, registry, build_eqL(F, general_field(n), order), {}, {}, {}, {}, {}};
    p.out.order = order;
    for (const auto& e : p.eqs) {
        p.cur.push_back(e.value);
    }
    p.raw = p.cur;
    for (int i = 1; i <= n; ++i) {
        p.transitivity.push_back(field_symbol("T[" + std::to_string(i) + "]"));
    }
    p.preference = isotropy_preference(n);
    while (p.step()) {
    }
    Substitution jets;
    for (const auto& [s, v] : p.out.forced) {
        jets.emplace(s, v);
    }
    p.out.F = series_substitute(F, jets);
    if (p.out.contradiction) {
        p.out.split_request.reset();
    }
    return p.out;
}

} // namespace affhom
