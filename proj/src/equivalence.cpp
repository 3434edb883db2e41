#include <affhom/equivalence.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

#include <affhom/expr_parser.hpp>

namespace affhom {

namespace {

Symbol group_symbol(const std::string& name)
{
    return Symbol::intern(SymbolKind::group_parameter, name);
}

std::string idx(int i)
{
    return std::to_string(i + 1);
}

// Leibniz expansion; sizes here are at most 5.
ParamPoly determinant(const std::vector<std::vector<ParamPoly>>& m)
{
    const std::size_t n = m.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    ParamPoly det;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (perm[i] > perm[j]) {
                    ++inversions;
                }
            }
        }
        ParamPoly term(Rational(inversions % 2 == 0 ? 1 : -1));
        for (std::size_t i = 0; i < n && !term.is_zero(); ++i) {
            term *= m[i][perm[i]];
        }
        det += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

bool is_group_parameter(Symbol s)
{
    return s.kind() == SymbolKind::group_parameter;
}

// c's, then d, then b's, then a's; index order inside each group.
int preference_rank(Symbol s)
{
    const char head = s.name().front();
    switch (head) {
    case 'c':
        return 0;
    case 'd':
        return 1;
    case 'b':
        return 2;
    default:
        return 3;
    }
}

std::vector<Symbol> ordered_candidates(const ParamPoly& p)
{
    std::vector<Symbol> out;
    for (Symbol s : p.symbols()) {
        if (is_group_parameter(s)) {
            out.push_back(s);
        }
    }
    std::sort(out.begin(), out.end(), [](Symbol x, Symbol y) {
        const int rx = preference_rank(x);
        const int ry = preference_rank(y);
        if (rx != ry) {
            return rx < ry;
        }
        return x.name() < y.name();
    });
    return out;
}

struct RootForm {
    int k = 0;
    ParamPoly rhs; // s^k = rhs
};

// p = lead * s^k + rest with lead certifiable and rest free of s.
std::optional<RootForm> as_root_form(const ParamPoly& p, Symbol s, const SymbolSet& registry)
{
    const int k = p.degree_in(s);
    if (k < 2 || p.min_degree_in(s) < 0) {
        return std::nullopt;
    }
    for (int j = 1; j < k; ++j) {
        if (!p.coefficient_of(s, j).is_zero()) {
            return std::nullopt;
        }
    }
    const ParamPoly lead = p.coefficient_of(s, k);
    if (!certifiably_nonzero(lead, registry)) {
        return std::nullopt;
    }
    const auto& [m, c] = *lead.terms().begin();
    return RootForm{k, -(p.coefficient_of(s, 0).divide(m) * (Rational(1) / c))};
}

std::optional<ParamPoly> exact_solution(const RootForm& form)
{
    if (form.k % 2 == 0 || !form.rhs.is_constant()) {
        return std::nullopt;
    }
    if (auto r = exact_root(form.rhs.constant(), static_cast<unsigned>(form.k))) {
        return ParamPoly(*r);
    }
    return std::nullopt;
}

void apply_sub(NormalizationState& st, const Substitution& sub)
{
    st.F = series_substitute(st.F, sub);
    st.G = series_substitute(st.G, sub);
    st.map = st.map.substitute(sub);
}

} // namespace

// ---- AffineMapSym ----------------------------------------------------------

AffineMapSym AffineMapSym::general(int n)
{
    AffineMapSym m;
    m.n = n;
    m.a.assign(static_cast<std::size_t>(n), std::vector<ParamPoly>(static_cast<std::size_t>(n)));
    m.b.resize(static_cast<std::size_t>(n));
    m.c.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m.a[i][j] = ParamPoly(group_symbol("a[" + idx(i) + "," + idx(j) + "]"));
        }
        m.b[i] = ParamPoly(group_symbol("b[" + idx(i) + "]"));
        m.c[i] = ParamPoly(group_symbol("c[" + idx(i) + "]"));
    }
    m.d = ParamPoly(group_symbol("d"));
    m.register_determinant();
    return m;
}

AffineMapSym AffineMapSym::identity(int n)
{
    std::vector<ParamPoly> diag(static_cast<std::size_t>(n) + 1, ParamPoly(1));
    return diagonal(diag);
}

AffineMapSym AffineMapSym::diagonal(const std::vector<ParamPoly>& diag)
{
    if (diag.size() < 2) {
        throw PreconditionError("diagonal map needs n + 1 entries");
    }
    AffineMapSym m;
    m.n = static_cast<int>(diag.size()) - 1;
    m.a.assign(diag.size() - 1, std::vector<ParamPoly>(diag.size() - 1));
    m.b.resize(diag.size() - 1);
    m.c.resize(diag.size() - 1);
    for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
        m.a[i][i] = diag[i];
    }
    m.d = diag.back();
    m.register_determinant();
    // every diagonal entry of an invertible diagonal map is nonzero
    for (const auto& e : diag) {
        if (e.is_zero()) {
            throw PreconditionError("diagonal map has a zero entry");
        }
        const Monomial content = e.content();
        for (const auto& [s, k] : content.factors()) {
            m.registry.insert(s);
        }
    }
    return m;
}

AffineMapSym AffineMapSym::substitute(const Substitution& sub) const
{
    AffineMapSym m = *this;
    for (auto& row : m.a) {
        for (auto& e : row) {
            e = e.substitute(sub);
        }
    }
    for (auto& e : m.b) {
        e = e.substitute(sub);
    }
    for (auto& e : m.c) {
        e = e.substitute(sub);
    }
    m.d = m.d.substitute(sub);
    for (const auto& [s, v] : sub) {
        m.registry.erase(s);
    }
    m.register_determinant();
    return m;
}

ParamPoly AffineMapSym::determinant() const
{
    std::vector<std::vector<ParamPoly>> full(static_cast<std::size_t>(n) + 1,
                                             std::vector<ParamPoly>(static_cast<std::size_t>(n) + 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            full[i][j] = a[i][j];
        }
        full[i][n] = b[i];
        full[n][i] = c[i];
    }
    full[n][n] = d;
    return affhom::determinant(full);
}

void AffineMapSym::register_determinant()
{
    const ParamPoly det = determinant();
    if (det.is_zero()) {
        throw InconsistencyError("affine map became singular");
    }
    const Monomial content = det.content();
    for (const auto& [s, e] : content.factors()) {
        registry.insert(s);
    }
}

SymbolSet AffineMapSym::parameters() const
{
    SymbolSet out;
    auto collect = [&](const ParamPoly& p) {
        for (Symbol s : p.symbols()) {
            if (is_group_parameter(s)) {
                out.insert(s);
            }
        }
    };
    for (const auto& row : a) {
        for (const auto& e : row) {
            collect(e);
        }
    }
    for (const auto& e : b) {
        collect(e);
    }
    for (const auto& e : c) {
        collect(e);
    }
    collect(d);
    return out;
}

std::string AffineMapSym::to_text() const
{
    std::string s;
    for (int i = 0; i < n; ++i) {
        s += "  [";
        for (int j = 0; j < n; ++j) {
            s += a[i][j].to_string() + " | ";
        }
        s += b[i].to_string() + "]\n";
    }
    s += "  [";
    for (int j = 0; j < n; ++j) {
        s += c[j].to_string() + " | ";
    }
    s += d.to_string() + "]\n";
    return s;
}

// ---- eqFG ------------------------------------------------------------------

PSeries eqFG_series(const PSeries& F, const PSeries& G, const AffineMapSym& map, int order)
{
    const int n = map.n;
    if (F.num_vars() != n || G.num_vars() != n) {
        throw PreconditionError("eqFG: jets and map disagree on the dimension");
    }
    if (order > F.bound() || order > G.bound()) {
        throw PreconditionError("eqFG order " + std::to_string(order) + " exceeds the available truncation");
    }
    const PSeries Ft = F.truncated(order);
    std::vector<PSeries> inner;
    for (int i = 0; i < n; ++i) {
        PSeries r(n, order);
        for (int j = 0; j < n; ++j) {
            if (order >= 1) {
                r.add(Exponents::unit(n, j), map.a[i][j]);
            }
        }
        r.add_scaled(Ft, map.b[i]);
        inner.push_back(std::move(r));
    }
    PSeries eq = series_compose(G.truncated(order), inner);
    for (int j = 0; j < n; ++j) {
        if (order >= 1) {
            eq.add(Exponents::unit(n, j), -map.c[j]);
        }
    }
    eq.add_scaled(Ft, -map.d);
    return eq;
}

std::vector<CoefficientEquation> build_eqFG(const PSeries& F, const PSeries& G, const AffineMapSym& map, int order)
{
    const PSeries eq = eqFG_series(F, G, map, order);
    std::vector<CoefficientEquation> out;
    for (int deg = 0; deg <= order; ++deg) {
        for_each_of_degree(map.n, deg, [&](const Exponents& e) { out.push_back({e, eq.coefficient(e)}); });
    }
    return out;
}

// ---- normalization ---------------------------------------------------------

NormalizationState NormalizationState::initial(const PSeries& F, AffineMapSym map)
{
    NormalizationState st;
    st.F = F;
    st.G = series_substitute(F, rename_jet_symbols(F, "F", "G"));
    st.map = std::move(map);
    return st;
}

Symbol twin_symbol(Symbol s)
{
    const std::string& name = s.name();
    if (s.kind() != SymbolKind::jet_coefficient || name.size() < 2) {
        throw PreconditionError("'" + name + "' is not a jet symbol");
    }
    const char other = name.front() == 'F' ? 'G' : 'F';
    return Symbol::intern(SymbolKind::jet_coefficient, std::string(1, other) + name.substr(1));
}

NormalizationState assume_zero(const NormalizationState& state, Symbol s)
{
    const Symbol t = twin_symbol(s);
    if (state.map.registry.contains(s) || state.map.registry.contains(t)) {
        throw InconsistencyError(s.name() + " is assumed nonzero");
    }
    NormalizationState st = state;
    apply_sub(st, Substitution{{s, ParamPoly()}, {t, ParamPoly()}});
    st.log.push_back("assume-zero " + s.name());
    return st;
}

NormalizationState assume_nonzero(const NormalizationState& state, Symbol s)
{
    const Symbol t = twin_symbol(s);
    NormalizationState st = state;
    st.map.registry.insert(s);
    st.map.registry.insert(t);
    st.log.push_back("assume-nonzero " + s.name());
    return st;
}

NormalizationState assign_jet(const NormalizationState& state, Symbol s, const ParamPoly& value)
{
    const Symbol t = twin_symbol(s);
    if (value.is_zero() && (state.map.registry.contains(s) || state.map.registry.contains(t))) {
        throw InconsistencyError(s.name() + " is assumed nonzero");
    }
    Substitution swap;
    for (Symbol v : value.symbols()) {
        if (v.kind() == SymbolKind::jet_coefficient) {
            swap.emplace(v, ParamPoly(twin_symbol(v)));
        }
    }
    NormalizationState st = state;
    apply_sub(st, Substitution{{s, value}, {t, value.substitute(swap)}});
    st.log.push_back("assign " + s.name() + " := " + value.to_string());
    return st;
}

NormalizationState normalize_step(const NormalizationState& state, const Exponents& alpha, const Rational& value,
                                  Symbol solve_for, bool mirror)
{
    const Symbol g = jet_symbol("G", alpha);
    const Symbol f = jet_symbol("F", alpha);
    bool present = false;
    for (const auto& [e, c] : state.G.terms()) {
        if (c.contains(g)) {
            present = true;
            break;
        }
    }
    if (!present) {
        if (is_zero_coefficient(state.G.coefficient(alpha))) {
            throw SolveError("relative invariant vanishes identically: " + g.name() + " = 0");
        }
        throw SolveError(g.name() + " is already normalized");
    }

    const int order = alpha.degree();
    const PSeries eq = eqFG_series(state.F, state.G, state.map, order);
    Substitution set_g{{g, ParamPoly(value)}};
    if (mirror) {
        set_g.emplace(f, ParamPoly(value));
    }
    ParamPoly p = eq.coefficient(alpha).substitute(set_g);
    const SymbolSet& registry = state.map.registry;
    p = strip_registered_content(p, registry);
    if (p.is_zero()) {
        throw SolveError("equation " + alpha.index_string() + " vanishes; nothing to solve for " + solve_for.name());
    }

    NormalizationState st = state;
    std::string line = "normalize " + g.name() + " := " + to_string(value) + " solving " + solve_for.name();
    if (mirror) {
        line += " mirror";
    }

    std::optional<ParamPoly> solution;
    if (p.degree_in(solve_for) == 1 && p.min_degree_in(solve_for) >= 0) {
        solution = solve_linear_in(p, solve_for, registry);
    } else if (auto form = as_root_form(p, solve_for, registry)) {
        solution = exact_solution(*form);
        if (!solution) {
            st.notes.push_back("relation " + solve_for.name() + "^" + std::to_string(form->k) + " = "
                               + form->rhs.to_string());
        }
    } else {
        throw SolveError("cannot solve " + p.to_string() + " for " + solve_for.name());
    }

    Substitution sub = set_g;
    if (solution) {
        if (registry.contains(solve_for)) {
            if (solution->is_zero()) {
                throw SolveError("relative invariant vanishes identically: " + solve_for.name() + " would be 0");
            }
            if (!certifiably_nonzero(*solution, registry)) {
                throw SolveError("value " + solution->to_string() + " for " + solve_for.name()
                                 + " is not certifiably nonzero");
            }
        }
        sub.emplace(solve_for, *solution);
        st.notes.push_back(solve_for.name() + " := " + solution->to_string());
    }
    apply_sub(st, sub);
    st.log.push_back(line);
    return st;
}

// ---- stability -------------------------------------------------------------

std::string StabilityResult::to_text() const
{
    std::string s;
    for (const auto& [sym, v] : solved) {
        s += "  " + sym.name() + " = " + v.to_string() + "\n";
    }
    for (const auto& r : relations) {
        s += "  relation 0 = " + r.to_string() + "\n";
    }
    s += "  free:";
    for (Symbol f : free_parameters) {
        s += " " + f.name();
    }
    s += "\n" + map.to_text();
    return s;
}

StabilityResult stability_check(const NormalizationState& state, int order)
{
    const auto eqs = build_eqFG(state.G, state.G, state.map, order);
    AffineMapSym map = state.map;
    Substitution solutions;
    std::vector<Symbol> solve_order;

    auto add_solution = [&](Symbol s, const ParamPoly& v) {
        if (map.registry.contains(s) && v.is_zero()) {
            throw InconsistencyError("stability forces the nonzero parameter " + s.name() + " to vanish");
        }
        const Substitution one{{s, v}};
        for (auto& [k, old] : solutions) {
            old = old.substitute(one);
        }
        solutions.emplace(s, v);
        solve_order.push_back(s);
        map = map.substitute(one);
    };

    bool progress = true;
    while (progress) {
        progress = false;
        for (const auto& eq : eqs) {
            ParamPoly p = eq.value.substitute(solutions);
            if (p.is_zero()) {
                continue;
            }
            p = strip_registered_content(p, map.registry);
            if (p.is_monomial()) {
                std::vector<Symbol> unregistered;
                for (const auto& [s, e] : p.terms().begin()->first.factors()) {
                    if (!map.registry.contains(s)) {
                        unregistered.push_back(s);
                    }
                }
                if (unregistered.empty()) {
                    throw InconsistencyError("equation " + eq.alpha.index_string() + " reduces to " + p.to_string());
                }
                if (unregistered.size() == 1 && is_group_parameter(unregistered.front())) {
                    add_solution(unregistered.front(), ParamPoly());
                    progress = true;
                    break;
                }
                continue;
            }
            for (Symbol s : ordered_candidates(p)) {
                std::optional<ParamPoly> v;
                if (p.degree_in(s) == 1 && p.min_degree_in(s) >= 0
                    && certifiably_nonzero(p.coefficient_of(s, 1), map.registry)) {
                    v = solve_linear_in(p, s, map.registry);
                } else if (auto form = as_root_form(p, s, map.registry)) {
                    v = exact_solution(*form);
                }
                if (v) {
                    add_solution(s, *v);
                    progress = true;
                    break;
                }
            }
            if (progress) {
                break;
            }
        }
    }

    StabilityResult result;
    for (Symbol s : solve_order) {
        result.solved.emplace_back(s, solutions.at(s));
    }
    for (const auto& eq : eqs) {
        ParamPoly p = strip_registered_content(eq.value.substitute(solutions), map.registry);
        if (!p.is_zero() && std::find(result.relations.begin(), result.relations.end(), p) == result.relations.end()) {
            result.relations.push_back(p);
        }
    }
    const SymbolSet params = map.parameters();
    result.free_parameters.assign(params.begin(), params.end());
    std::sort(result.free_parameters.begin(), result.free_parameters.end(), ByName{});
    result.map = map;
    return result;
}

NormalizationState stabilize_through(const NormalizationState& state, int order)
{
    const StabilityResult r = stability_check(state, order);
    NormalizationState st = state;
    Substitution sub;
    for (const auto& [s, v] : r.solved) {
        sub.emplace(s, v);
        st.notes.push_back("stabilize " + s.name() + " = " + v.to_string());
    }
    for (const auto& rel : r.relations) {
        st.notes.push_back("stabilize relation 0 = " + rel.to_string());
    }
    apply_sub(st, sub);
    st.log.push_back("stabilize-through " + std::to_string(order));
    return st;
}

NormalizationState replay_log(const NormalizationState& initial, const std::vector<std::string>& log)
{
    NormalizationState st = initial;
    for (const auto& line : log) {
        std::istringstream in(line);
        std::string cmd;
        in >> cmd;
        if (cmd == "assume-zero" || cmd == "assume-nonzero") {
            std::string sym;
            in >> sym;
            const Symbol s = Symbol::named(sym);
            st = cmd == "assume-zero" ? assume_zero(st, s) : assume_nonzero(st, s);
        } else if (cmd == "normalize") {
            std::string target, assign, value, solving, sym, flag;
            in >> target >> assign >> value >> solving >> sym >> flag;
            if (assign != ":=" || solving != "solving") {
                throw ParseError("bad log line '" + line + "'");
            }
            st = normalize_step(st, jet_index(Symbol::named(target)), parse_rational(value), Symbol::named(sym),
                                flag == "mirror");
        } else if (cmd == "assign") {
            std::string sym, assign;
            in >> sym >> assign;
            std::string rest;
            std::getline(in, rest);
            if (assign != ":=") {
                throw ParseError("bad log line '" + line + "'");
            }
            st = assign_jet(st, Symbol::named(sym), parse_poly(rest));
        } else if (cmd == "stabilize-through") {
            int k = -1;
            in >> k;
            st = stabilize_through(st, k);
        } else {
            throw ParseError("unknown log step '" + line + "'");
        }
    }
    return st;
}

// ---- re-graphing -----------------------------------------------------------

namespace {

std::vector<std::vector<Rational>> inverse(std::vector<std::vector<Rational>> m)
{
    const std::size_t n = m.size();
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
        inv[i][i] = 1;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] == 0) {
            ++piv;
        }
        if (piv == n) {
            throw PreconditionError("linear part of the map is singular");
        }
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        const Rational s = 1 / m[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            m[col][j] *= s;
            inv[col][j] *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r != col && m[r][col] != 0) {
                const Rational f = m[r][col];
                for (std::size_t j = 0; j < n; ++j) {
                    m[r][j] -= f * m[col][j];
                    inv[r][j] -= f * inv[col][j];
                }
            }
        }
    }
    return inv;
}

} // namespace

RSeries regraph(const RSeries& F, const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
                const std::vector<Rational>& c, const Rational& d)
{
    const int n = F.num_vars();
    const int N = F.bound();
    for (int i = 0; i < n; ++i) {
        if (F.coefficient(Exponents::unit(n, i)) != 0 || F.constant_term() != 0) {
            throw PreconditionError("regraph needs F without constant and linear terms");
        }
    }
    const auto ainv = inverse(a);
    // X = A^{-1} (r - b F(X)), iterated; each pass fixes one more order
    std::vector<RSeries> X(static_cast<std::size_t>(n), RSeries(n, N));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            X[i].add(Exponents::unit(n, j), ainv[i][j]);
        }
    }
    const std::vector<RSeries> linear = X;
    for (int pass = 0; pass < N; ++pass) {
        const RSeries FX = series_compose(F, X);
        std::vector<RSeries> next = linear;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                next[i] -= FX * (ainv[i][j] * b[j]);
            }
        }
        if (next == X) {
            break;
        }
        X = std::move(next);
    }
    RSeries G = series_compose(F, X) * d;
    for (int j = 0; j < n; ++j) {
        G += X[j] * c[j];
    }
    return G;
}

} // namespace affhom
