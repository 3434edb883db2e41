#include <affhom/models.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <affhom/errors.hpp>
#include <affhom/expr_parser.hpp>
#include <affhom/series_io.hpp>

namespace affhom {

namespace {

constexpr std::string_view catalog_magic = "affhom-catalog";
constexpr int catalog_version = 1;

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> words(std::string_view s)
{
    std::istringstream in{std::string(s)};
    std::vector<std::string> out;
    for (std::string w; in >> w;) {
        out.push_back(w);
    }
    return out;
}

int parse_int(const std::string& text, const std::string& where)
{
    try {
        std::size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::logic_error&) {
    }
    throw ParseError(where + ": expected an integer, got '" + text + "'");
}

// u = x^2 / (2 (1 - y))
RSeries cayley2_closed_form(int order)
{
    return series_pow_rational(parse_series("1 - y", 2, order), Rational(-1)) * parse_series("x^2/2", 2, order);
}

// u = ((1 - 2y + y^2 - 2xz)^(3/2) - (1 - y)(1 - 2y + y^2 - 3xz)) / (3 z^2)
RSeries n3_closed_form(int order)
{
    const int N = order + 2;
    const RSeries root = series_pow_rational(parse_series("1 - 2*y + y^2 - 2*x*z", 3, N), Rational(3, 2));
    const RSeries rest = parse_series("1 - y", 3, N) * parse_series("1 - 2*y + y^2 - 3*x*z", 3, N);
    RSeries q = series_divide_monomial(root - rest, Exponents{0, 0, 2});
    q *= Rational(1, 3);
    return q;
}

const std::map<std::string, std::function<RSeries(int)>, std::less<>>& closed_forms()
{
    static const std::map<std::string, std::function<RSeries(int)>, std::less<>> forms{
        {"cayley2", cayley2_closed_form},
        {"merker3", n3_closed_form},
    };
    return forms;
}

void finish(ModelSpec& m, const std::string& where)
{
    if (m.n < 2 || m.n > 4) {
        throw ParseError(where + ": dimension must be 2, 3 or 4");
    }
    if (m.source.empty()) {
        throw ParseError(where + ": missing construction");
    }
    if (m.construction == Construction::closed_form && !closed_forms().contains(m.source)) {
        throw ParseError(where + ": unknown closed form '" + m.source + "'");
    }
    for (const auto& g : m.generator_text) {
        m.generators.push_back(parse_field(g, m.n));
    }
    const int k = m.dimension();
    for (const auto& b : m.brackets) {
        if (b.i < 1 || b.j < 1 || b.i > k || b.j > k || b.i == b.j
            || static_cast<int>(b.coefficients.size()) != k) {
            throw ParseError(where + ": bracket [" + std::to_string(b.i) + ", " + std::to_string(b.j)
                             + "] does not fit " + std::to_string(k) + " generators");
        }
    }
    if (!m.listing.empty()) {
        SeriesHeader h;
        std::ifstream in(data_path(m.listing));
        if (!in) {
            throw ParseError(where + ": cannot open listing " + m.listing);
        }
        read_pseries(in, &h);
        if (m.construction == Construction::jet) {
            m.max_order = h.bound;
        }
    }
}

PField substitute_parameter(const PField& f, const ModelSpec& m, std::optional<Rational> value)
{
    if (!value || !m.parameter) {
        return f;
    }
    return substitute(f, Substitution{{Symbol::named(*m.parameter), ParamPoly(*value)}});
}

PField combination(const std::vector<PField>& basis, const std::vector<Rational>& coefficients, int n)
{
    PField r(n);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if (is_zero(coefficients[k])) {
            continue;
        }
        for (std::size_t row = 0; row < r.m.size(); ++row) {
            for (std::size_t col = 0; col < r.m[row].size(); ++col) {
                r.m[row][col] += basis[k].m[row][col] * coefficients[k];
            }
        }
    }
    return r;
}

std::string combination_text(const std::vector<Rational>& coefficients)
{
    std::string s;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        const Rational& c = coefficients[k];
        if (is_zero(c)) {
            continue;
        }
        const std::string e = "e" + std::to_string(k + 1);
        if (s.empty()) {
            s = c == 1 ? e : c == -1 ? "-" + e : to_string(c) + "*" + e;
        } else {
            const Rational a = abs(c);
            s += (sgn(c) < 0 ? " - " : " + ") + (a == 1 ? e : to_string(a) + "*" + e);
        }
    }
    return s.empty() ? "0" : s;
}

bool rational_field(const PField& f)
{
    for (const auto& row : f.m) {
        for (const auto& c : row) {
            if (!c.is_constant()) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

std::filesystem::path data_path(std::string_view relative)
{
    return std::filesystem::path(AFFHOM_DATA_DIR) / relative;
}

std::vector<ModelSpec> load_catalog(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open catalog " + path.string());
    }
    std::vector<ModelSpec> models;
    std::optional<ModelSpec> cur;
    bool header = false;
    int line_no = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const std::string where = path.filename().string() + ":" + std::to_string(line_no);
        const auto w = words(line);
        if (!header) {
            if (w.size() != 2 || w[0] != catalog_magic || w[1] != "version=" + std::to_string(catalog_version)) {
                throw ParseError(where + ": expected '" + std::string(catalog_magic) + " version="
                                 + std::to_string(catalog_version) + "'");
            }
            header = true;
            continue;
        }
        const std::string& key = w[0];
        const std::string rest = trim(std::string_view(line).substr(key.size()));
        if (key == "model") {
            if (cur || w.size() != 2) {
                throw ParseError(where + ": unexpected 'model'");
            }
            cur.emplace();
            cur->name = w[1];
            continue;
        }
        if (!cur) {
            throw ParseError(where + ": '" + key + "' outside a model record");
        }
        if (key == "end") {
            finish(*cur, where);
            models.push_back(std::move(*cur));
            cur.reset();
        } else if (key == "n" && w.size() == 2) {
            cur->n = parse_int(w[1], where);
        } else if (key == "sign" && w.size() == 2 && (w[1] == "+" || w[1] == "-")) {
            cur->sign = w[1] == "+" ? 1 : -1;
        } else if (key == "construction" && w.size() == 3 && w[1] == "closed-form") {
            cur->construction = Construction::closed_form;
            cur->source = w[2];
        } else if (key == "construction" && w.size() == 3 && w[1] == "jet") {
            cur->construction = Construction::jet;
            cur->source = w[2];
        } else if (key == "listing" && w.size() == 2) {
            cur->listing = w[1];
        } else if (key == "parameter" && w.size() == 2) {
            cur->parameter = w[1];
        } else if (key == "samples") {
            for (std::size_t i = 1; i < w.size(); ++i) {
                cur->samples.push_back(parse_rational(w[i]));
            }
        } else if (key == "min-order" && w.size() == 2) {
            cur->min_order = parse_int(w[1], where);
        } else if (key == "generator" && !rest.empty()) {
            cur->generator_text.push_back(rest);
        } else if (key == "bracket") {
            const auto eq = std::find(w.begin(), w.end(), "=");
            if (w.size() < 5 || eq != w.begin() + 3) {
                throw ParseError(where + ": expected 'bracket i j = c1 ... ck'");
            }
            ExpectedBracket b{parse_int(w[1], where), parse_int(w[2], where), {}};
            for (auto it = eq + 1; it != w.end(); ++it) {
                b.coefficients.push_back(parse_rational(*it));
            }
            cur->brackets.push_back(std::move(b));
        } else if (key == "script" && w.size() == 2) {
            cur->script = w[1];
        } else {
            throw ParseError(where + ": unrecognized line '" + line + "'");
        }
    }
    if (cur) {
        throw ParseError(path.filename().string() + ": record '" + cur->name + "' lacks 'end'");
    }
    if (!header) {
        throw ParseError(path.filename().string() + ": empty catalog");
    }
    return models;
}

const std::vector<ModelSpec>& catalog()
{
    static const std::vector<ModelSpec> models = load_catalog(data_path("catalog.txt"));
    return models;
}

const ModelSpec& find_model(std::string_view name)
{
    for (const auto& m : catalog()) {
        if (m.name == name) {
            return m;
        }
    }
    std::string known;
    for (const auto& m : catalog()) {
        known += (known.empty() ? "" : ", ") + m.name;
    }
    throw PreconditionError("unknown model '" + std::string(name) + "' (known: " + known + ")");
}

PSeries model_listing(const ModelSpec& model, int order)
{
    if (model.listing.empty()) {
        throw PreconditionError(model.name + " has no listing");
    }
    SeriesHeader h;
    const PSeries s = load_pseries(data_path(model.listing), &h);
    if (order > s.bound()) {
        throw PreconditionError(model.name + " is listed through order " + std::to_string(s.bound()));
    }
    return s.truncated(order);
}

PSeries model_series(std::string_view name, int order, std::optional<Rational> parameter)
{
    const ModelSpec& m = find_model(name);
    if (order < 2) {
        throw PreconditionError("model order must be at least 2");
    }
    PSeries s;
    if (m.construction == Construction::closed_form) {
        s = lift(closed_forms().find(m.source)->second(order));
    } else {
        const PSeries full = load_pseries(data_path(m.source));
        if (order > full.bound()) {
            throw PreconditionError(m.name + " is known through order " + std::to_string(full.bound())
                                    + " only");
        }
        s = full.truncated(order);
    }
    if (parameter && m.parameter) {
        s = series_substitute(s, Substitution{{Symbol::named(*m.parameter), ParamPoly(*parameter)}});
    }
    return s;
}

std::vector<PField> model_generators(const ModelSpec& model, std::optional<Rational> parameter)
{
    std::vector<PField> out;
    for (const auto& g : model.generators) {
        out.push_back(substitute_parameter(g, model, parameter));
    }
    return out;
}

std::vector<BracketCheck> check_brackets(const ModelSpec& m, std::optional<Rational> parameter)
{
    const std::vector<PField> gens = model_generators(m, parameter);
    std::vector<BracketCheck> out;
    const int k = m.dimension();
    for (int i = 1; i <= k; ++i) {
        for (int j = i + 1; j <= k; ++j) {
            std::vector<Rational> expected(static_cast<std::size_t>(k), Rational(0));
            for (const auto& b : m.brackets) {
                if (b.i == i && b.j == j) {
                    expected = b.coefficients;
                } else if (b.i == j && b.j == i) {
                    for (std::size_t q = 0; q < expected.size(); ++q) {
                        expected[q] = -b.coefficients[q];
                    }
                }
            }
            const PField computed = lie_bracket(gens[static_cast<std::size_t>(i - 1)],
                                                gens[static_cast<std::size_t>(j - 1)]);
            BracketCheck c{i, j, combination_text(expected), render_field(computed), false};
            c.ok = computed == combination(gens, expected, m.n);
            out.push_back(std::move(c));
        }
    }
    return out;
}

VerificationReport verify_model(std::string_view name, int order, std::optional<Rational> parameter)
{
    const ModelSpec& m = find_model(name);
    if (order < m.min_order) {
        throw PreconditionError(m.name + ": order " + std::to_string(order)
                                + " is below the generator-check minimum " + std::to_string(m.min_order));
    }
    if (m.construction == Construction::jet && order > m.max_order) {
        throw PreconditionError(m.name + ": order " + std::to_string(order) + " exceeds the listed order "
                                + std::to_string(m.max_order));
    }
    if (parameter && !m.parameter) {
        throw PreconditionError(m.name + " has no free parameter");
    }

    VerificationReport r;
    r.model = m.name;
    r.n = m.n;
    r.order = order;
    r.parameter = parameter;

    const PSeries F = model_series(name, order, parameter);
    r.hessian = check_hessian_rank1(F);

    const std::vector<PField> gens = model_generators(m, parameter);
    bool tangent = true;
    for (const auto& g : gens) {
        TangencyCheck t{render_field(g), tangency_failure(F, g, order - 1)};
        tangent = tangent && !t.failure_order;
        r.tangency.push_back(std::move(t));
    }

    r.brackets = check_brackets(m, parameter);
    bool brackets_ok = true;
    for (const auto& b : r.brackets) {
        brackets_ok = brackets_ok && b.ok;
    }

    // listing against the construction: the closed form for closed-form
    // models, the rank-1 completion of the listed transverse data otherwise
    if (!m.listing.empty()) {
        SeriesHeader h;
        const PSeries full = load_pseries(data_path(m.listing), &h);
        r.series_order = std::min(order, full.bound());
        PSeries listed = full.truncated(r.series_order);
        if (parameter && m.parameter) {
            listed = series_substitute(listed, Substitution{{Symbol::named(*m.parameter), ParamPoly(*parameter)}});
        }
        PSeries computed = F.truncated(r.series_order);
        if (m.construction == Construction::jet) {
            PSeries transverse(listed.num_vars(), listed.bound());
            for (const auto& [e, c] : listed.terms()) {
                if (e.transverse_degree() <= 1) {
                    transverse.set(e, c);
                }
            }
            computed = rank1_complete(transverse);
        }
        for (int d = 0; d <= r.series_order; ++d) {
            for_each_of_degree(m.n, d, [&](const Exponents& e) {
                const ParamPoly a = computed.coefficient(e) * multi_factorial(e);
                const ParamPoly b = listed.coefficient(e) * multi_factorial(e);
                if (a != b) {
                    r.series_diffs.push_back({e, a, b});
                }
            });
        }
        r.series_ok = r.series_diffs.empty();
    } else {
        r.series_ok = true;
    }

    RMatrix origin;
    bool rational_gens = true;
    for (const auto& g : gens) {
        rational_gens = rational_gens && rational_field(g);
        std::vector<Rational> row;
        for (int i = 0; i < m.n; ++i) {
            if (!g.translation(i).is_constant()) {
                rational_gens = false;
                row.push_back(Rational(0));
            } else {
                row.push_back(g.translation(i).constant_term());
            }
        }
        origin.push_back(std::move(row));
    }
    r.transitive = rank(origin, m.n) == m.n;

    bool dimension_ok = true;
    bool rational_jet = true;
    for (const auto& [e, c] : F.terms()) {
        rational_jet = rational_jet && c.is_constant();
    }
    if (rational_gens && rational_jet) {
        const SymmetryResult sym = solve_symmetry(lower(F), order - 1);
        r.dimension = sym.dimension;
        std::vector<RField> rg;
        for (const auto& g : gens) {
            rg.push_back(lower(g));
        }
        r.span_ok = same_span(sym.basis, rg);
        dimension_ok = sym.dimension == m.dimension() && r.span_ok;
    }

    r.pass = r.hessian.rank1 && tangent && brackets_ok && r.series_ok && r.transitive && dimension_ok;
    return r;
}

std::string VerificationReport::to_text() const
{
    std::ostringstream out;
    out << "model: " << model << "\n";
    out << "order: " << order << "\n";
    if (parameter) {
        out << "parameter: " << to_string(*parameter) << "\n";
    }
    out << "hessian:\n";
    std::istringstream h(hessian.to_text(base_variable_names(n)));
    for (std::string line; std::getline(h, line);) {
        out << "  " << line << "\n";
    }
    out << "tangency through order " << order - 1 << ":\n";
    for (std::size_t i = 0; i < tangency.size(); ++i) {
        out << "  e" << i + 1 << " = " << tangency[i].field << ": ";
        if (tangency[i].failure_order) {
            out << "FAIL at order " << *tangency[i].failure_order << "\n";
        } else {
            out << "ok\n";
        }
    }
    out << "brackets:\n";
    for (const auto& b : brackets) {
        out << "  [e" << b.i << ", e" << b.j << "] = " << b.expected << ": " << (b.ok ? "ok" : "FAIL");
        if (!b.ok) {
            out << " (computed " << b.computed << ")";
        }
        out << "\n";
    }
    out << "transitive at origin: " << (transitive ? "yes" : "no") << "\n";
    if (dimension) {
        out << "symmetry dimension at order " << order - 1 << ": " << *dimension
            << (span_ok ? ", spanned by the generators" : ", NOT spanned by the generators") << "\n";
    }
    out << "series match through order " << series_order << ": " << (series_ok ? "ok" : "FAIL") << "\n";
    for (const auto& d : series_diffs) {
        out << "  " << d.alpha.index_string() << ": computed " << d.computed.to_string() << ", listed "
            << d.listed.to_string() << "\n";
    }
    out << "verdict: " << (pass ? "pass" : "fail") << "\n";
    return out.str();
}

} // namespace affhom
