#include <affhom/series_io.hpp>

#include <fstream>
#include <optional>
#include <istream>
#include <ostream>
#include <sstream>

#include <affhom/expr_parser.hpp>

namespace affhom {

namespace {

std::string strip(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

int parse_int(const std::string& s, const std::string& what)
{
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        throw ParseError("bad integer for " + what + ": '" + s + "'");
    }
    if (used != s.size()) {
        throw ParseError("bad integer for " + what + ": '" + s + "'");
    }
    return v;
}

SeriesHeader parse_header(const std::string& line)
{
    SeriesHeader h;
    std::istringstream ss(line);
    std::string field;
    bool have_vars = false;
    bool have_bound = false;
    while (ss >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) {
            throw ParseError("bad header field '" + field + "'");
        }
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "vars") {
            h.vars = parse_int(value, "vars");
            have_vars = true;
        } else if (key == "bound") {
            h.bound = parse_int(value, "bound");
            have_bound = true;
        } else {
            h.extra[key] = value;
        }
    }
    if (!have_vars || !have_bound) {
        throw ParseError("series header needs vars= and bound=");
    }
    if (h.vars < 1 || h.vars > max_vars) {
        throw ParseError("unsupported vars=" + std::to_string(h.vars));
    }
    return h;
}

} // namespace

PSeries read_pseries(std::istream& in, SeriesHeader* header)
{
    std::string line;
    std::optional<SeriesHeader> h;
    PSeries s;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = strip(line);
        if (line.empty()) {
            continue;
        }
        if (!h) {
            h = parse_header(line);
            s = PSeries(h->vars, h->bound);
            continue;
        }
        const auto colon = line.find(':');
        if (colon == std::string::npos) {
            throw ParseError("line " + std::to_string(lineno) + ": expected 'exponents : coefficient'");
        }
        std::istringstream es(line.substr(0, colon));
        Exponents e(h->vars);
        std::string tok;
        int i = 0;
        while (es >> tok) {
            if (i >= h->vars) {
                throw ParseError("line " + std::to_string(lineno) + ": too many exponents");
            }
            e.set(i++, parse_int(tok, "exponent"));
        }
        if (i != h->vars) {
            throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(h->vars)
                             + " exponents");
        }
        if (e.degree() > h->bound) {
            throw ParseError("line " + std::to_string(lineno) + ": term beyond bound");
        }
        ParamPoly c;
        try {
            c = parse_poly(line.substr(colon + 1));
        } catch (const ParseError& err) {
            throw ParseError("line " + std::to_string(lineno) + ": " + err.what());
        }
        s.add(e, c);
    }
    if (!h) {
        throw ParseError("missing series header");
    }
    if (header != nullptr) {
        *header = *h;
    }
    return s;
}

RSeries read_series(std::istream& in, SeriesHeader* header)
{
    PSeries p = read_pseries(in, header);
    for (const auto& [e, c] : p.terms()) {
        if (!c.is_constant()) {
            throw ParseError("symbolic coefficient " + c.to_string() + " in a numeric series");
        }
    }
    return lower(p);
}

PSeries load_pseries(const std::filesystem::path& path, SeriesHeader* header)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    return read_pseries(in, header);
}

RSeries load_series(const std::filesystem::path& path, SeriesHeader* header)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    return read_series(in, header);
}

void write_series(std::ostream& out, const RSeries& s)
{
    out << "vars=" << s.num_vars() << " bound=" << s.bound() << '\n';
    for (const auto& [e, c] : s.terms()) {
        out << e.spaced() << " : " << to_string(c) << '\n';
    }
}

void write_series(std::ostream& out, const PSeries& s)
{
    out << "vars=" << s.num_vars() << " bound=" << s.bound() << '\n';
    for (const auto& [e, c] : s.terms()) {
        out << e.spaced() << " : " << c.to_string() << '\n';
    }
}

std::string series_text(const RSeries& s)
{
    std::ostringstream out;
    write_series(out, s);
    return out.str();
}

std::vector<std::string> base_variable_names(int n)
{
    static const std::vector<std::string> names{"x", "y", "z", "w"};
    if (n < 1 || n > 4) {
        std::vector<std::string> v;
        for (int i = 0; i < n; ++i) {
            v.push_back("x" + std::to_string(i + 1));
        }
        return v;
    }
    return {names.begin(), names.begin() + n};
}

std::string render_series(const RSeries& s, const std::vector<std::string>& names)
{
    std::string out;
    for (const auto& [e, c] : s.terms()) {
        Rational v = c;
        const bool negative = sgn(v) < 0;
        if (negative) {
            v = -v;
        }
        out += out.empty() ? (negative ? "-" : "") : (negative ? " - " : " + ");
        std::string mono;
        for (int i = 0; i < e.size(); ++i) {
            if (e[i] == 0) {
                continue;
            }
            if (!mono.empty()) {
                mono += '*';
            }
            mono += names.at(static_cast<std::size_t>(i));
            if (e[i] != 1) {
                mono += '^' + std::to_string(e[i]);
            }
        }
        if (mono.empty()) {
            out += to_string(v);
        } else if (v == 1) {
            out += mono;
        } else {
            out += to_string(v) + "*" + mono;
        }
    }
    return out.empty() ? "0" : out;
}

PSeries series_from_poly(const ParamPoly& p, const std::vector<std::string>& names, int bound)
{
    const int n = static_cast<int>(names.size());
    std::vector<Symbol> coords;
    for (const auto& name : names) {
        coords.push_back(Symbol::intern(SymbolKind::coordinate, name));
    }
    PSeries s(n, bound);
    for (const auto& [m, c] : p.terms()) {
        Exponents e(n);
        Monomial rest = m;
        for (int i = 0; i < n; ++i) {
            const int k = m.exponent(coords[i]);
            if (k < 0) {
                throw PreconditionError("negative power of " + names[i] + " in a series");
            }
            e.set(i, k);
            rest = rest.without(coords[i]);
        }
        if (e.degree() <= bound) {
            s.add(e, ParamPoly(rest, c));
        }
    }
    return s;
}

PSeries parse_pseries(std::string_view text, int num_vars, int bound)
{
    return series_from_poly(parse_poly(text), base_variable_names(num_vars), bound);
}

RSeries parse_series(std::string_view text, int num_vars, int bound)
{
    return lower(parse_pseries(text, num_vars, bound));
}

} // namespace affhom
