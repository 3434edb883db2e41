#include <affhom/param_poly.hpp>

#include <algorithm>

#include <affhom/errors.hpp>

namespace affhom {

// ---- Monomial --------------------------------------------------------------

Monomial Monomial::of(Symbol s, int exponent)
{
    Monomial m;
    if (exponent != 0) {
        m.factors_.emplace_back(s, exponent);
    }
    return m;
}

int Monomial::exponent(Symbol s) const
{
    auto it = std::lower_bound(factors_.begin(), factors_.end(), s,
                               [](const auto& f, Symbol v) { return f.first < v; });
    return it != factors_.end() && it->first == s ? it->second : 0;
}

int Monomial::degree() const
{
    int d = 0;
    for (const auto& [s, e] : factors_) {
        d += e;
    }
    return d;
}

bool Monomial::has_negative() const
{
    return std::any_of(factors_.begin(), factors_.end(), [](const auto& f) { return f.second < 0; });
}

Monomial Monomial::without(Symbol s) const
{
    Monomial m;
    for (const auto& f : factors_) {
        if (f.first != s) {
            m.factors_.push_back(f);
        }
    }
    return m;
}

Monomial Monomial::inverse() const
{
    Monomial m = *this;
    for (auto& f : m.factors_) {
        f.second = -f.second;
    }
    return m;
}

Monomial Monomial::meet(const Monomial& a, const Monomial& b)
{
    // symbols absent from one side count as exponent 0
    Monomial m;
    auto ia = a.factors_.begin();
    auto ib = b.factors_.begin();
    while (ia != a.factors_.end() || ib != b.factors_.end()) {
        if (ib == b.factors_.end() || (ia != a.factors_.end() && ia->first < ib->first)) {
            if (ia->second < 0) {
                m.factors_.push_back(*ia);
            }
            ++ia;
        } else if (ia == a.factors_.end() || ib->first < ia->first) {
            if (ib->second < 0) {
                m.factors_.push_back(*ib);
            }
            ++ib;
        } else {
            const int e = std::min(ia->second, ib->second);
            if (e != 0) {
                m.factors_.emplace_back(ia->first, e);
            }
            ++ia;
            ++ib;
        }
    }
    return m;
}

Monomial operator*(const Monomial& a, const Monomial& b)
{
    Monomial m;
    m.factors_.reserve(a.factors_.size() + b.factors_.size());
    auto ia = a.factors_.begin();
    auto ib = b.factors_.begin();
    while (ia != a.factors_.end() || ib != b.factors_.end()) {
        if (ib == b.factors_.end() || (ia != a.factors_.end() && ia->first < ib->first)) {
            m.factors_.push_back(*ia++);
        } else if (ia == a.factors_.end() || ib->first < ia->first) {
            m.factors_.push_back(*ib++);
        } else {
            const int e = ia->second + ib->second;
            if (e != 0) {
                m.factors_.emplace_back(ia->first, e);
            }
            ++ia;
            ++ib;
        }
    }
    return m;
}

std::vector<std::pair<Symbol, int>> Monomial::by_name() const
{
    auto v = factors_;
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return PrintOrder{}(x.first, y.first); });
    return v;
}

std::string Monomial::to_string() const
{
    std::string s;
    for (const auto& [sym, e] : by_name()) {
        if (!s.empty()) {
            s += '*';
        }
        s += sym.name();
        if (e != 1) {
            s += '^' + std::to_string(e);
        }
    }
    return s;
}

// ---- ParamPoly -------------------------------------------------------------

ParamPoly::ParamPoly(const Rational& c)
{
    if (!affhom::is_zero(c)) {
        terms_.emplace(Monomial{}, c);
    }
}

ParamPoly::ParamPoly(Symbol s)
{
    terms_.emplace(Monomial::of(s), Rational(1));
}

ParamPoly::ParamPoly(const Monomial& m, const Rational& c)
{
    if (!affhom::is_zero(c)) {
        terms_.emplace(m, c);
    }
}

void ParamPoly::add_term(const Monomial& m, const Rational& c)
{
    if (affhom::is_zero(c)) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (affhom::is_zero(it->second)) {
            terms_.erase(it);
        }
    }
}

bool ParamPoly::is_constant() const
{
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational ParamPoly::constant_term() const
{
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational ParamPoly::constant() const
{
    if (!is_constant()) {
        throw PreconditionError("not a constant: " + to_string());
    }
    return constant_term();
}

int ParamPoly::degree_in(Symbol s) const
{
    int d = 0;
    for (const auto& [m, c] : terms_) {
        d = std::max(d, m.exponent(s));
    }
    return d;
}

int ParamPoly::min_degree_in(Symbol s) const
{
    int d = 0;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        const int e = m.exponent(s);
        d = first ? e : std::min(d, e);
        first = false;
    }
    return d;
}

bool ParamPoly::contains(Symbol s) const
{
    for (const auto& [m, c] : terms_) {
        if (m.exponent(s) != 0) {
            return true;
        }
    }
    return false;
}

ParamPoly ParamPoly::coefficient_of(Symbol s, int k) const
{
    ParamPoly r;
    for (const auto& [m, c] : terms_) {
        if (m.exponent(s) == k) {
            r.terms_.emplace(m.without(s), c);
        }
    }
    return r;
}

SymbolSet ParamPoly::symbols() const
{
    SymbolSet out;
    for (const auto& [m, c] : terms_) {
        for (const auto& f : m.factors()) {
            out.insert(f.first);
        }
    }
    return out;
}

int ParamPoly::total_degree() const
{
    int d = 0;
    for (const auto& [m, c] : terms_) {
        d = std::max(d, m.degree());
    }
    return d;
}

Monomial ParamPoly::content() const
{
    if (terms_.empty()) {
        return {};
    }
    Monomial g = terms_.begin()->first;
    for (const auto& [m, c] : terms_) {
        g = Monomial::meet(g, m);
    }
    return g;
}

ParamPoly ParamPoly::divide(const Monomial& m) const
{
    const Monomial inv = m.inverse();
    ParamPoly r;
    for (const auto& [t, c] : terms_) {
        r.terms_.emplace(t * inv, c);
    }
    return r;
}

ParamPoly ParamPoly::pow(unsigned k) const
{
    ParamPoly result(1);
    ParamPoly base = *this;
    while (k != 0) {
        if (k & 1U) {
            result *= base;
        }
        k >>= 1U;
        if (k != 0) {
            base *= base;
        }
    }
    return result;
}

ParamPoly ParamPoly::substitute(const Substitution& assignment) const
{
    if (assignment.empty()) {
        return *this;
    }
    std::map<std::pair<Symbol, int>, ParamPoly> power_cache;
    auto power = [&](Symbol s, int e, const ParamPoly& value) -> const ParamPoly& {
        auto key = std::make_pair(s, e);
        if (auto it = power_cache.find(key); it != power_cache.end()) {
            return it->second;
        }
        ParamPoly p;
        if (e >= 0) {
            p = value.pow(static_cast<unsigned>(e));
        } else {
            if (value.terms_.size() != 1) {
                throw PreconditionError("cannot substitute " + value.to_string() + " for negative power of "
                                        + s.name());
            }
            const auto& [m, c] = *value.terms_.begin();
            ParamPoly inv(m.inverse(), Rational(1) / c);
            p = inv.pow(static_cast<unsigned>(-e));
        }
        return power_cache.emplace(key, std::move(p)).first->second;
    };

    ParamPoly result;
    for (const auto& [m, c] : terms_) {
        Monomial kept;
        ParamPoly factor(Rational(1));
        bool touched = false;
        for (const auto& [s, e] : m.factors()) {
            auto it = assignment.find(s);
            if (it == assignment.end()) {
                kept = kept * Monomial::of(s, e);
            } else {
                factor *= power(s, e, it->second);
                touched = true;
            }
        }
        if (!touched) {
            result.add_term(m, c);
            continue;
        }
        for (const auto& [fm, fc] : factor.terms_) {
            result.add_term(fm * kept, fc * c);
        }
    }
    return result;
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& other)
{
    for (const auto& [m, c] : other.terms_) {
        add_term(m, c);
    }
    return *this;
}

ParamPoly& ParamPoly::operator-=(const ParamPoly& other)
{
    for (const auto& [m, c] : other.terms_) {
        add_term(m, -c);
    }
    return *this;
}

ParamPoly& ParamPoly::operator*=(const ParamPoly& other)
{
    *this = *this * other;
    return *this;
}

ParamPoly& ParamPoly::operator*=(const Rational& c)
{
    if (affhom::is_zero(c)) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) {
        v *= c;
    }
    return *this;
}

void ParamPoly::add_product(const ParamPoly& a, const ParamPoly& b)
{
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            add_term(ma * mb, ca * cb);
        }
    }
}

ParamPoly operator*(const ParamPoly& a, const ParamPoly& b)
{
    ParamPoly r;
    r.add_product(a, b);
    return r;
}

ParamPoly operator-(ParamPoly a)
{
    for (auto& [m, c] : a.terms_) {
        c = -c;
    }
    return a;
}

namespace {

// Graded lexicographic: lower degree first, then the monomial with the larger
// exponent on the first differing symbol in print order.
bool canonical_before(const Monomial& a, const Monomial& b)
{
    const int da = a.degree();
    const int db = b.degree();
    if (da != db) {
        return da < db;
    }
    const auto fa = a.by_name();
    const auto fb = b.by_name();
    const std::size_t n = std::min(fa.size(), fb.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (fa[i].first != fb[i].first) {
            return PrintOrder{}(fa[i].first, fb[i].first);
        }
        if (fa[i].second != fb[i].second) {
            return fa[i].second > fb[i].second;
        }
    }
    return fa.size() > fb.size();
}

} // namespace

std::string ParamPoly::to_string() const
{
    if (terms_.empty()) {
        return "0";
    }
    std::vector<const Terms::value_type*> order;
    order.reserve(terms_.size());
    for (const auto& t : terms_) {
        order.push_back(&t);
    }
    std::sort(order.begin(), order.end(),
              [](const auto* x, const auto* y) { return canonical_before(x->first, y->first); });

    std::string s;
    bool first = true;
    for (const auto* t : order) {
        const Monomial& m = t->first;
        Rational c = t->second;
        const bool negative = sgn(c) < 0;
        if (negative) {
            c = -c;
        }
        if (first) {
            s += negative ? "-" : "";
        } else {
            s += negative ? " - " : " + ";
        }
        first = false;
        if (m.is_one()) {
            s += affhom::to_string(c);
        } else if (c == 1) {
            s += m.to_string();
        } else {
            s += affhom::to_string(c) + "*" + m.to_string();
        }
    }
    return s;
}

std::string to_string(const ParamPoly& p)
{
    return p.to_string();
}

bool certifiably_nonzero(const ParamPoly& p, const SymbolSet& registry)
{
    if (p.size() != 1) {
        return false;
    }
    for (const auto& [s, e] : p.terms().begin()->first.factors()) {
        if (!registry.contains(s)) {
            return false;
        }
    }
    return true;
}

ParamPoly solve_linear_in(const ParamPoly& p, Symbol s, const SymbolSet& registry)
{
    if (p.min_degree_in(s) < 0 || p.degree_in(s) != 1) {
        throw SolveError("equation " + p.to_string() + " is not linear in " + s.name());
    }
    const ParamPoly lead = p.coefficient_of(s, 1);
    if (!certifiably_nonzero(lead, registry)) {
        throw SolveError("coefficient " + lead.to_string() + " of " + s.name() + " in " + p.to_string()
                         + " is not certifiably nonzero");
    }
    const auto& [m, c] = *lead.terms().begin();
    ParamPoly rest = p.coefficient_of(s, 0);
    return -(rest.divide(m) * (Rational(1) / c));
}

ParamPoly strip_registered_content(const ParamPoly& p, const SymbolSet& registry)
{
    Monomial registered;
    const Monomial content = p.content();
    for (const auto& [s, e] : content.factors()) {
        if (registry.contains(s)) {
            registered = registered * Monomial::of(s, e);
        }
    }
    return registered.is_one() ? p : p.divide(registered);
}

} // namespace affhom
