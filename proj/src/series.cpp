#include <affhom/series.hpp>

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace affhom {

template <class C>
TruncatedSeries<C>::TruncatedSeries(int num_vars, int bound) : num_vars_(num_vars), bound_(bound)
{
    if (num_vars < 0 || num_vars > max_vars) {
        throw PreconditionError("unsupported variable count " + std::to_string(num_vars));
    }
    if (bound < -1) {
        throw PreconditionError("negative truncation bound");
    }
}

template <class C>
TruncatedSeries<C> TruncatedSeries<C>::constant(int num_vars, int bound, const C& c)
{
    TruncatedSeries s(num_vars, bound);
    if (bound >= 0) {
        s.set(Exponents(num_vars), c);
    }
    return s;
}

template <class C>
TruncatedSeries<C> TruncatedSeries<C>::variable(int num_vars, int bound, int index)
{
    TruncatedSeries s(num_vars, bound);
    if (bound >= 1) {
        s.set(Exponents::unit(num_vars, index), C(1));
    }
    return s;
}

template <class C>
TruncatedSeries<C> TruncatedSeries<C>::monomial(int num_vars, int bound, const Exponents& e, const C& c)
{
    TruncatedSeries s(num_vars, bound);
    if (e.degree() <= bound) {
        s.set(e, c);
    }
    return s;
}

template <class C>
C TruncatedSeries<C>::coefficient(const Exponents& e) const
{
    auto it = terms_.find(e);
    return it == terms_.end() ? C(0) : it->second;
}

template <class C>
void TruncatedSeries<C>::set(const Exponents& e, const C& c)
{
    if (e.size() != num_vars_) {
        throw PreconditionError("exponent length " + std::to_string(e.size()) + " does not match "
                                + std::to_string(num_vars_) + " variables");
    }
    if (e.degree() > bound_) {
        throw PreconditionError("term " + e.index_string() + " lies beyond bound " + std::to_string(bound_));
    }
    if (is_zero_coefficient(c)) {
        terms_.erase(e);
    } else {
        terms_.insert_or_assign(e, c);
    }
}

template <class C>
void TruncatedSeries<C>::add(const Exponents& e, const C& c)
{
    if (is_zero_coefficient(c)) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (is_zero_coefficient(it->second)) {
            terms_.erase(it);
        }
    }
}

template <class C>
TruncatedSeries<C> TruncatedSeries<C>::truncated(int bound) const
{
    TruncatedSeries r(num_vars_, std::min(bound, bound_));
    for (const auto& [e, c] : terms_) {
        if (e.degree() <= r.bound_) {
            r.terms_.emplace_hint(r.terms_.end(), e, c);
        }
    }
    return r;
}

template <class C>
TruncatedSeries<C> TruncatedSeries<C>::homogeneous_part(int degree) const
{
    TruncatedSeries r(num_vars_, bound_);
    for (const auto& [e, c] : terms_) {
        if (e.degree() == degree) {
            r.terms_.emplace_hint(r.terms_.end(), e, c);
        }
    }
    return r;
}

template <class C>
int TruncatedSeries<C>::min_degree() const
{
    return terms_.empty() ? bound_ + 1 : terms_.begin()->first.degree();
}

template <class C>
TruncatedSeries<C>& TruncatedSeries<C>::operator+=(const TruncatedSeries& other)
{
    if (other.num_vars_ != num_vars_) {
        throw PreconditionError("variable-count mismatch in series addition");
    }
    if (other.bound_ < bound_) {
        *this = truncated(other.bound_);
    }
    for (const auto& [e, c] : other.terms_) {
        if (e.degree() <= bound_) {
            add(e, c);
        }
    }
    return *this;
}

template <class C>
TruncatedSeries<C>& TruncatedSeries<C>::operator-=(const TruncatedSeries& other)
{
    if (other.num_vars_ != num_vars_) {
        throw PreconditionError("variable-count mismatch in series subtraction");
    }
    if (other.bound_ < bound_) {
        *this = truncated(other.bound_);
    }
    for (const auto& [e, c] : other.terms_) {
        if (e.degree() <= bound_) {
            add(e, -c);
        }
    }
    return *this;
}

template <class C>
TruncatedSeries<C>& TruncatedSeries<C>::operator*=(const Rational& c)
{
    if (affhom::is_zero(c)) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) {
        v *= c;
    }
    return *this;
}

template <class C>
void TruncatedSeries<C>::add_scaled(const TruncatedSeries& s, const C& c)
{
    if (s.num_vars_ != num_vars_) {
        throw PreconditionError("variable-count mismatch in series addition");
    }
    if (s.bound_ < bound_) {
        *this = truncated(s.bound_);
    }
    if (is_zero_coefficient(c)) {
        return;
    }
    for (const auto& [e, v] : s.terms_) {
        if (e.degree() <= bound_) {
            add(e, v * c);
        }
    }
}

namespace {

template <class C>
void check_compatible(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b)
{
    if (a.num_vars() != b.num_vars()) {
        throw PreconditionError("variable-count mismatch: " + std::to_string(a.num_vars()) + " vs "
                                + std::to_string(b.num_vars()));
    }
}

inline void accumulate(Rational& acc, const Rational& x, const Rational& y)
{
    acc += x * y;
}

inline void accumulate(ParamPoly& acc, const ParamPoly& x, const ParamPoly& y)
{
    acc.add_product(x, y);
}

template <class C>
using DegreeBuckets = std::vector<std::vector<std::pair<Exponents, const C*>>>;

template <class C>
DegreeBuckets<C> by_degree(const TruncatedSeries<C>& s, int bound)
{
    DegreeBuckets<C> buckets(static_cast<std::size_t>(std::max(bound, -1) + 1));
    for (const auto& [e, c] : s.terms()) {
        const int d = e.degree();
        if (d <= bound) {
            buckets[static_cast<std::size_t>(d)].emplace_back(e, &c);
        }
    }
    return buckets;
}

} // namespace

template <class C>
TruncatedSeries<C> series_mul_serial(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b)
{
    check_compatible(a, b);
    const int bound = std::min(a.bound(), b.bound());
    std::map<Exponents, C, GradedOrder> acc;
    for (const auto& [ea, ca] : a.terms()) {
        const int da = ea.degree();
        if (da > bound) {
            break;
        }
        for (const auto& [eb, cb] : b.terms()) {
            if (da + eb.degree() > bound) {
                break;
            }
            accumulate(acc[ea + eb], ca, cb);
        }
    }
    TruncatedSeries<C> r(a.num_vars(), bound);
    for (auto& [e, c] : acc) {
        r.set(e, c);
    }
    return r;
}

template <class C>
TruncatedSeries<C> series_mul_parallel(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b)
{
    check_compatible(a, b);
    const int bound = std::min(a.bound(), b.bound());
    TruncatedSeries<C> r(a.num_vars(), bound);
    if (bound < 0) {
        return r;
    }
    const auto ba = by_degree(a, bound);
    const auto bb = by_degree(b, bound);
    std::vector<std::map<Exponents, C, GradedOrder>> out(static_cast<std::size_t>(bound) + 1);

    // each output degree is owned by exactly one iteration
#pragma omp parallel for schedule(dynamic, 1)
    for (int d = bound; d >= 0; --d) {
        auto& acc = out[static_cast<std::size_t>(d)];
        for (int da = 0; da <= d; ++da) {
            for (const auto& [ea, ca] : ba[static_cast<std::size_t>(da)]) {
                for (const auto& [eb, cb] : bb[static_cast<std::size_t>(d - da)]) {
                    accumulate(acc[ea + eb], *ca, *cb);
                }
            }
        }
    }
    for (auto& acc : out) {
        for (auto& [e, c] : acc) {
            r.set(e, c);
        }
    }
    return r;
}

template <class C>
TruncatedSeries<C> series_mul(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b)
{
    // the parallel split only pays off when there is real work per degree
    if (a.terms().size() * b.terms().size() < 4096) {
        return series_mul_serial(a, b);
    }
    return series_mul_parallel(a, b);
}

template <class C>
TruncatedSeries<C> series_pow(const TruncatedSeries<C>& s, unsigned k)
{
    TruncatedSeries<C> result = TruncatedSeries<C>::constant(s.num_vars(), s.bound(), C(1));
    TruncatedSeries<C> base = s;
    while (k != 0) {
        if (k & 1U) {
            result = series_mul(result, base);
        }
        k >>= 1U;
        if (k != 0) {
            base = series_mul(base, base);
        }
    }
    return result;
}

template <class C>
TruncatedSeries<C> series_compose(const TruncatedSeries<C>& outer, const std::vector<TruncatedSeries<C>>& inner)
{
    if (static_cast<int>(inner.size()) != outer.num_vars()) {
        throw PreconditionError("composition needs " + std::to_string(outer.num_vars()) + " inner series, got "
                                + std::to_string(inner.size()));
    }
    if (inner.empty()) {
        return outer;
    }
    const int nv = inner.front().num_vars();
    int bound = outer.bound();
    for (std::size_t i = 0; i < inner.size(); ++i) {
        if (inner[i].num_vars() != nv) {
            throw PreconditionError("inner series disagree on the variable count");
        }
        if (!is_zero_coefficient(inner[i].constant_term())) {
            throw PreconditionError("inner series " + std::to_string(i) + " has a nonzero constant term");
        }
        bound = std::min(bound, inner[i].bound());
    }

    // products of inner powers, memoized by exponent: P(e) = P(e - unit_j) * inner_j
    std::map<Exponents, TruncatedSeries<C>> memo;
    memo.emplace(Exponents(outer.num_vars()), TruncatedSeries<C>::constant(nv, bound, C(1)));
    auto product = [&](auto&& self, const Exponents& e) -> const TruncatedSeries<C>& {
        if (auto it = memo.find(e); it != memo.end()) {
            return it->second;
        }
        int j = e.size() - 1;
        while (e[j] == 0) {
            --j;
        }
        Exponents prev = e;
        prev.set(j, e[j] - 1);
        TruncatedSeries<C> p = series_mul(self(self, prev), inner[static_cast<std::size_t>(j)].truncated(bound));
        return memo.emplace(e, std::move(p)).first->second;
    };

    TruncatedSeries<C> result(nv, bound);
    for (const auto& [e, c] : outer.terms()) {
        // inner series have order >= 1, so outer terms beyond the bound vanish
        if (e.degree() > bound) {
            break;
        }
        result.add_scaled(product(product, e), c);
    }
    return result;
}

template <class C>
TruncatedSeries<C> series_diff(const TruncatedSeries<C>& s, int var_index)
{
    if (var_index < 0 || var_index >= s.num_vars()) {
        throw PreconditionError("variable index " + std::to_string(var_index) + " out of range");
    }
    TruncatedSeries<C> r(s.num_vars(), s.bound() - 1);
    for (const auto& [e, c] : s.terms()) {
        const int k = e[var_index];
        if (k == 0) {
            continue;
        }
        Exponents d = e;
        d.set(var_index, k - 1);
        r.set(d, c * Rational(k));
    }
    return r;
}

template <class C>
TruncatedSeries<C> series_pow_rational(const TruncatedSeries<C>& s, const Rational& exponent)
{
    if (!(s.constant_term() == C(1))) {
        throw PreconditionError("rational power needs constant term exactly 1");
    }
    TruncatedSeries<C> t = s;
    t.set(Exponents(s.num_vars()), C(0));
    TruncatedSeries<C> result = TruncatedSeries<C>::constant(s.num_vars(), s.bound(), C(1));
    TruncatedSeries<C> power = result;
    Rational binom(1);
    for (int k = 1; k <= s.bound(); ++k) {
        power = series_mul(power, t);
        if (power.is_zero()) {
            break;
        }
        binom *= (exponent - Rational(k - 1)) / Rational(k);
        if (affhom::is_zero(binom)) {
            break;
        }
        result += power * binom;
    }
    return result;
}

template <class C>
TruncatedSeries<C> series_divide_monomial(const TruncatedSeries<C>& s, const Exponents& divisor)
{
    if (divisor.size() != s.num_vars()) {
        throw PreconditionError("divisor length does not match the variable count");
    }
    TruncatedSeries<C> r(s.num_vars(), s.bound() - divisor.degree());
    for (const auto& [e, c] : s.terms()) {
        if (!divisor.divides(e)) {
            throw NotDivisibleError("term " + e.index_string() + " is not divisible by " + divisor.index_string(),
                                    e.index_string());
        }
        r.set(e - divisor, c);
    }
    return r;
}

PSeries series_substitute(const PSeries& s, const Substitution& assignment)
{
    PSeries r(s.num_vars(), s.bound());
    for (const auto& [e, c] : s.terms()) {
        r.set(e, c.substitute(assignment));
    }
    return r;
}

Rational multi_factorial(const Exponents& alpha)
{
    Rational f(1);
    for (int i = 0; i < alpha.size(); ++i) {
        f *= factorial(static_cast<unsigned>(alpha[i]));
    }
    return f;
}

template <class C>
C taylor_coeff(const TruncatedSeries<C>& s, const Exponents& alpha)
{
    if (alpha.degree() > s.bound()) {
        throw PreconditionError("index " + alpha.index_string() + " beyond bound " + std::to_string(s.bound()));
    }
    return s.coefficient(alpha) * multi_factorial(alpha);
}

PSeries lift(const RSeries& s)
{
    return s.map_coefficients([](const Rational& c) { return ParamPoly(c); });
}

RSeries lower(const PSeries& s)
{
    return s.map_coefficients([](const ParamPoly& c) { return c.constant(); });
}

template class TruncatedSeries<Rational>;
template class TruncatedSeries<ParamPoly>;

#define AFFHOM_INSTANTIATE(C)                                                                                  \
    template TruncatedSeries<C> series_mul_serial(const TruncatedSeries<C>&, const TruncatedSeries<C>&);      \
    template TruncatedSeries<C> series_mul_parallel(const TruncatedSeries<C>&, const TruncatedSeries<C>&);    \
    template TruncatedSeries<C> series_mul(const TruncatedSeries<C>&, const TruncatedSeries<C>&);             \
    template TruncatedSeries<C> series_pow(const TruncatedSeries<C>&, unsigned);                               \
    template TruncatedSeries<C> series_compose(const TruncatedSeries<C>&, const std::vector<TruncatedSeries<C>>&); \
    template TruncatedSeries<C> series_diff(const TruncatedSeries<C>&, int);                                   \
    template TruncatedSeries<C> series_pow_rational(const TruncatedSeries<C>&, const Rational&);               \
    template TruncatedSeries<C> series_divide_monomial(const TruncatedSeries<C>&, const Exponents&);           \
    template C taylor_coeff(const TruncatedSeries<C>&, const Exponents&);

AFFHOM_INSTANTIATE(Rational)
AFFHOM_INSTANTIATE(ParamPoly)

#undef AFFHOM_INSTANTIATE

} // namespace affhom
