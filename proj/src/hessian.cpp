#include <affhom/hessian.hpp>

#include <affhom/errors.hpp>
#include <affhom/jet.hpp>

namespace affhom {

std::string HessianReport::to_text(const std::vector<std::string>& names) const
{
    std::string s = std::string("rank1: ") + (rank1 ? "yes" : "no") + "\n";
    s += "unit: " + std::string(unit_ok ? "yes" : "no") + "\n";
    s += "checked-through-order: " + std::to_string(checked_through_order) + "\n";
    if (failing_minor) {
        auto name = [&](int i) {
            return i < static_cast<int>(names.size()) ? names[static_cast<std::size_t>(i)] : std::to_string(i);
        };
        s += "failing-minor: (" + name(failing_minor->v) + "," + name(failing_minor->w) + ") at monomial "
             + failing_minor->monomial.index_string() + "\n";
    }
    return s;
}

template <class C>
SeriesMatrix<C> hessian_matrix(const TruncatedSeries<C>& F)
{
    if (F.bound() < 2) {
        throw PreconditionError("Hessian needs bound >= 2");
    }
    const int n = F.num_vars();
    std::vector<TruncatedSeries<C>> first;
    for (int i = 0; i < n; ++i) {
        first.push_back(series_diff(F, i));
    }
    SeriesMatrix<C> h(static_cast<std::size_t>(n), std::vector<TruncatedSeries<C>>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            h[i][j] = series_diff(first[static_cast<std::size_t>(i)], j);
            h[j][i] = h[i][j];
        }
    }
    return h;
}

template <class C>
HessianReport check_hessian_rank1(const TruncatedSeries<C>& F)
{
    HessianReport report;
    const auto h = hessian_matrix(F);
    report.checked_through_order = F.bound() - 2;
    report.unit_ok = !is_zero_coefficient(h[0][0].constant_term());
    const int n = F.num_vars();
    bool ok = true;
    for (int v = 1; v < n && ok; ++v) {
        for (int w = 1; w < n && ok; ++w) {
            const auto minor = series_mul(h[0][0], h[w][v]) - series_mul(h[0][v], h[w][0]);
            if (!minor.is_zero()) {
                ok = false;
                report.failing_minor = FailingMinor{v, w, minor.terms().begin()->first};
            }
        }
    }
    report.rank1 = ok && report.unit_ok;
    return report;
}

template <class C>
TruncatedSeries<C> rank1_complete(const TruncatedSeries<C>& partial)
{
    const int n = partial.num_vars();
    const int N = partial.bound();
    Exponents e20(n);
    e20.set(0, 2);
    if (N < 2 || !(partial.coefficient(e20) == C(Rational(1, 2)))) {
        throw PreconditionError("rank-1 completion needs the normalized quadratic term x^2/2");
    }

    TruncatedSeries<C> F(n, N);
    std::vector<TruncatedSeries<C>> given(static_cast<std::size_t>(N + 1), TruncatedSeries<C>(n, N));
    for (const auto& [e, c] : partial.terms()) {
        const int t = e.transverse_degree();
        if (t <= 1) {
            F.set(e, c);
        } else {
            given[static_cast<std::size_t>(t)].set(e, c);
        }
    }

    for (int m = 2; m <= N; ++m) {
        const auto Fx = series_diff(F, 0);
        const auto inv = series_pow_rational(series_diff(Fx, 0), Rational(-1));
        std::vector<TruncatedSeries<C>> Fxv(static_cast<std::size_t>(n));
        for (int v = 1; v < n; ++v) {
            Fxv[v] = series_diff(Fx, v);
        }
        auto keep_transverse = [m](const TruncatedSeries<C>& s) {
            TruncatedSeries<C> r(s.num_vars(), s.bound());
            for (const auto& [e, c] : s.terms()) {
                if (e.transverse_degree() == m - 2) {
                    r.set(e, c);
                }
            }
            return r;
        };
        SeriesMatrix<C> H(static_cast<std::size_t>(n), std::vector<TruncatedSeries<C>>(static_cast<std::size_t>(n)));
        TruncatedSeries<C> P(n, N);
        for (int v = 1; v < n; ++v) {
            for (int w = v; w < n; ++w) {
                H[v][w] = keep_transverse(series_mul(series_mul(Fxv[v], Fxv[w]), inv));
                H[w][v] = H[v][w];
            }
        }
        // Euler: sum_{v,w} y_v y_w d_v d_w P = m (m - 1) P for P homogeneous of degree m
        const Rational scale = Rational(1) / Rational(m * (m - 1));
        for (int v = 1; v < n; ++v) {
            for (int w = 1; w < n; ++w) {
                for (const auto& [e, c] : H[v][w].terms()) {
                    Exponents t = e;
                    t.set(v, t[v] + 1);
                    t.set(w, t[w] + 1);
                    if (t.degree() <= N) {
                        P.add(t, c * scale);
                    }
                }
            }
        }
        // the Hessian data must come from a single potential
        for (int v = 1; v < n; ++v) {
            for (int w = v; w < n; ++w) {
                if (!(series_diff(series_diff(P, v), w) == H[v][w].truncated(N - 2))) {
                    throw InconsistencyError("transverse degree " + std::to_string(m)
                                             + ": rank-1 data is not integrable");
                }
            }
        }
        const auto& expected = given[static_cast<std::size_t>(m)];
        if (!expected.is_zero()) {
            for (const auto& [e, c] : expected.terms()) {
                if (!(P.coefficient(e) == c)) {
                    throw InconsistencyError("coefficient " + e.index_string() + " disagrees with rank-1 completion");
                }
            }
        }
        F += P;
    }
    return F;
}

PSeries extend_jet(const PSeries& F, int bound, std::string_view head)
{
    if (bound < F.bound()) {
        throw PreconditionError("extend_jet: bound " + std::to_string(bound) + " below the current bound "
                                + std::to_string(F.bound()));
    }
    PSeries s(F.num_vars(), bound);
    for (const auto& [e, c] : F.terms()) {
        s.set(e, c);
    }
    for (int d = F.bound() + 1; d <= bound; ++d) {
        for_each_of_degree(F.num_vars(), d, [&](const Exponents& e) {
            if (e.transverse_degree() <= 1) {
                s.set(e, ParamPoly(jet_symbol(head, e)) * (Rational(1) / multi_factorial(e)));
            }
        });
    }
    return rank1_complete(s);
}

template SeriesMatrix<Rational> hessian_matrix(const RSeries&);
template SeriesMatrix<ParamPoly> hessian_matrix(const PSeries&);
template HessianReport check_hessian_rank1(const RSeries&);
template HessianReport check_hessian_rank1(const PSeries&);
template RSeries rank1_complete(const RSeries&);
template PSeries rank1_complete(const PSeries&);

} // namespace affhom
