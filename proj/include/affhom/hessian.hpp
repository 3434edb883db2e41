#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <affhom/series.hpp>

namespace affhom {

struct FailingMinor {
    int v = 0; // transverse variable indices (1-based positions in the series)
    int w = 0;
    Exponents monomial;
};

struct HessianReport {
    bool rank1 = false;
    bool unit_ok = false;
    int checked_through_order = -1;
    std::optional<FailingMinor> failing_minor;

    // "rank1: yes|no", "checked-through-order: k", optional "failing-minor: ..."
    std::string to_text(const std::vector<std::string>& names) const;
};

template <class C>
using SeriesMatrix = std::vector<std::vector<TruncatedSeries<C>>>;

template <class C>
SeriesMatrix<C> hessian_matrix(const TruncatedSeries<C>& F);

// Checks F_xx(0) != 0 and the vanishing of |F_xx F_xv; F_wx F_wv| for all
// transverse v, w through order bound - 2.
template <class C>
HessianReport check_hessian_rank1(const TruncatedSeries<C>& F);

// Fills every coefficient of transverse degree >= 2 from the data of
// transverse degree <= 1, so that all rank-1 minors vanish through bound - 2.
// Existing entries of transverse degree >= 2 must agree with the completion.
template <class C>
TruncatedSeries<C> rank1_complete(const TruncatedSeries<C>& partial);

// Raises the bound of a rank-1 jet: adds a free symbol head[alpha] for every
// new alpha of transverse degree <= 1, then completes to rank 1.
PSeries extend_jet(const PSeries& F, int bound, std::string_view head);

extern template SeriesMatrix<Rational> hessian_matrix(const RSeries&);
extern template SeriesMatrix<ParamPoly> hessian_matrix(const PSeries&);
extern template HessianReport check_hessian_rank1(const RSeries&);
extern template HessianReport check_hessian_rank1(const PSeries&);
extern template RSeries rank1_complete(const RSeries&);
extern template PSeries rank1_complete(const PSeries&);

} // namespace affhom
