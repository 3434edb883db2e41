#include <affhom/linalg.hpp>

#include <affhom/errors.hpp>

namespace affhom {

Echelon rref(RMatrix m, int columns)
{
    Echelon e;
    e.columns = columns;
    std::size_t row = 0;
    for (int col = 0; col < columns && row < m.size(); ++col) {
        std::size_t piv = row;
        while (piv < m.size() && sgn(m[piv][col]) == 0) {
            ++piv;
        }
        if (piv == m.size()) {
            continue;
        }
        std::swap(m[piv], m[row]);
        const Rational inv = 1 / m[row][col];
        for (int j = col; j < columns; ++j) {
            m[row][j] *= inv;
        }
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || sgn(m[r][col]) == 0) {
                continue;
            }
            const Rational f = m[r][col];
            for (int j = col; j < columns; ++j) {
                m[r][j] -= f * m[row][j];
            }
        }
        e.pivots.push_back(col);
        ++row;
    }
    m.resize(row);
    e.rows = std::move(m);
    return e;
}

std::vector<std::vector<Rational>> kernel_basis(const Echelon& e)
{
    std::vector<bool> is_pivot(static_cast<std::size_t>(e.columns), false);
    for (int p : e.pivots) {
        is_pivot[static_cast<std::size_t>(p)] = true;
    }
    std::vector<std::vector<Rational>> basis;
    for (int free = 0; free < e.columns; ++free) {
        if (is_pivot[static_cast<std::size_t>(free)]) {
            continue;
        }
        std::vector<Rational> v(static_cast<std::size_t>(e.columns));
        v[static_cast<std::size_t>(free)] = 1;
        for (std::size_t r = 0; r < e.rows.size(); ++r) {
            v[static_cast<std::size_t>(e.pivots[r])] = -e.rows[r][static_cast<std::size_t>(free)];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

int rank(const RMatrix& m, int columns)
{
    return static_cast<int>(rref(m, columns).pivots.size());
}

std::optional<std::vector<Rational>> solve_combination(const std::vector<std::vector<Rational>>& vectors,
                                                       const std::vector<Rational>& target)
{
    const int k = static_cast<int>(vectors.size());
    RMatrix m(target.size(), std::vector<Rational>(static_cast<std::size_t>(k) + 1));
    for (std::size_t i = 0; i < target.size(); ++i) {
        for (int j = 0; j < k; ++j) {
            if (vectors[static_cast<std::size_t>(j)].size() != target.size()) {
                throw PreconditionError("vectors of different lengths");
            }
            m[i][static_cast<std::size_t>(j)] = vectors[static_cast<std::size_t>(j)][i];
        }
        m[i][static_cast<std::size_t>(k)] = target[i];
    }
    const Echelon e = rref(std::move(m), k + 1);
    std::vector<Rational> x(static_cast<std::size_t>(k));
    for (std::size_t r = 0; r < e.rows.size(); ++r) {
        if (e.pivots[r] == k) {
            return std::nullopt;
        }
        x[static_cast<std::size_t>(e.pivots[r])] = e.rows[r][static_cast<std::size_t>(k)];
    }
    return x;
}

} // namespace affhom
