#pragma once

#include <optional>
#include <vector>

#include <affhom/rational.hpp>

namespace affhom {

using RMatrix = std::vector<std::vector<Rational>>;

struct Echelon {
    RMatrix rows;            // reduced row echelon form, zero rows dropped
    std::vector<int> pivots; // pivot column of each row
    int columns = 0;
};

// Reduced row echelon form; pivots are taken left to right.
Echelon rref(RMatrix m, int columns);

// Basis of {v : m v = 0}, one vector per free column (that entry 1, other
// free entries 0), in column order.
std::vector<std::vector<Rational>> kernel_basis(const Echelon& e);

int rank(const RMatrix& m, int columns);

// Some x with sum_k x_k * vectors[k] = target, or nullopt.
std::optional<std::vector<Rational>> solve_combination(const std::vector<std::vector<Rational>>& vectors,
                                                       const std::vector<Rational>& target);

} // namespace affhom
