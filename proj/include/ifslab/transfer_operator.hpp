#pragma once

#include <cstddef>
#include <vector>

#include "ifslab/bracket.hpp"
#include "ifslab/system.hpp"

namespace ifslab {

/// (L_t f)(x) = sum_i |phi_i'(x)|^t f(phi_i(x)) on a gridSize x gridSize cell-centred
/// lattice over the seed bounding box, with bilinear interpolation of f.
/// Rows are stored sparse (CSR); node k = row * gridSize + column.
struct DiscretizedOperator {
    double t = 0.0;
    std::size_t grid_size = 0;
    std::vector<Complex> points;
    std::vector<std::size_t> row_start;
    std::vector<std::size_t> columns;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const { return points.size(); }
    [[nodiscard]] double row_sum(std::size_t row) const;
    /// Entry M[row][col]; zero outside the stencil.
    [[nodiscard]] double entry(std::size_t row, std::size_t col) const;
    void apply(const std::vector<double>& in, std::vector<double>& out) const;
};

inline constexpr std::size_t kDefaultOperatorGrid = 128;
inline constexpr int kDefaultOperatorIterations = 10'000;
inline constexpr double kDefaultOperatorTol = 1e-9;

/// Finite alphabets only (InfiniteAlphabetUnsupported). Lattice points outside a disk
/// seed are projected onto it before the maps are applied; images outside the
/// lattice hull clamp to the nearest cell.
DiscretizedOperator build_operator(const ValidatedSystem& system, double t, std::size_t grid_size = kDefaultOperatorGrid);

/// Power iteration from the constant vector with the Collatz-Wielandt bracket
/// [min_k (Mv)_k / v_k, max_k (Mv)_k / v_k]; stops when its width is below tol.
/// NoConvergence (best bracket attached) after max_iterations.
Bracket leading_eigenvalue(const DiscretizedOperator& op, double tol = kDefaultOperatorTol,
                           int max_iterations = kDefaultOperatorIterations);

/// log of the leading eigenvalue.
Bracket pressure_via_operator(const ValidatedSystem& system, double t, std::size_t grid_size = kDefaultOperatorGrid,
                              double tol = kDefaultOperatorTol, int max_iterations = kDefaultOperatorIterations);

} // namespace ifslab
