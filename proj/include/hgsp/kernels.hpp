#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// `kernels::serial` and an OpenMP version in `kernels::parallel`; tests
// check they agree and `bench/` compares their throughput. Library code
// calls the unqualified entry points, which dispatch to the parallel path.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "hgsp/common.hpp"

namespace hgsp::kernels {

using Point3 = std::array<double, 3>;

namespace serial {

/// out = S * x for a row-major sparse S and dense x with any column count.
void shift(const SparseMatrix& s, const Matrix& x, Matrix& out);

/// Neighbor lists of the radius-proximity graph (Euclidean distance <= radius),
/// each list sorted ascending and excluding the point itself.
std::vector<std::vector<std::size_t>> proximity_graph(std::span<const Point3> points, double radius);

/// Column-wise maxima of x over the row sets `members[j]`; argmax rows go to
/// `argmax` (first row index wins ties).
void max_pool(const Matrix& x, const std::vector<std::vector<std::size_t>>& members, Matrix& out,
              Eigen::MatrixXi& argmax);

}  // namespace serial

namespace parallel {

void shift(const SparseMatrix& s, const Matrix& x, Matrix& out);
std::vector<std::vector<std::size_t>> proximity_graph(std::span<const Point3> points, double radius);
void max_pool(const Matrix& x, const std::vector<std::vector<std::size_t>>& members, Matrix& out,
              Eigen::MatrixXi& argmax);

}  // namespace parallel

inline Matrix shift(const SparseMatrix& s, const Matrix& x) {
  Matrix out;
  parallel::shift(s, x, out);
  return out;
}

inline std::vector<std::vector<std::size_t>> proximity_graph(std::span<const Point3> points,
                                                             double radius) {
  return parallel::proximity_graph(points, radius);
}

inline void max_pool(const Matrix& x, const std::vector<std::vector<std::size_t>>& members,
                     Matrix& out, Eigen::MatrixXi& argmax) {
  parallel::max_pool(x, members, out, argmax);
}

}  // namespace hgsp::kernels
