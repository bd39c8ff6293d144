#include "hgsp/kernels.hpp"

#include <algorithm>
#include <limits>

namespace hgsp {

double operator_norm_symmetric(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

namespace kernels {

namespace {

inline double squared_distance(const Point3& a, const Point3& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

inline void shift_row(const SparseMatrix& s, const Matrix& x, Matrix& out, Eigen::Index row) {
  const Eigen::Index cols = x.cols();
  for (Eigen::Index c = 0; c < cols; ++c) out(row, c) = 0.0;
  for (SparseMatrix::InnerIterator it(s, row); it; ++it) {
    const double v = it.value();
    const Eigen::Index k = it.col();
    for (Eigen::Index c = 0; c < cols; ++c) out(row, c) += v * x(k, c);
  }
}

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Rows [r0, r1) of S x with x and out row-major, so each nonzero is one
// contiguous axpy over all columns. Per-entry summation order matches shift_row.
inline void shift_rows(const SparseMatrix& s, const RowMajorMatrix& x, RowMajorMatrix& out, Eigen::Index r0,
                       Eigen::Index r1) {
  const double* values = s.valuePtr();
  const int* inner = s.innerIndexPtr();
  const int* outer = s.outerIndexPtr();
  const Eigen::Index cols = x.cols();
  for (Eigen::Index r = r0; r < r1; ++r) {
    double* o = out.row(r).data();
    std::fill(o, o + cols, 0.0);
    for (int p = outer[r]; p < outer[r + 1]; ++p) {
      const double v = values[p];
      const double* xr = x.row(inner[p]).data();
      for (Eigen::Index c = 0; c < cols; ++c) o[c] += v * xr[c];
    }
  }
}

inline void pool_one(const Matrix& x, const std::vector<std::size_t>& rows, Matrix& out,
                     Eigen::MatrixXi& argmax, Eigen::Index j) {
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    double best = -std::numeric_limits<double>::infinity();
    int best_row = -1;
    for (std::size_t r : rows) {
      const double v = x(static_cast<Eigen::Index>(r), c);
      if (v > best) {
        best = v;
        best_row = static_cast<int>(r);
      }
    }
    out(j, c) = best;
    argmax(j, c) = best_row;
  }
}

}  // namespace

namespace serial {

void shift(const SparseMatrix& s, const Matrix& x, Matrix& out) {
  if (s.cols() != x.rows()) fail(ErrorKind::invalid_argument, "shift: dimension mismatch");
  out.resize(s.rows(), x.cols());
  for (Eigen::Index r = 0; r < s.rows(); ++r) shift_row(s, x, out, r);
}

std::vector<std::vector<std::size_t>> proximity_graph(std::span<const Point3> points, double radius) {
  const std::size_t n = points.size();
  const double r2 = radius * radius;
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && squared_distance(points[i], points[j]) <= r2) adj[i].push_back(j);
  return adj;
}

void max_pool(const Matrix& x, const std::vector<std::vector<std::size_t>>& members, Matrix& out,
              Eigen::MatrixXi& argmax) {
  const auto m = static_cast<Eigen::Index>(members.size());
  out.resize(m, x.cols());
  argmax.resize(m, x.cols());
  for (Eigen::Index j = 0; j < m; ++j) pool_one(x, members[static_cast<std::size_t>(j)], out, argmax, j);
}

}  // namespace serial

namespace parallel {

void shift(const SparseMatrix& s, const Matrix& x, Matrix& out) {
  if (s.cols() != x.rows()) fail(ErrorKind::invalid_argument, "shift: dimension mismatch");
  out.resize(s.rows(), x.cols());
  if (!s.isCompressed()) {
    serial::shift(s, x, out);
    return;
  }
  const Eigen::Index rows = s.rows();
  const RowMajorMatrix xr = x;
  RowMajorMatrix outr(rows, x.cols());
  constexpr Eigen::Index kBlock = 64;
  const Eigen::Index blocks = (rows + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static) if (rows * x.cols() > 4096)
  for (Eigen::Index b = 0; b < blocks; ++b) shift_rows(s, xr, outr, b * kBlock, std::min(rows, (b + 1) * kBlock));
  out = outr;
}

std::vector<std::vector<std::size_t>> proximity_graph(std::span<const Point3> points, double radius) {
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  const double r2 = radius * radius;
  std::vector<std::vector<std::size_t>> adj(points.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& row = adj[static_cast<std::size_t>(i)];
    for (std::ptrdiff_t j = 0; j < n; ++j)
      if (i != j && squared_distance(points[static_cast<std::size_t>(i)],
                                     points[static_cast<std::size_t>(j)]) <= r2)
        row.push_back(static_cast<std::size_t>(j));
  }
  return adj;
}

void max_pool(const Matrix& x, const std::vector<std::vector<std::size_t>>& members, Matrix& out,
              Eigen::MatrixXi& argmax) {
  const auto m = static_cast<Eigen::Index>(members.size());
  out.resize(m, x.cols());
  argmax.resize(m, x.cols());
#pragma omp parallel for schedule(static) if (m * x.cols() > 4096)
  for (Eigen::Index j = 0; j < m; ++j) pool_one(x, members[static_cast<std::size_t>(j)], out, argmax, j);
}

}  // namespace parallel

}  // namespace kernels
}  // namespace hgsp
