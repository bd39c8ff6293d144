#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace hgsp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
// Row-major so that row-partitioned shift kernels walk contiguous storage.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Rng = std::mt19937_64;

/// Failure categories; the CLI maps them onto process exit codes.
enum class ErrorKind {
  invalid_argument,  // malformed input, violated precondition
  config,            // configuration validation (exit 2)
  numerical,         // non-finite values (exit 3)
  assumption,        // violated mathematical assumption (exit 4)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

/// Deterministic seed derivation for independent sub-streams (trial index,
/// problem size, ...). SplitMix64 finalizer over a running combination.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed);
  h = mix(h ^ a);
  h = mix(h ^ b);
  h = mix(h ^ c);
  return h;
}

/// Largest absolute eigenvalue of a symmetric matrix.
double operator_norm_symmetric(const Matrix& m);

}  // namespace hgsp
