#pragma once

// Small dense symmetric matrices in double precision and the cyclic Jacobi
// eigensolver used by every PSD test in the library.

#include <cstddef>
#include <utility>
#include <vector>

namespace sosmin {

/// Symmetric matrix with packed upper-triangle storage, so (i,j) and (j,i)
/// always alias the same value.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim) : dim_(dim), packed_(dim * (dim + 1) / 2, 0.0) {}

  static SymMatrix identity(std::size_t dim);
  /// Symmetrizes a row-major dense matrix as (A + A^T)/2.
  static SymMatrix from_dense(std::size_t dim, const std::vector<double>& row_major);
  /// Outer product v v^T.
  static SymMatrix outer(const std::vector<double>& v);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

  double& operator()(std::size_t i, std::size_t j) { return packed_[index(i, j)]; }
  double operator()(std::size_t i, std::size_t j) const { return packed_[index(i, j)]; }

  [[nodiscard]] std::vector<double> dense() const;
  [[nodiscard]] double frobenius_norm() const;
  /// Frobenius inner product.
  [[nodiscard]] double inner(const SymMatrix& other) const;

  SymMatrix& operator+=(const SymMatrix& rhs);
  SymMatrix& operator-=(const SymMatrix& rhs);
  SymMatrix& operator*=(double s);
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

 private:
  [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const noexcept {
    if (i > j) std::swap(i, j);
    return i * dim_ - i * (i - 1) / 2 + (j - i);
  }

  std::size_t dim_ = 0;
  std::vector<double> packed_;
};

struct EigenDecomposition {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column-major: vector k occupies [k*dim, (k+1)*dim)
  std::size_t dim = 0;

  [[nodiscard]] double vector_entry(std::size_t k, std::size_t i) const { return vectors[k * dim + i]; }
};

inline constexpr double kDefaultEigenTol = 1e-12;

/// Cyclic Jacobi. Throws Error(NonConvergence) when the sweep budget runs out.
EigenDecomposition sym_eigen(const SymMatrix& s, double tol = kDefaultEigenTol);

/// V max(Λ, 0) V^T, the Frobenius-nearest PSD matrix.
SymMatrix psd_project(const SymMatrix& s, double tol = kDefaultEigenTol);

SymMatrix reconstruct(const EigenDecomposition& e, bool clip_negative = false);

double min_eigenvalue(const SymMatrix& s, double tol = kDefaultEigenTol);

}  // namespace sosmin
