#include "sosmin/sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "sosmin/errors.hpp"

namespace sosmin {

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

SymMatrix SymMatrix::from_dense(std::size_t dim, const std::vector<double>& a) {
  if (a.size() != dim * dim) throw Error(ErrorKind::DimensionMismatch, "dense size mismatch");
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j) m(i, j) = 0.5 * (a[i * dim + j] + a[j * dim + i]);
  return m;
}

SymMatrix SymMatrix::outer(const std::vector<double>& v) {
  SymMatrix m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i; j < v.size(); ++j) m(i, j) = v[i] * v[j];
  return m;
}

std::vector<double> SymMatrix::dense() const {
  std::vector<double> a(dim_ * dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) a[i * dim_ + j] = (*this)(i, j);
  return a;
}

double SymMatrix::frobenius_norm() const { return std::sqrt(inner(*this)); }

double SymMatrix::inner(const SymMatrix& other) const {
  if (other.dim_ != dim_) throw Error(ErrorKind::DimensionMismatch, "inner product dims");
  double acc = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j) acc += (i == j ? 1.0 : 2.0) * (*this)(i, j) * other(i, j);
  return acc;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& rhs) {
  if (rhs.dim_ != dim_) throw Error(ErrorKind::DimensionMismatch, "sum dims");
  for (std::size_t k = 0; k < packed_.size(); ++k) packed_[k] += rhs.packed_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& rhs) {
  if (rhs.dim_ != dim_) throw Error(ErrorKind::DimensionMismatch, "difference dims");
  for (std::size_t k = 0; k < packed_.size(); ++k) packed_[k] -= rhs.packed_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (auto& x : packed_) x *= s;
  return *this;
}

EigenDecomposition sym_eigen(const SymMatrix& s, double tol) {
  const std::size_t n = s.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (!std::isfinite(s(i, j))) throw Error(ErrorKind::NonConvergence, "non-finite matrix entry");

  std::vector<double> a = s.dense();
  std::vector<double> v(n * n, 0.0);  // row-major, columns are eigenvectors
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double norm = s.frobenius_norm();
  const double target = 0.25 * tol * std::max(norm, 1e-300);
  auto off_norm = [&] {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) acc += 2.0 * a[i * n + j] * a[i * n + j];
    return std::sqrt(acc);
  };

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps && norm > 0.0 && off_norm() > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - sn * akq;
          a[k * n + q] = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - sn * aqk;
          a[q * n + k] = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - sn * vkq;
          v[k * n + q] = sn * vkp + c * vkq;
        }
      }
    }
  }
  if (norm > 0.0 && off_norm() > target) {
    throw Error(ErrorKind::NonConvergence, "Jacobi sweep budget exhausted");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return a[x * n + x] < a[y * n + y]; });

  EigenDecomposition out;
  out.dim = n;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a[order[k] * n + order[k]];
    for (std::size_t i = 0; i < n; ++i) out.vectors[k * n + i] = v[i * n + order[k]];
  }
  return out;
}

SymMatrix reconstruct(const EigenDecomposition& e, bool clip_negative) {
  const std::size_t n = e.dim;
  SymMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = clip_negative ? std::max(e.values[k], 0.0) : e.values[k];
    if (lambda == 0.0) continue;
    const double* col = e.vectors.data() + k * n;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) out(i, j) += lambda * col[i] * col[j];
  }
  return out;
}

SymMatrix psd_project(const SymMatrix& s, double tol) { return reconstruct(sym_eigen(s, tol), true); }

double min_eigenvalue(const SymMatrix& s, double tol) {
  if (s.dim() == 0) return 0.0;
  return sym_eigen(s, tol).values.front();
}

}  // namespace sosmin
