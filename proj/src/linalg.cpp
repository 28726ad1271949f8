#include "sosmin/linalg.hpp"

#include <algorithm>
#include <utility>

#include "sosmin/errors.hpp"

namespace sosmin {

Rational make_rational(const std::string& num, const std::string& den) {
  Integer n;
  Integer d;
  if (n.set_str(num, 10) != 0 || d.set_str(den, 10) != 0) {
    throw Error(ErrorKind::Validation, "malformed rational '" + num + "/" + den + "'");
  }
  if (d == 0) throw Error(ErrorKind::Validation, "zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : RationalMatrix(rows, cols, std::vector<Rational>(rows * cols)) {}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorKind::DimensionMismatch, "matrix must have at least one row and column");
  }
  if (entries_.size() != rows * cols) {
    throw Error(ErrorKind::DimensionMismatch, "entry count does not match shape");
  }
}

RationalMatrix RationalMatrix::from_rows(const std::vector<RationalVector>& rows) {
  if (rows.empty()) throw Error(ErrorKind::DimensionMismatch, "no rows");
  const std::size_t cols = rows.front().size();
  std::vector<Rational> entries;
  entries.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw Error(ErrorKind::DimensionMismatch, "ragged rows");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return {rows.size(), cols, std::move(entries)};
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RationalVector RationalMatrix::apply(std::span<const Rational> v) const {
  if (v.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "vector length mismatch");
  RationalVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Rational acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      const Rational& a = (*this)(r, c);
      if (sgn(a) != 0 && sgn(v[c]) != 0) acc += a * v[c];
    }
    out[r] = acc;
  }
  return out;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw Error(ErrorKind::DimensionMismatch, "matrix product shape");
  RationalMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (sgn(a) == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

RowEchelon rref(RationalMatrix a) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(a(p, c)) == 0) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a(p, j), a(r, j));
    const Rational inv = 1 / a(r, c);
    for (std::size_t j = c; j < cols; ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(a(i, c)) == 0) continue;
      const Rational factor = a(i, c);
      for (std::size_t j = c; j < cols; ++j)
        if (sgn(a(r, j)) != 0) a(i, j) -= factor * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(a), std::move(pivots)};
}

RankNullspace rank_and_nullspace(const RationalMatrix& a) {
  const RowEchelon e = rref(a);
  const std::size_t cols = a.cols();
  std::vector<bool> is_pivot(cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;

  RankNullspace out;
  out.rank = e.pivots.size();
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(cols);
    v[free] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.reduced(i, free);
    out.nullspace.push_back(std::move(v));
  }
  return out;
}

std::size_t rank(const RationalMatrix& a) { return rref(a).pivots.size(); }

std::size_t rank_of(const std::vector<RationalVector>& vectors) {
  if (vectors.empty() || vectors.front().empty()) return 0;
  return rank(RationalMatrix::from_rows(vectors));
}

std::optional<RationalVector> solve(const RationalMatrix& a, std::span<const Rational> b) {
  if (b.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "rhs length mismatch");
  RationalMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const RowEchelon e = rref(std::move(aug));
  if (!e.pivots.empty() && e.pivots.back() == a.cols()) return std::nullopt;
  RationalVector x(a.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = e.reduced(i, a.cols());
  return x;
}

SmithForm smith_normal_form(const std::vector<IntegerVector>& input, std::size_t cols) {
  std::vector<IntegerVector> a = input;
  for (const auto& r : a)
    if (r.size() != cols) throw Error(ErrorKind::DimensionMismatch, "ragged integer matrix");
  const std::size_t rows = a.size();

  SmithForm out;
  out.v.assign(cols, IntegerVector(cols, 0));
  out.v_inverse.assign(cols, IntegerVector(cols, 0));
  for (std::size_t i = 0; i < cols; ++i) out.v[i][i] = out.v_inverse[i][i] = 1;

  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (auto& r : a) std::swap(r[i], r[j]);
    for (auto& r : out.v) std::swap(r[i], r[j]);
    std::swap(out.v_inverse[i], out.v_inverse[j]);
  };
  // col_j -= q * col_t
  auto sub_col = [&](std::size_t j, std::size_t t, const Integer& q) {
    for (auto& r : a) r[j] -= q * r[t];
    for (auto& r : out.v) r[j] -= q * r[t];
    for (std::size_t c = 0; c < cols; ++c) out.v_inverse[t][c] += q * out.v_inverse[j][c];
  };

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      // Smallest nonzero entry in the trailing block becomes the pivot.
      std::size_t pr = rows, pc = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (pr == rows || abs(a[i][j]) < abs(a[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr == rows) return out;
      std::swap(a[t], a[pr]);
      swap_cols(t, pc);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
        sub_col(j, t, q);
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility: fold an offending row into the pivot row and retry.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t c = t; c < cols; ++c) a[t][c] += a[i][c];
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a[t][t] < 0)
      for (std::size_t c = t; c < cols; ++c) a[t][c] = -a[t][c];
    out.diagonal.push_back(a[t][t]);
  }
  return out;
}

IntegerVector primitive_integer(std::span<const Rational> v) {
  Integer lcm_den = 1;
  for (const auto& x : v) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), x.get_den_mpz_t());
  IntegerVector out(v.size());
  Integer g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rational scaled = v[i] * lcm_den;
    out[i] = scaled.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[i].get_mpz_t());
  }
  if (g > 1)
    for (auto& x : out) x /= g;
  return out;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "dot length mismatch");
  Rational acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) acc += a[i] * b[i];
  return acc;
}

}  // namespace sosmin
