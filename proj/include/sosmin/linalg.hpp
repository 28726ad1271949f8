#pragma once

// Exact linear algebra over the rationals and the integers.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sosmin {

using Integer = mpz_class;
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;
using IntegerVector = std::vector<Integer>;

/// Builds a canonical rational from numerator/denominator strings.
/// Throws Error(Validation) on a malformed string or a zero denominator.
Rational make_rational(const std::string& num, const std::string& den = "1");

/// Dense row-major matrix of rationals. Zero-sized shapes are rejected.
class RationalMatrix {
 public:
  RationalMatrix(std::size_t rows, std::size_t cols);
  RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);

  static RationalMatrix from_rows(const std::vector<RationalVector>& rows);
  static RationalMatrix identity(std::size_t n);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  [[nodiscard]] std::span<const Rational> row(std::size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }
  [[nodiscard]] const std::vector<Rational>& entries() const noexcept { return entries_; }

  [[nodiscard]] RationalMatrix transpose() const;
  [[nodiscard]] RationalVector apply(std::span<const Rational> v) const;
  [[nodiscard]] RationalMatrix operator*(const RationalMatrix& rhs) const;

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Rational> entries_;
};

/// Reduced row echelon form together with the pivot column of each nonzero row.
struct RowEchelon {
  RationalMatrix reduced;
  std::vector<std::size_t> pivots;
};

RowEchelon rref(RationalMatrix a);

struct RankNullspace {
  std::size_t rank = 0;
  std::vector<RationalVector> nullspace;  // each v satisfies A v = 0
};

/// Exact rank and a nullspace basis (one vector per free column, with a 1 in
/// that column).
RankNullspace rank_and_nullspace(const RationalMatrix& a);

std::size_t rank(const RationalMatrix& a);

/// Rank of a list of equal-length vectors; empty list has rank 0.
std::size_t rank_of(const std::vector<RationalVector>& vectors);

/// Some solution of A x = b, or nullopt if the system is inconsistent.
std::optional<RationalVector> solve(const RationalMatrix& a, std::span<const Rational> b);

/// Smith normal form U * A * V = S with U, V unimodular. Only the diagonal of
/// S is returned; `v_inverse` is V^{-1}.
struct SmithForm {
  std::vector<Integer> diagonal;  // nonzero invariant factors, each divides the next
  std::vector<std::vector<Integer>> v;
  std::vector<std::vector<Integer>> v_inverse;
};

/// `a` is given as rows; every row must have length `cols`.
SmithForm smith_normal_form(const std::vector<IntegerVector>& a, std::size_t cols);

/// Scales a rational vector to a primitive integer vector with the same
/// direction (first nonzero entry keeps its sign). Zero maps to zero.
IntegerVector primitive_integer(std::span<const Rational> v);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);

}  // namespace sosmin
