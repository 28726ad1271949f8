#pragma once

// Embedded projective varieties described by degree-one coordinates and
// degree-two relations: toric models from lattice polytopes, Veronese and
// Segre-Veronese embeddings, scrolls, the cone over the Veronese surface,
// quadrics, and user-supplied relation data.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sosmin/linalg.hpp"
#include "sosmin/polytope.hpp"
#include "sosmin/random.hpp"

namespace sosmin {

/// Index of the monomial x_i x_j (i <= j) among all degree-two monomials in
/// `vars` variables, in lexicographic order.
inline std::size_t pair_index(std::size_t i, std::size_t j, std::size_t vars) {
  if (i > j) std::swap(i, j);
  return i * vars - i * (i - 1) / 2 + (j - i);
}

inline std::size_t pair_count(std::size_t vars) { return vars * (vars + 1) / 2; }

/// One monomial c * x_i * x_j of a quadratic relation, with i <= j.
struct RelationTerm {
  std::size_t i = 0;
  std::size_t j = 0;
  Rational coefficient;
  friend bool operator==(const RelationTerm&, const RelationTerm&) = default;
};

using QuadraticRelation = std::vector<RelationTerm>;

/// Symmetric coefficient matrix S with relation = sum_{i,j} S_ij x_i x_j.
std::vector<Rational> relation_matrix(const QuadraticRelation& r, std::size_t vars);
/// Inverse of relation_matrix; throws Validation on an asymmetric matrix.
QuadraticRelation relation_from_matrix(const std::vector<Rational>& row_major, std::size_t vars);

/// How real points of the variety are parameterized, when known.
enum class PointSampler { None, Torus, Scroll, VeroneseCone, Quadric };

using SparseColumn = std::vector<std::pair<std::size_t, Rational>>;

class VarietyModel {
 public:
  /// Model from degree-two relations among `labels.size()` coordinates. Dependent
  /// relations are rejected with InconsistentModel.
  VarietyModel(std::string name, std::vector<std::string> labels, std::size_t dim,
               std::vector<QuadraticRelation> relations);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] std::size_t n() const noexcept { return labels_.size() - 1; }
  [[nodiscard]] std::size_t m() const noexcept { return dim_; }
  [[nodiscard]] std::size_t e() const noexcept { return n() - m(); }
  [[nodiscard]] std::size_t vars() const noexcept { return labels_.size(); }
  [[nodiscard]] const std::vector<std::string>& r1_basis() const noexcept { return labels_; }
  [[nodiscard]] const std::vector<QuadraticRelation>& i2_basis() const noexcept { return relations_; }
  [[nodiscard]] std::size_t dim_r2() const noexcept { return r2_pairs_.size(); }
  [[nodiscard]] const std::optional<Integer>& degree() const noexcept { return degree_; }

  /// For each R2 basis element, a monomial x_i x_j representing it.
  [[nodiscard]] const std::vector<std::pair<std::size_t, std::size_t>>& r2_pairs() const noexcept { return r2_pairs_; }
  /// Toric models: the lattice point u + v labelling each R2 basis element.
  [[nodiscard]] const std::vector<LatticePoint>& r2_exponents() const noexcept { return r2_exponents_; }
  /// Toric models: the lattice point labelling each coordinate.
  [[nodiscard]] const std::vector<LatticePoint>& r1_exponents() const noexcept { return r1_exponents_; }
  [[nodiscard]] bool is_toric() const noexcept { return !r1_exponents_.empty(); }

  /// Image of x_i x_j in R2 as sparse coordinates over the canonical basis.
  [[nodiscard]] const SparseColumn& sigma(std::size_t i, std::size_t j) const {
    return sigma_[pair_index(i, j, vars())];
  }

  [[nodiscard]] PointSampler sampler() const noexcept { return sampler_; }
  [[nodiscard]] const std::vector<long>& scroll_degrees() const noexcept { return scroll_degrees_; }

 private:
  VarietyModel() = default;
  void set_sigma_from_relations();

  friend VarietyModel toric_model(const LatticePolytope& q);
  friend VarietyModel veronese_cone_model(std::size_t n);
  friend VarietyModel scroll_model(const std::vector<long>& d);
  friend VarietyModel quadric_model(std::size_t n);

  std::string name_;
  std::vector<std::string> labels_;
  std::size_t dim_ = 0;
  std::vector<QuadraticRelation> relations_;
  std::vector<std::pair<std::size_t, std::size_t>> r2_pairs_;
  std::vector<SparseColumn> sigma_;
  std::vector<LatticePoint> r1_exponents_;
  std::vector<LatticePoint> r2_exponents_;
  std::optional<Integer> degree_;
  PointSampler sampler_ = PointSampler::None;
  std::vector<long> scroll_degrees_;
};

/// Exact element of R2 in the model's canonical basis.
struct QuadraticForm {
  std::vector<Rational> coefficients;
  friend bool operator==(const QuadraticForm&, const QuadraticForm&) = default;
};

VarietyModel toric_model(const LatticePolytope& q);
VarietyModel veronese_model(std::size_t n, std::size_t d);
VarietyModel segre_veronese_model(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& degrees);
/// Cone over the Veronese surface in P^n (n >= 5): 2x2 minors of the symmetric
/// matrix in x0..x5, remaining coordinates free.
VarietyModel veronese_cone_model(std::size_t n);
/// Rational normal scroll from the 2x2 minors of the block Hankel matrix.
VarietyModel scroll_model(const std::vector<long>& d);
/// Quadric hypersurface x0^2 + ... + x_{n-1}^2 - x_n^2 in P^n.
VarietyModel quadric_model(std::size_t n);

/// Quadratic deficiency, cross-checked between the two counting formulas.
std::size_t epsilon(const VarietyModel& model);
bool is_minimal_degree(const VarietyModel& model);
LatticePolytope veronese_reembedding(const LatticePolytope& q, long d);

/// Affine coordinates of a random real point of the variety, or nullopt when
/// the model carries no parameterization.
std::optional<std::vector<double>> sample_real_point(const VarietyModel& model, CounterRng& rng);

/// Value of f at the point x of the variety (any representative monomial is exact on X).
double evaluate(const VarietyModel& model, const QuadraticForm& f, const std::vector<double>& x);
Rational evaluate(const VarietyModel& model, const QuadraticForm& f, const std::vector<Rational>& x);

/// sigma(G) for a symmetric matrix G given in row-major order (f = sum G_ij x_i x_j).
std::vector<double> sigma_of(const VarietyModel& model, const std::vector<double>& gram);

/// Coordinates in R2 of the product of two linear forms a, b over R1.
QuadraticForm product_form(const VarietyModel& model, const std::vector<Rational>& a, const std::vector<Rational>& b);

}  // namespace sosmin
