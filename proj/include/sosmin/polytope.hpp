#pragma once

// Lattice polytopes: hull and affine-lattice chart, lattice point
// enumeration, h*-vectors, normality, degree, sparse AM-GM witnesses, the
// sublattice-index density rule and the minimal-degree classification.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sosmin/linalg.hpp"

namespace sosmin {

using LatticePoint = std::vector<Integer>;

LatticePoint make_point(std::initializer_list<long> coords);

/// Inequality normal . y <= offset in the polytope's local lattice chart,
/// with a primitive integer normal.
struct Facet {
  IntegerVector normal;
  Integer offset;
};

/// Identification of the affine lattice spanned by a point set with Z^r:
/// ambient x = origin + sum_i y_i basis[i], local y = (x - origin) * coordinates.
struct AffineChart {
  LatticePoint origin;
  std::vector<IntegerVector> basis;        // r rows of length D
  std::vector<IntegerVector> coordinates;  // D rows of length r
};

class LatticePolytope {
 public:
  /// Convex hull of `points` (redundant points are dropped). Throws
  /// DimensionMismatch on mixed lengths and Validation on an empty list.
  LatticePolytope(std::size_t ambient_rank, std::vector<LatticePoint> points);

  [[nodiscard]] std::size_t ambient_rank() const noexcept { return ambient_rank_; }
  [[nodiscard]] std::size_t dimension() const noexcept { return chart_.basis.size(); }
  [[nodiscard]] bool full_dimensional() const noexcept { return dimension() == ambient_rank_; }

  /// Vertices in ambient coordinates, sorted lexicographically.
  [[nodiscard]] const std::vector<LatticePoint>& vertices() const noexcept { return vertices_; }
  [[nodiscard]] const std::vector<IntegerVector>& local_vertices() const noexcept { return local_vertices_; }
  [[nodiscard]] const std::vector<Facet>& facets() const noexcept { return facets_; }
  [[nodiscard]] const AffineChart& chart() const noexcept { return chart_; }

  /// Local coordinates of an ambient point of the dilate kQ.
  [[nodiscard]] IntegerVector to_local(const LatticePoint& x, long dilation = 1) const;
  /// Ambient point of local coordinates y inside the dilate kQ.
  [[nodiscard]] LatticePoint to_ambient(const IntegerVector& y, long dilation = 1) const;

  /// Indices into vertices() of the vertices lying on each facet.
  [[nodiscard]] std::vector<std::vector<std::size_t>> facet_vertex_sets() const;

  [[nodiscard]] LatticePolytope dilate(long k) const;

 private:
  std::size_t ambient_rank_;
  AffineChart chart_;
  std::vector<LatticePoint> vertices_;
  std::vector<IntegerVector> local_vertices_;
  std::vector<Facet> facets_;
};

/// Standard simplex conv{0, e_1, ..., e_m} scaled by `scale`.
LatticePolytope simplex(std::size_t m, long scale = 1);
/// Segment [lo, hi] in Z^1.
LatticePolytope segment(long lo, long hi);
/// Cartesian product of two polytopes.
LatticePolytope product(const LatticePolytope& a, const LatticePolytope& b);
/// Cayley polytope of the segments [0, d_i] placed over a unimodular simplex.
LatticePolytope cayley_segments(const std::vector<long>& lengths);
/// (m-2)-fold pyramid over conv{(0,0),(2,0),(0,2)}.
LatticePolytope pyramid_over_doubled_triangle(std::size_t m);
/// Simplex conv{0, e_1..e_{m-1}, e_1+..+e_{(m-1)/2} + k(e_{(m+1)/2}+..+e_{m-1}) + (k+1)e_m}
/// for odd m >= 5; its h*-polynomial is 1 + k t^{(m+1)/2}.
LatticePolytope higashitani_simplex(std::size_t m, long k);
/// Reeve tetrahedron conv{0, e1, e2, (1,1,q)}.
LatticePolytope reeve_simplex(long q);

// -- Enumeration --------------------------------------------------------------

/// (kQ) ∩ M in ambient coordinates, sorted lexicographically.
std::vector<LatticePoint> lattice_points(const LatticePolytope& q, long k = 1);
Integer count_lattice_points(const LatticePolytope& q, long k);
/// Lattice points in the relative interior of kQ.
Integer count_interior_points(const LatticePolytope& q, long k);

/// Calls `visit` on every local lattice point of kQ (strictly inside when
/// `interior`). Coordinates are in the local chart.
void for_each_local_point(const LatticePolytope& q, long k, bool interior,
                          const std::function<void(std::span<const std::int64_t>)>& visit);

// -- Invariants ---------------------------------------------------------------

struct HStar {
  std::vector<Integer> coefficients;  // h*_0 .. h*_m

  [[nodiscard]] Integer at(std::size_t j) const { return j < coefficients.size() ? coefficients[j] : Integer(0); }
  [[nodiscard]] Integer sum() const;
  friend bool operator==(const HStar&, const HStar&) = default;
};

HStar h_star(const LatticePolytope& q);

/// Normalized volume m! vol(Q) in the local lattice, via a pulling triangulation.
Integer normalized_volume(const LatticePolytope& q);

/// Smallest j such that kQ has no interior lattice point for 1 <= k <= m - j.
std::size_t polytope_degree(const LatticePolytope& q);

struct NormalityCheck {
  bool normal = true;
  std::optional<LatticePoint> counterexample;  // lexicographically smallest unreachable point
};

NormalityCheck is_k_normal(const LatticePolytope& q, long k);

/// Index [M : M''] of the lattice generated by differences of lattice points of Q.
Integer sublattice_index(const LatticePolytope& q);

enum class Density { Dense, NotDense };
Density real_density(const LatticePolytope& q);

// -- Sparse polynomials ---------------------------------------------------------

class SparsePolynomial {
 public:
  SparsePolynomial() = default;
  explicit SparsePolynomial(std::size_t rank) : rank_(rank) {}

  [[nodiscard]] std::size_t rank() const noexcept { return rank_; }
  [[nodiscard]] const std::map<LatticePoint, Rational>& terms() const noexcept { return terms_; }

  /// Adds c z^exponent; a coefficient that cancels to zero is erased.
  void add_term(const LatticePoint& exponent, const Rational& c);
  [[nodiscard]] Rational coefficient(const LatticePoint& exponent) const;

  /// Value at a point of the real torus (all z_i nonzero).
  [[nodiscard]] double evaluate(std::span<const double> z) const;

  friend bool operator==(const SparsePolynomial&, const SparsePolynomial&) = default;

 private:
  std::size_t rank_ = 0;
  std::map<LatticePoint, Rational> terms_;
};

/// f = sum r_i z^{2 v_i} - (sum r_i) z^u for a non-2-normal Q; empty when Q is 2-normal.
struct AmGmWitness {
  SparsePolynomial polynomial;
  LatticePoint u;
  std::vector<LatticePoint> support;  // the vertices v_i with r_i > 0
  std::vector<Integer> weights;       // r_i
};

std::optional<AmGmWitness> amgm_witness(const LatticePolytope& q);

/// Exponent at which no Gram matrix supported on (Q∩M)x(Q∩M) can match f:
/// either no pair of lattice points of Q sums to it and f has a nonzero
/// coefficient there, or the only pairs are diagonal and the coefficient is negative.
struct DiagonalObstruction {
  LatticePoint exponent;
  std::size_t pair_count = 0;  // number of unordered pairs {a,b} with a+b = exponent
};

std::optional<DiagonalObstruction> find_diagonal_obstruction(const SparsePolynomial& f, const LatticePolytope& q);

// -- Classification ---------------------------------------------------------------

enum class PolytopeFamily { PyramidOverTwiceSimplex, CayleySegments, ImageOfModel, NotMinimal };
enum class ConeEquality { Equal, NotEqual };

const char* to_string(PolytopeFamily f) noexcept;
const char* to_string(Density d) noexcept;
const char* to_string(ConeEquality e) noexcept;

/// Affine lattice map x -> linear * x + translation from the model polytope's
/// lattice into the ambient lattice of Q.
struct ModelMap {
  std::vector<IntegerVector> linear;  // ambient_rank rows, model-dimension columns
  IntegerVector translation;
  std::vector<long> segment_lengths;  // Cayley family only
  std::size_t pyramid_apexes = 0;     // pyramid family only
};

struct ClassificationReport {
  HStar h_star;
  bool h2_zero = false;
  bool two_normal = false;
  std::size_t polytope_degree = 0;
  bool degree_one = false;  // degree <= 1
  PolytopeFamily family = PolytopeFamily::NotMinimal;
  std::optional<ModelMap> model_map;
  Integer sublattice_index;
  Density density = Density::Dense;
  std::string density_criterion = "index parity";
  ConeEquality pos_equals_sos = ConeEquality::NotEqual;
};

ClassificationReport classify(const LatticePolytope& q);

/// Tries to find an explicit affine unimodular map from a model polytope onto Q
/// (m <= 4). The returned map is verified on lattice points.
std::optional<std::pair<PolytopeFamily, ModelMap>> recognize_family(const LatticePolytope& q);

/// Image of a lattice point under a model map.
LatticePoint apply_map(const ModelMap& map, const LatticePoint& x);

// -- Independent brute-force paths ----------------------------------------------------

namespace oracle {

/// Membership in conv(vertices) by exact barycentric solves over all
/// affinely independent vertex subsets; no facet description involved.
bool contains(const LatticePolytope& q, const LatticePoint& x, long k = 1);

/// Counts (kQ) ∩ M by scanning the ambient bounding box with `contains`.
Integer count_lattice_points(const LatticePolytope& q, long k);

/// h* from the brute-force counts.
HStar h_star(const LatticePolytope& q);

/// k-normality by enumerating all k-fold sums of lattice points.
bool is_k_normal(const LatticePolytope& q, long k);

}  // namespace oracle

}  // namespace sosmin
