#include <algorithm>
#include <map>
#include <set>

#include "combinatorics.hpp"
#include "sosmin/errors.hpp"
#include "sosmin/polytope.hpp"

namespace sosmin {

namespace {

using LocalMatrix = std::vector<IntegerVector>;  // square, row-major

Integer determinant(LocalMatrix a) {
  // Fraction-free Bareiss elimination.
  const std::size_t n = a.size();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::set<IntegerVector> local_point_set(const LatticePolytope& q) {
  std::set<IntegerVector> out;
  for_each_local_point(q, 1, false, [&](std::span<const std::int64_t> y) { out.emplace(y.begin(), y.end()); });
  return out;
}

// Checks that y -> linear * y + shift maps the model's lattice points onto
// `target` bijectively and lifts the map to ambient coordinates of q.
std::optional<ModelMap> verify_and_lift(const LatticePolytope& q, const std::set<IntegerVector>& target,
                                        const LatticePolytope& model, const LocalMatrix& linear,
                                        const IntegerVector& shift) {
  const std::size_t m = q.dimension();
  if (abs(determinant(linear)) != 1) return std::nullopt;
  const auto source = lattice_points(model, 1);
  if (source.size() != target.size()) return std::nullopt;
  for (const auto& x : source) {
    IntegerVector y = shift;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) y[i] += linear[i][j] * x[j];
    if (target.count(y) == 0) return std::nullopt;
  }

  const auto& chart = q.chart();
  ModelMap map;
  map.linear.assign(q.ambient_rank(), IntegerVector(m, 0));
  map.translation = chart.origin;
  for (std::size_t i = 0; i < q.ambient_rank(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      map.translation[i] += shift[j] * chart.basis[j][i];
      for (std::size_t c = 0; c < m; ++c) map.linear[i][c] += chart.basis[j][i] * linear[j][c];
    }
  }
  return map;
}

std::optional<ModelMap> match_pyramid(const LatticePolytope& q, const std::set<IntegerVector>& pts) {
  const std::size_t m = q.dimension();
  if (m < 2 || q.local_vertices().size() != m + 1 || pts.size() != m + 4) return std::nullopt;
  const LatticePolytope model = pyramid_over_doubled_triangle(m);
  std::vector<std::size_t> perm(m + 1);
  for (std::size_t i = 0; i <= m; ++i) perm[i] = i;
  const auto& w = q.local_vertices();
  do {
    const IntegerVector& t = w[perm[0]];
    LocalMatrix a(m, IntegerVector(m));
    bool integral = true;
    for (std::size_t col = 0; col < m && integral; ++col) {
      for (std::size_t i = 0; i < m; ++i) {
        Integer d = w[perm[col + 1]][i] - t[i];
        if (col < 2) {
          if (!mpz_even_p(d.get_mpz_t())) {
            integral = false;
            break;
          }
          d /= 2;
        }
        a[i][col] = d;
      }
    }
    if (!integral) continue;
    if (auto map = verify_and_lift(q, pts, model, a, t)) {
      map->pyramid_apexes = m - 2;
      return map;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

std::optional<ModelMap> match_cayley(const LatticePolytope& q, const std::set<IntegerVector>& pts) {
  const std::size_t m = q.dimension();
  std::set<IntegerVector> directions;
  for (auto a = pts.begin(); a != pts.end(); ++a)
    for (auto b = std::next(a); b != pts.end(); ++b) {
      RationalVector d(m);
      for (std::size_t i = 0; i < m; ++i) d[i] = (*b)[i] - (*a)[i];
      IntegerVector w = primitive_integer(d);
      auto first = std::find_if(w.begin(), w.end(), [](const Integer& x) { return x != 0; });
      if (*first < 0)
        for (auto& x : w) x = -x;
      directions.insert(std::move(w));
    }

  for (const auto& w : directions) {
    const SmithForm snf = smith_normal_form({w}, m);
    // Coordinates c = x V: c_0 runs along w, the rest project w away.
    std::map<IntegerVector, std::pair<Integer, Integer>> fibers;
    std::map<IntegerVector, std::size_t> fiber_sizes;
    for (const auto& x : pts) {
      IntegerVector c(m, 0);
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < m; ++i) c[j] += x[i] * snf.v[i][j];
      IntegerVector key(c.begin() + 1, c.end());
      auto [it, inserted] = fibers.try_emplace(key, c[0], c[0]);
      if (!inserted) {
        if (c[0] < it->second.first) it->second.first = c[0];
        if (c[0] > it->second.second) it->second.second = c[0];
      }
      ++fiber_sizes[key];
    }
    if (fibers.size() != m) continue;
    bool contiguous = true;
    for (const auto& [key, range] : fibers)
      if (Integer(range.second - range.first + 1) != static_cast<unsigned long>(fiber_sizes[key])) contiguous = false;
    if (!contiguous) continue;

    std::vector<IntegerVector> base;
    std::vector<Integer> lo;
    std::vector<long> lengths;
    for (const auto& [key, range] : fibers) {
      base.push_back(key);
      lo.push_back(range.first);
      lengths.push_back(Integer(range.second - range.first).get_si());
    }
    // Map model (eps, t) to c, then c to local coordinates via V^{-1}.
    LocalMatrix to_c(m, IntegerVector(m, 0));
    IntegerVector shift_c(m, 0);
    shift_c[0] = lo[0];
    for (std::size_t k = 1; k < m; ++k) shift_c[k] = base[0][k - 1];
    for (std::size_t j = 1; j < m; ++j) {
      to_c[0][j - 1] = lo[j] - lo[0];
      for (std::size_t k = 1; k < m; ++k) to_c[k][j - 1] = base[j][k - 1] - base[0][k - 1];
    }
    to_c[0][m - 1] = 1;

    LocalMatrix linear(m, IntegerVector(m, 0));
    IntegerVector shift(m, 0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k) {
        shift[i] += snf.v_inverse[k][i] * shift_c[k];
        for (std::size_t col = 0; col < m; ++col) linear[i][col] += snf.v_inverse[k][i] * to_c[k][col];
      }
    if (auto map = verify_and_lift(q, pts, cayley_segments(lengths), linear, shift)) {
      map->segment_lengths = lengths;
      return map;
    }
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(PolytopeFamily f) noexcept {
  switch (f) {
    case PolytopeFamily::PyramidOverTwiceSimplex: return "PyramidOverTwiceSimplex";
    case PolytopeFamily::CayleySegments: return "CayleySegments";
    case PolytopeFamily::ImageOfModel: return "ImageOfModel";
    case PolytopeFamily::NotMinimal: return "NotMinimal";
  }
  return "NotMinimal";
}

const char* to_string(Density d) noexcept { return d == Density::Dense ? "Dense" : "NotDense"; }

const char* to_string(ConeEquality e) noexcept { return e == ConeEquality::Equal ? "Equal" : "NotEqual"; }

LatticePoint apply_map(const ModelMap& map, const LatticePoint& x) {
  LatticePoint y = map.translation;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += map.linear[i][j] * x[j];
  return y;
}

std::optional<std::pair<PolytopeFamily, ModelMap>> recognize_family(const LatticePolytope& q) {
  const std::size_t m = q.dimension();
  if (m == 0 || m > 4) return std::nullopt;
  const auto pts = local_point_set(q);
  if (auto map = match_pyramid(q, pts)) return std::pair{PolytopeFamily::PyramidOverTwiceSimplex, std::move(*map)};
  if (auto map = match_cayley(q, pts)) return std::pair{PolytopeFamily::CayleySegments, std::move(*map)};
  return std::nullopt;
}

ClassificationReport classify(const LatticePolytope& q) {
  const std::size_t m = q.dimension();
  ClassificationReport report;
  report.h_star = h_star(q);
  report.h2_zero = report.h_star.at(2) == 0;
  report.two_normal = is_k_normal(q, 2).normal;
  report.polytope_degree = polytope_degree(q);
  report.degree_one = report.polytope_degree <= 1;
  report.sublattice_index = sublattice_index(q);
  report.density = mpz_odd_p(report.sublattice_index.get_mpz_t()) ? Density::Dense : Density::NotDense;

  if (report.h2_zero && report.two_normal) {
    report.family = PolytopeFamily::ImageOfModel;
    bool normal = true;
    for (long k = 3; k <= static_cast<long>(m) - 1 && normal && m <= 4; ++k) normal = is_k_normal(q, k).normal;
    if (m <= 4 && normal) {
      if (auto found = recognize_family(q)) {
        report.family = found->first;
        report.model_map = std::move(found->second);
      }
    }
  }
  report.pos_equals_sos =
      report.h2_zero && report.density == Density::Dense ? ConeEquality::Equal : ConeEquality::NotEqual;
  return report;
}

}  // namespace sosmin
