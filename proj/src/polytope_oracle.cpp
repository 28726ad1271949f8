// Brute-force counterparts of the polytope routines. Nothing here touches the
// facet description: membership is decided by barycentric coordinates with
// respect to simplices spanned by vertices.

#include <set>

#include "combinatorics.hpp"
#include "sosmin/errors.hpp"
#include "sosmin/polytope.hpp"

namespace sosmin::oracle {

namespace {

class BarycentricTest {
 public:
  BarycentricTest(const LatticePolytope& q, long k) : dim_(q.ambient_rank()) {
    const auto& verts = q.vertices();
    const std::size_t size = std::min(verts.size(), q.dimension() + 1);
    for_each_combination(verts.size(), size, [&](std::span<const std::size_t> idx) {
      RationalMatrix a(dim_ + 1, size);
      for (std::size_t j = 0; j < size; ++j) {
        for (std::size_t i = 0; i < dim_; ++i) a(i, j) = k * verts[idx[j]][i];
        a(dim_, j) = 1;
      }
      if (rank(a) == size) cells_.push_back(std::move(a));
    });
  }

  [[nodiscard]] bool contains(const LatticePoint& x) const {
    RationalVector rhs(x.begin(), x.end());
    rhs.emplace_back(1);
    for (const auto& a : cells_) {
      const auto c = solve(a, rhs);
      if (c && std::all_of(c->begin(), c->end(), [](const Rational& v) { return sgn(v) >= 0; })) return true;
    }
    return false;
  }

 private:
  std::size_t dim_;
  std::vector<RationalMatrix> cells_;
};

std::vector<LatticePoint> scan(const LatticePolytope& q, long k) {
  const std::size_t dim = q.ambient_rank();
  if (k == 0) return {LatticePoint(dim, 0)};
  LatticePoint lo = q.vertices().front(), hi = lo;
  for (const auto& v : q.vertices())
    for (std::size_t i = 0; i < dim; ++i) {
      if (v[i] < lo[i]) lo[i] = v[i];
      if (v[i] > hi[i]) hi[i] = v[i];
    }
  for (std::size_t i = 0; i < dim; ++i) {
    lo[i] *= k;
    hi[i] *= k;
  }
  const BarycentricTest test(q, k);
  std::vector<LatticePoint> out;
  LatticePoint x = lo;
  while (true) {
    if (test.contains(x)) out.push_back(x);
    std::size_t i = dim;
    while (i > 0) {
      --i;
      if (x[i] < hi[i]) {
        ++x[i];
        break;
      }
      x[i] = lo[i];
      if (i == 0) return out;
    }
    if (dim == 0) return out;
  }
}

}  // namespace

bool contains(const LatticePolytope& q, const LatticePoint& x, long k) {
  if (x.size() != q.ambient_rank()) throw Error(ErrorKind::DimensionMismatch, "point length differs from ambient rank");
  return BarycentricTest(q, k).contains(x);
}

Integer count_lattice_points(const LatticePolytope& q, long k) {
  return Integer(static_cast<unsigned long>(scan(q, k).size()));
}

HStar h_star(const LatticePolytope& q) {
  std::vector<Integer> counts;
  for (std::size_t k = 0; k <= q.dimension(); ++k) counts.push_back(oracle::count_lattice_points(q, static_cast<long>(k)));
  return h_star_from_counts(counts);
}

bool is_k_normal(const LatticePolytope& q, long k) {
  if (k < 1) throw Error(ErrorKind::Validation, "k-normality needs k >= 1");
  const auto base = scan(q, 1);
  std::set<LatticePoint> sums;
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  while (true) {
    LatticePoint s(q.ambient_rank(), 0);
    for (std::size_t j : idx)
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += base[j][i];
    sums.insert(std::move(s));
    // Next nondecreasing index sequence.
    std::size_t p = idx.size();
    while (p > 0 && idx[p - 1] == base.size() - 1) --p;
    if (p == 0) break;
    ++idx[p - 1];
    for (std::size_t j = p; j < idx.size(); ++j) idx[j] = idx[p - 1];
  }
  for (const auto& x : scan(q, k))
    if (sums.count(x) == 0) return false;
  return true;
}

}  // namespace sosmin::oracle
