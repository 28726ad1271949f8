#include "sosmin/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_set>
#include <utility>

#include "combinatorics.hpp"
#include "sosmin/errors.hpp"

namespace sosmin {

namespace {

std::int64_t to_int64(const Integer& x) {
  if (!x.fits_slong_p()) throw Error(ErrorKind::Validation, "coordinate too large for enumeration");
  return x.get_si();
}

Integer dot(const IntegerVector& a, const IntegerVector& b) {
  Integer acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// Facets of conv(points) for points spanning Z^r affinely (r >= 1).
std::vector<Facet> hull_facets(const std::vector<IntegerVector>& points, std::size_t r) {
  std::map<IntegerVector, Integer> found;
  if (r == 1) {
    Integer lo = points.front()[0], hi = points.front()[0];
    for (const auto& p : points) {
      if (p[0] < lo) lo = p[0];
      if (p[0] > hi) hi = p[0];
    }
    found[{Integer(-1)}] = -lo;
    found[{Integer(1)}] = hi;
  } else {
    for_each_combination(points.size(), r, [&](std::span<const std::size_t> idx) {
      const IntegerVector& base = points[idx[0]];
      RationalMatrix diffs(r - 1, r);
      for (std::size_t i = 1; i < r; ++i)
        for (std::size_t c = 0; c < r; ++c) diffs(i - 1, c) = points[idx[i]][c] - base[c];
      const RankNullspace rn = rank_and_nullspace(diffs);
      if (rn.nullspace.size() != 1) return;
      IntegerVector normal = primitive_integer(rn.nullspace.front());
      Integer offset = dot(normal, base);
      bool any_above = false, any_below = false;
      for (const auto& p : points) {
        const int s = sgn(Integer(dot(normal, p) - offset));
        any_above |= s > 0;
        any_below |= s < 0;
        if (any_above && any_below) return;
      }
      if (any_above) {
        for (auto& x : normal) x = -x;
        offset = -offset;
      }
      found.emplace(std::move(normal), std::move(offset));
    });
  }
  std::vector<Facet> out;
  out.reserve(found.size());
  for (auto& [n, b] : found) out.push_back({n, b});
  return out;
}

bool is_vertex(const IntegerVector& p, const std::vector<Facet>& facets, std::size_t r) {
  if (r == 0) return true;
  std::vector<RationalVector> tight;
  for (const auto& f : facets)
    if (dot(f.normal, p) == f.offset) tight.emplace_back(f.normal.begin(), f.normal.end());
  return tight.size() >= r && rank_of(tight) == r;
}

}  // namespace

LatticePoint make_point(std::initializer_list<long> coords) {
  LatticePoint p;
  p.reserve(coords.size());
  for (long c : coords) p.emplace_back(c);
  return p;
}

LatticePolytope::LatticePolytope(std::size_t ambient_rank, std::vector<LatticePoint> points)
    : ambient_rank_(ambient_rank) {
  if (points.empty()) throw Error(ErrorKind::Validation, "polytope needs at least one point");
  for (const auto& p : points)
    if (p.size() != ambient_rank) throw Error(ErrorKind::DimensionMismatch, "point length differs from ambient rank");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const LatticePoint& x0 = points.front();
  std::vector<IntegerVector> diffs;
  for (std::size_t i = 1; i < points.size(); ++i) {
    IntegerVector d(ambient_rank);
    for (std::size_t c = 0; c < ambient_rank; ++c) d[c] = points[i][c] - x0[c];
    diffs.push_back(std::move(d));
  }
  const SmithForm snf = smith_normal_form(diffs, ambient_rank);
  const std::size_t r = snf.diagonal.size();

  if (r == ambient_rank) {
    chart_.origin.assign(ambient_rank, 0);
    chart_.basis.assign(r, IntegerVector(ambient_rank, 0));
    chart_.coordinates.assign(ambient_rank, IntegerVector(r, 0));
    for (std::size_t i = 0; i < r; ++i) chart_.basis[i][i] = chart_.coordinates[i][i] = 1;
  } else {
    chart_.origin = x0;
    chart_.basis.assign(snf.v_inverse.begin(), snf.v_inverse.begin() + static_cast<std::ptrdiff_t>(r));
    chart_.coordinates.assign(ambient_rank, IntegerVector(r));
    for (std::size_t i = 0; i < ambient_rank; ++i)
      for (std::size_t j = 0; j < r; ++j) chart_.coordinates[i][j] = snf.v[i][j];
  }

  std::vector<IntegerVector> local;
  local.reserve(points.size());
  for (const auto& p : points) local.push_back(to_local(p));

  if (r > 0) facets_ = hull_facets(local, r);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!is_vertex(local[i], facets_, r)) continue;
    vertices_.push_back(points[i]);
    local_vertices_.push_back(local[i]);
  }
}

IntegerVector LatticePolytope::to_local(const LatticePoint& x, long dilation) const {
  if (x.size() != ambient_rank_) throw Error(ErrorKind::DimensionMismatch, "point length differs from ambient rank");
  const std::size_t r = dimension();
  IntegerVector y(r, 0);
  for (std::size_t i = 0; i < ambient_rank_; ++i) {
    const Integer shifted = x[i] - dilation * chart_.origin[i];
    if (shifted == 0) continue;
    for (std::size_t j = 0; j < r; ++j) y[j] += shifted * chart_.coordinates[i][j];
  }
  return y;
}

LatticePoint LatticePolytope::to_ambient(const IntegerVector& y, long dilation) const {
  LatticePoint x(ambient_rank_);
  for (std::size_t i = 0; i < ambient_rank_; ++i) x[i] = dilation * chart_.origin[i];
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (y[j] == 0) continue;
    for (std::size_t i = 0; i < ambient_rank_; ++i) x[i] += y[j] * chart_.basis[j][i];
  }
  return x;
}

std::vector<std::vector<std::size_t>> LatticePolytope::facet_vertex_sets() const {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& f : facets_) {
    std::vector<std::size_t> on;
    for (std::size_t i = 0; i < local_vertices_.size(); ++i)
      if (dot(f.normal, local_vertices_[i]) == f.offset) on.push_back(i);
    out.push_back(std::move(on));
  }
  return out;
}

LatticePolytope LatticePolytope::dilate(long k) const {
  if (k < 0) throw Error(ErrorKind::Validation, "dilation factor must be nonnegative");
  std::vector<LatticePoint> scaled = vertices_;
  for (auto& v : scaled)
    for (auto& c : v) c *= k;
  return {ambient_rank_, std::move(scaled)};
}

// -- Constructors ----------------------------------------------------------------

LatticePolytope simplex(std::size_t m, long scale) {
  std::vector<LatticePoint> v(m + 1, LatticePoint(m, 0));
  for (std::size_t i = 0; i < m; ++i) v[i + 1][i] = scale;
  return {m, std::move(v)};
}

LatticePolytope segment(long lo, long hi) { return {1, {make_point({lo}), make_point({hi})}}; }

LatticePolytope product(const LatticePolytope& a, const LatticePolytope& b) {
  std::vector<LatticePoint> v;
  for (const auto& x : a.vertices())
    for (const auto& y : b.vertices()) {
      LatticePoint p = x;
      p.insert(p.end(), y.begin(), y.end());
      v.push_back(std::move(p));
    }
  return {a.ambient_rank() + b.ambient_rank(), std::move(v)};
}

LatticePolytope cayley_segments(const std::vector<long>& lengths) {
  if (lengths.empty()) throw Error(ErrorKind::Validation, "need at least one segment");
  const std::size_t m = lengths.size();
  std::vector<LatticePoint> v;
  for (std::size_t i = 0; i < m; ++i) {
    LatticePoint p(m, 0);
    if (i > 0) p[i - 1] = 1;
    v.push_back(p);
    p[m - 1] = lengths[i];
    v.push_back(std::move(p));
  }
  return {m, std::move(v)};
}

LatticePolytope pyramid_over_doubled_triangle(std::size_t m) {
  if (m < 2) throw Error(ErrorKind::Validation, "pyramid needs m >= 2");
  std::vector<LatticePoint> v(m + 1, LatticePoint(m, 0));
  v[1][0] = 2;
  v[2][1] = 2;
  for (std::size_t i = 2; i < m; ++i) v[i + 1][i] = 1;
  return {m, std::move(v)};
}

LatticePolytope higashitani_simplex(std::size_t m, long k) {
  if (m < 5 || m % 2 == 0) throw Error(ErrorKind::Validation, "needs odd m >= 5");
  std::vector<LatticePoint> v(m, LatticePoint(m, 0));
  for (std::size_t i = 1; i < m; ++i) v[i][i - 1] = 1;
  LatticePoint apex(m, 0);
  for (std::size_t i = 0; i < m - 1; ++i) apex[i] = i < (m - 1) / 2 ? 1 : k;
  apex[m - 1] = k + 1;
  v.push_back(std::move(apex));
  return {m, std::move(v)};
}

LatticePolytope reeve_simplex(long q) {
  return {3, {make_point({0, 0, 0}), make_point({1, 0, 0}), make_point({0, 1, 0}), make_point({1, 1, q})}};
}

// -- Enumeration -----------------------------------------------------------------

void for_each_local_point(const LatticePolytope& q, long k, bool interior,
                          const std::function<void(std::span<const std::int64_t>)>& visit) {
  if (k < 0) throw Error(ErrorKind::Validation, "dilation factor must be nonnegative");
  const std::size_t r = q.dimension();
  if (r == 0 || k == 0) {
    if (!interior || r == 0) {
      std::vector<std::int64_t> zero(r, 0);
      visit(zero);
    }
    return;
  }

  struct Row {
    std::vector<std::int64_t> a;
    std::int64_t rhs;
    std::size_t last;  // last coordinate with a nonzero coefficient
  };
  std::vector<Row> rows;
  for (const auto& f : q.facets()) {
    Row row{{}, to_int64(f.offset * k) - (interior ? 1 : 0), 0};
    for (std::size_t i = 0; i < r; ++i) {
      row.a.push_back(to_int64(f.normal[i]));
      if (row.a.back() != 0) row.last = i;
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::int64_t> lo(r), hi(r);
  for (std::size_t i = 0; i < r; ++i) {
    lo[i] = std::numeric_limits<std::int64_t>::max();
    hi[i] = std::numeric_limits<std::int64_t>::min();
    for (const auto& v : q.local_vertices()) {
      lo[i] = std::min(lo[i], to_int64(v[i]) * k);
      hi[i] = std::max(hi[i], to_int64(v[i]) * k);
    }
  }
  // Rows grouped by the depth at which they become fully determined.
  std::vector<std::vector<std::size_t>> closing(r);
  for (std::size_t f = 0; f < rows.size(); ++f) closing[rows[f].last].push_back(f);

  std::vector<std::int64_t> y(r);
  std::vector<std::int64_t> partial(rows.size() * (r + 1), 0);  // partial sums per depth

  auto floor_div = [](std::int64_t a, std::int64_t b) {
    std::int64_t q0 = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q0;
    return q0;
  };
  auto ceil_div = [&](std::int64_t a, std::int64_t b) { return -floor_div(-a, b); };

  std::function<void(std::size_t)> descend = [&](std::size_t depth) {
    const std::int64_t* prev = partial.data() + depth * rows.size();
    std::int64_t* cur = partial.data() + (depth + 1) * rows.size();
    // Tight range for this coordinate from rows closing here.
    std::int64_t a_lo = lo[depth], a_hi = hi[depth];
    for (std::size_t f : closing[depth]) {
      const std::int64_t coef = rows[f].a[depth];
      const std::int64_t slack = rows[f].rhs - prev[f];
      if (coef > 0)
        a_hi = std::min(a_hi, floor_div(slack, coef));
      else
        a_lo = std::max(a_lo, ceil_div(slack, coef));
    }
    for (std::int64_t t = a_lo; t <= a_hi; ++t) {
      y[depth] = t;
      for (std::size_t f = 0; f < rows.size(); ++f) cur[f] = prev[f] + rows[f].a[depth] * t;
      if (depth + 1 == r)
        visit(y);
      else
        descend(depth + 1);
    }
  };
  descend(0);
}

std::vector<LatticePoint> lattice_points(const LatticePolytope& q, long k) {
  std::vector<LatticePoint> out;
  for_each_local_point(q, k, false, [&](std::span<const std::int64_t> y) {
    IntegerVector local(y.begin(), y.end());
    out.push_back(q.to_ambient(local, k));
  });
  std::sort(out.begin(), out.end());
  return out;
}

Integer count_lattice_points(const LatticePolytope& q, long k) {
  std::uint64_t n = 0;
  for_each_local_point(q, k, false, [&](std::span<const std::int64_t>) { ++n; });
  return Integer(static_cast<unsigned long>(n));
}

Integer count_interior_points(const LatticePolytope& q, long k) {
  std::uint64_t n = 0;
  for_each_local_point(q, k, true, [&](std::span<const std::int64_t>) { ++n; });
  return Integer(static_cast<unsigned long>(n));
}

// -- Invariants ------------------------------------------------------------------

Integer HStar::sum() const { return std::accumulate(coefficients.begin(), coefficients.end(), Integer(0)); }

HStar h_star_from_counts(const std::vector<Integer>& counts) {
  const std::size_t m = counts.size() - 1;
  HStar h;
  for (std::size_t j = 0; j <= m; ++j) {
    Integer acc = 0;
    for (std::size_t i = 0; i <= j; ++i) {
      Integer binom;
      mpz_bin_uiui(binom.get_mpz_t(), m + 1, i);
      acc += (i % 2 == 0 ? 1 : -1) * binom * counts[j - i];
    }
    h.coefficients.push_back(acc);
  }
  return h;
}

HStar h_star(const LatticePolytope& q) {
  std::vector<Integer> counts;
  for (std::size_t k = 0; k <= q.dimension(); ++k) counts.push_back(count_lattice_points(q, static_cast<long>(k)));
  return h_star_from_counts(counts);
}

Integer normalized_volume(const LatticePolytope& q) {
  const std::size_t r = q.dimension();
  if (r == 0) return 1;
  const auto& verts = q.local_vertices();
  if (r == 1) {
    Integer lo = verts.front()[0], hi = verts.front()[0];
    for (const auto& v : verts) {
      if (v[0] < lo) lo = v[0];
      if (v[0] > hi) hi = v[0];
    }
    return hi - lo;
  }
  const IntegerVector& apex = verts.front();
  const auto sets = q.facet_vertex_sets();
  Integer total = 0;
  for (std::size_t f = 0; f < q.facets().size(); ++f) {
    const Facet& facet = q.facets()[f];
    const Integer height = facet.offset - dot(facet.normal, apex);
    if (height == 0) continue;
    std::vector<LatticePoint> face;
    for (std::size_t i : sets[f]) face.push_back(verts[i]);
    total += height * normalized_volume(LatticePolytope(r, std::move(face)));
  }
  return total;
}

std::size_t polytope_degree(const LatticePolytope& q) {
  const std::size_t m = q.dimension();
  for (std::size_t k = 1; k <= m; ++k)
    if (count_interior_points(q, static_cast<long>(k)) > 0) return m - k + 1;
  return 0;
}


NormalityCheck is_k_normal(const LatticePolytope& q, long k) {
  if (k < 1) throw Error(ErrorKind::Validation, "k-normality needs k >= 1");
  NormalityCheck out;
  if (k == 1 || q.dimension() == 0) return out;
  const std::size_t r = q.dimension();

  std::vector<std::vector<std::int64_t>> base;
  for_each_local_point(q, 1, false, [&](std::span<const std::int64_t> y) { base.emplace_back(y.begin(), y.end()); });

  std::vector<std::int64_t> lo(r, 0), hi(r, 0);
  for (const auto& p : base)
    for (std::size_t i = 0; i < r; ++i) {
      lo[i] = std::min(lo[i], p[i] * k);
      hi[i] = std::max(hi[i], p[i] * k);
    }
  const PointCodec codec(lo, hi);

  std::vector<std::vector<std::int64_t>> level = base;
  std::vector<std::int64_t> sum(r);
  for (long j = 2; j <= k; ++j) {
    std::unordered_set<std::uint64_t> seen;
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& a : level)
      for (const auto& b : base) {
        for (std::size_t i = 0; i < r; ++i) sum[i] = a[i] + b[i];
        if (seen.insert(codec.encode(sum)).second) next.push_back(sum);
      }
    level = std::move(next);
  }
  std::unordered_set<std::uint64_t> reached;
  for (const auto& p : level) reached.insert(codec.encode(p));

  for_each_local_point(q, k, false, [&](std::span<const std::int64_t> y) {
    if (reached.count(codec.encode(y)) != 0) return;
    LatticePoint x = q.to_ambient(IntegerVector(y.begin(), y.end()), k);
    if (!out.counterexample || x < *out.counterexample) out.counterexample = std::move(x);
    out.normal = false;
  });
  return out;
}

Integer sublattice_index(const LatticePolytope& q) {
  const std::size_t r = q.dimension();
  if (r == 0) return 1;
  std::vector<IntegerVector> pts;
  for_each_local_point(q, 1, false, [&](std::span<const std::int64_t> y) { pts.emplace_back(y.begin(), y.end()); });
  std::vector<IntegerVector> diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    IntegerVector d(r);
    for (std::size_t c = 0; c < r; ++c) d[c] = pts[i][c] - pts[0][c];
    diffs.push_back(std::move(d));
  }
  const SmithForm snf = smith_normal_form(diffs, r);
  Integer index = 1;
  for (const auto& d : snf.diagonal) index *= d;
  return snf.diagonal.size() == r ? index : Integer(0);
}

Density real_density(const LatticePolytope& q) {
  return mpz_odd_p(sublattice_index(q).get_mpz_t()) ? Density::Dense : Density::NotDense;
}

// -- Sparse polynomials -------------------------------------------------------------

void SparsePolynomial::add_term(const LatticePoint& exponent, const Rational& c) {
  if (exponent.size() != rank_) throw Error(ErrorKind::DimensionMismatch, "exponent length differs from rank");
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponent, c);
  if (inserted) return;
  it->second += c;
  if (sgn(it->second) == 0) terms_.erase(it);
}

Rational SparsePolynomial::coefficient(const LatticePoint& exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Rational(0) : it->second;
}

double SparsePolynomial::evaluate(std::span<const double> z) const {
  if (z.size() != rank_) throw Error(ErrorKind::DimensionMismatch, "evaluation point length differs from rank");
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double mono = c.get_d();
    for (std::size_t i = 0; i < rank_; ++i) {
      const long p = e[i].get_si();
      if (p != 0) mono *= std::pow(z[i], static_cast<double>(p));
    }
    acc += mono;
  }
  return acc;
}

std::optional<AmGmWitness> amgm_witness(const LatticePolytope& q) {
  const NormalityCheck check = is_k_normal(q, 2);
  if (check.normal) return std::nullopt;
  const LatticePoint& u = *check.counterexample;
  const auto& verts = q.vertices();
  const std::size_t dim = q.ambient_rank();

  std::optional<AmGmWitness> out;
  for (std::size_t size = 1; size <= std::min(verts.size(), q.dimension() + 1) && !out; ++size) {
    for_each_combination(verts.size(), size, [&](std::span<const std::size_t> idx) {
      if (out) return;
      RationalMatrix a(dim + 1, size);
      for (std::size_t j = 0; j < size; ++j) {
        for (std::size_t i = 0; i < dim; ++i) a(i, j) = 2 * verts[idx[j]][i];
        a(dim, j) = 1;
      }
      if (rank(a) != size) return;
      RationalVector rhs(u.begin(), u.end());
      rhs.emplace_back(1);
      const auto c = solve(a, rhs);
      if (!c || std::any_of(c->begin(), c->end(), [](const Rational& x) { return sgn(x) <= 0; })) return;

      AmGmWitness w{SparsePolynomial(dim), u, {}, primitive_integer(*c)};
      Integer total = 0;
      for (std::size_t j = 0; j < size; ++j) {
        LatticePoint twice = verts[idx[j]];
        for (auto& x : twice) x *= 2;
        w.polynomial.add_term(twice, Rational(w.weights[j]));
        w.support.push_back(verts[idx[j]]);
        total += w.weights[j];
      }
      w.polynomial.add_term(u, Rational(-total));
      out = std::move(w);
    });
  }
  if (!out) throw Error(ErrorKind::InconsistentModel, "no convex combination of doubled vertices reaches u");
  return out;
}

std::optional<DiagonalObstruction> find_diagonal_obstruction(const SparsePolynomial& f, const LatticePolytope& q) {
  if (f.rank() != q.ambient_rank()) throw Error(ErrorKind::DimensionMismatch, "polynomial rank differs from polytope");
  const std::vector<LatticePoint> pts = lattice_points(q, 1);
  const std::set<LatticePoint> members(pts.begin(), pts.end());
  for (const auto& [u, c] : f.terms()) {
    std::size_t pairs = 0;
    bool only_diagonal = true;
    for (const auto& a : pts) {
      LatticePoint b(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) b[i] = u[i] - a[i];
      if (a > b || members.count(b) == 0) continue;
      ++pairs;
      if (a != b) only_diagonal = false;
    }
    if (pairs == 0 || (only_diagonal && sgn(c) < 0)) return DiagonalObstruction{u, pairs};
  }
  return std::nullopt;
}

}  // namespace sosmin
