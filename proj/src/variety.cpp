#include "sosmin/variety.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "combinatorics.hpp"
#include "sosmin/errors.hpp"

namespace sosmin {

namespace {

std::string point_label(const LatticePoint& p) {
  std::ostringstream out;
  out << "z^(";
  for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << p[i].get_str();
  out << ")";
  return out.str();
}

QuadraticRelation normalize(QuadraticRelation r, std::size_t vars) {
  std::map<std::pair<std::size_t, std::size_t>, Rational> merged;
  for (auto& t : r) {
    if (t.i >= vars || t.j >= vars) throw Error(ErrorKind::Validation, "relation refers to an unknown coordinate");
    if (t.i > t.j) std::swap(t.i, t.j);
    merged[{t.i, t.j}] += t.coefficient;
  }
  QuadraticRelation out;
  for (auto& [ij, c] : merged)
    if (sgn(c) != 0) out.push_back({ij.first, ij.second, c});
  if (out.empty()) throw Error(ErrorKind::Validation, "zero relation");
  return out;
}

// Each relation owning a monomial used by no other relation certifies
// independence without elimination; otherwise fall back to exact rank.
bool relations_independent(const std::vector<QuadraticRelation>& rels, std::size_t vars) {
  if (rels.empty()) return true;
  std::unordered_map<std::size_t, std::size_t> uses;
  for (const auto& r : rels)
    for (const auto& t : r) ++uses[pair_index(t.i, t.j, vars)];
  const bool private_columns = std::all_of(rels.begin(), rels.end(), [&](const QuadraticRelation& r) {
    return std::any_of(r.begin(), r.end(), [&](const RelationTerm& t) { return uses[pair_index(t.i, t.j, vars)] == 1; });
  });
  if (private_columns) return true;
  RationalMatrix a(rels.size(), pair_count(vars));
  for (std::size_t k = 0; k < rels.size(); ++k)
    for (const auto& t : rels[k]) a(k, pair_index(t.i, t.j, vars)) = t.coefficient;
  return rank(a) == rels.size();
}

// Indices of a maximal independent subset of `rels`, greedily in order.
std::vector<std::size_t> independent_subset(const std::vector<QuadraticRelation>& rels, std::size_t vars) {
  if (rels.empty()) return {};
  RationalMatrix columns(pair_count(vars), rels.size());
  for (std::size_t k = 0; k < rels.size(); ++k)
    for (const auto& t : rels[k]) columns(pair_index(t.i, t.j, vars), k) = t.coefficient;
  return rref(columns).pivots;
}

long long binom2(long long n) { return n * (n - 1) / 2; }

}  // namespace

std::vector<Rational> relation_matrix(const QuadraticRelation& r, std::size_t vars) {
  std::vector<Rational> s(vars * vars);
  for (const auto& t : r) {
    if (t.i == t.j) {
      s[t.i * vars + t.i] += t.coefficient;
    } else {
      const Rational half = t.coefficient / 2;
      s[t.i * vars + t.j] += half;
      s[t.j * vars + t.i] += half;
    }
  }
  return s;
}

QuadraticRelation relation_from_matrix(const std::vector<Rational>& s, std::size_t vars) {
  if (s.size() != vars * vars) throw Error(ErrorKind::DimensionMismatch, "relation matrix has the wrong size");
  QuadraticRelation r;
  for (std::size_t i = 0; i < vars; ++i)
    for (std::size_t j = i; j < vars; ++j) {
      if (s[i * vars + j] != s[j * vars + i]) throw Error(ErrorKind::Validation, "relation matrix is not symmetric");
      const Rational c = i == j ? s[i * vars + i] : Rational(2 * s[i * vars + j]);
      if (sgn(c) != 0) r.push_back({i, j, c});
    }
  return r;
}

VarietyModel::VarietyModel(std::string name, std::vector<std::string> labels, std::size_t dim,
                           std::vector<QuadraticRelation> relations)
    : name_(std::move(name)), labels_(std::move(labels)), dim_(dim) {
  if (labels_.empty()) throw Error(ErrorKind::Validation, "model needs at least one coordinate");
  if (dim_ > n()) throw Error(ErrorKind::Validation, "dimension exceeds ambient projective dimension");
  for (auto& r : relations) relations_.push_back(normalize(std::move(r), vars()));
  if (!relations_independent(relations_, vars()))
    throw Error(ErrorKind::InconsistentModel, "quadratic relations are linearly dependent");
  set_sigma_from_relations();
}

void VarietyModel::set_sigma_from_relations() {
  const std::size_t pairs = pair_count(vars());
  std::vector<std::pair<std::size_t, std::size_t>> monomials;
  for (std::size_t i = 0; i < vars(); ++i)
    for (std::size_t j = i; j < vars(); ++j) monomials.emplace_back(i, j);

  sigma_.assign(pairs, {});
  r2_pairs_.clear();
  if (relations_.empty()) {
    r2_pairs_ = monomials;
    for (std::size_t p = 0; p < pairs; ++p) sigma_[p] = {{p, Rational(1)}};
    return;
  }
  RationalMatrix a(relations_.size(), pairs);
  for (std::size_t k = 0; k < relations_.size(); ++k)
    for (const auto& t : relations_[k]) a(k, pair_index(t.i, t.j, vars())) = t.coefficient;
  const RowEchelon e = rref(std::move(a));

  // Non-pivot monomials form the R2 basis; a pivot monomial reduces to minus
  // the rest of its echelon row.
  std::vector<std::ptrdiff_t> basis_of(pairs, -1);
  std::vector<bool> is_pivot(pairs, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  for (std::size_t p = 0; p < pairs; ++p) {
    if (is_pivot[p]) continue;
    basis_of[p] = static_cast<std::ptrdiff_t>(r2_pairs_.size());
    r2_pairs_.push_back(monomials[p]);
    sigma_[p] = {{static_cast<std::size_t>(basis_of[p]), Rational(1)}};
  }
  for (std::size_t row = 0; row < e.pivots.size(); ++row) {
    SparseColumn col;
    for (std::size_t p = 0; p < pairs; ++p)
      if (!is_pivot[p] && sgn(e.reduced(row, p)) != 0)
        col.emplace_back(static_cast<std::size_t>(basis_of[p]), -e.reduced(row, p));
    sigma_[e.pivots[row]] = std::move(col);
  }
}

VarietyModel toric_model(const LatticePolytope& q) {
  const std::vector<LatticePoint> pts = lattice_points(q);
  const std::size_t vars = pts.size();
  const std::size_t r = q.dimension();

  std::vector<std::vector<std::int64_t>> local;
  for (const auto& p : pts) {
    std::vector<std::int64_t> y;
    for (const auto& c : q.to_local(p)) y.push_back(c.get_si());
    local.push_back(std::move(y));
  }
  std::vector<std::int64_t> lo(r, 0), hi(r, 0);
  for (const auto& y : local)
    for (std::size_t i = 0; i < r; ++i) {
      lo[i] = std::min(lo[i], 2 * y[i]);
      hi[i] = std::max(hi[i], 2 * y[i]);
    }
  const PointCodec codec(lo, hi);

  // Monomials x_i x_j in lexicographic pair order, keyed by the exponent sum.
  std::vector<std::uint64_t> key_of_pair;
  key_of_pair.reserve(pair_count(vars));
  std::vector<std::int64_t> sum(r);
  for (std::size_t i = 0; i < vars; ++i)
    for (std::size_t j = i; j < vars; ++j) {
      for (std::size_t c = 0; c < r; ++c) sum[c] = local[i][c] + local[j][c];
      key_of_pair.push_back(codec.encode(sum));
    }
  std::vector<std::uint64_t> keys = key_of_pair;
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  // Canonical order: lexicographic in ambient coordinates.
  std::vector<LatticePoint> sums;
  for (auto k : keys) {
    const auto y = codec.decode(k);
    sums.push_back(q.to_ambient(IntegerVector(y.begin(), y.end()), 2));
  }
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sums[a] < sums[b]; });
  std::unordered_map<std::uint64_t, std::size_t> basis_of_key;
  basis_of_key.reserve(keys.size());
  for (std::size_t b = 0; b < order.size(); ++b) basis_of_key[keys[order[b]]] = b;

  VarietyModel model;
  model.name_ = "toric";
  for (const auto& p : pts) model.labels_.push_back(point_label(p));
  model.dim_ = r;
  model.r1_exponents_ = pts;
  for (auto idx : order) model.r2_exponents_.push_back(sums[idx]);
  model.r2_pairs_.assign(keys.size(), {vars, vars});
  model.sigma_.resize(key_of_pair.size());

  // Binomial relations: the first monomial of each exponent minus every later one.
  std::size_t p = 0;
  for (std::size_t i = 0; i < vars; ++i)
    for (std::size_t j = i; j < vars; ++j, ++p) {
      const std::size_t b = basis_of_key[key_of_pair[p]];
      model.sigma_[p] = {{b, Rational(1)}};
      auto& first = model.r2_pairs_[b];
      if (first.first == vars) {
        first = {i, j};
      } else {
        model.relations_.push_back({{first.first, first.second, Rational(1)}, {i, j, Rational(-1)}});
      }
    }
  if (!relations_independent(model.relations_, vars))
    throw Error(ErrorKind::InconsistentModel, "binomial relations are dependent");

  if (count_lattice_points(q, 2) == static_cast<unsigned long>(model.r2_pairs_.size()))
    model.degree_ = normalized_volume(q);
  model.sampler_ = PointSampler::Torus;
  return model;
}

VarietyModel veronese_model(std::size_t n, std::size_t d) {
  if (n < 1 || d < 1) throw Error(ErrorKind::Validation, "Veronese model needs n >= 1 and d >= 1");
  VarietyModel model = toric_model(simplex(n, static_cast<long>(d)));
  return model;
}

VarietyModel segre_veronese_model(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& degrees) {
  if (dims.size() != degrees.size() || dims.size() < 2)
    throw Error(ErrorKind::Validation, "need at least two factors with matching degree list");
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (dims[i] < 1 || degrees[i] < 1) throw Error(ErrorKind::Validation, "factor dimensions and degrees must be >= 1");
  LatticePolytope q = simplex(dims[0], static_cast<long>(degrees[0]));
  for (std::size_t i = 1; i < dims.size(); ++i) q = product(q, simplex(dims[i], static_cast<long>(degrees[i])));
  return toric_model(q);
}

VarietyModel veronese_cone_model(std::size_t n) {
  if (n < 5) throw Error(ErrorKind::Validation, "cone over the Veronese surface needs n >= 5");
  // Symmetric 3x3 matrix [[x0,x1,x2],[x1,x3,x4],[x2,x4,x5]].
  const std::size_t entry[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
  std::vector<QuadraticRelation> minors;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b)
      for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t d = c + 1; d < 3; ++d)
          minors.push_back({{entry[a][c], entry[b][d], Rational(1)}, {entry[a][d], entry[b][c], Rational(-1)}});
  std::vector<std::string> labels;
  for (std::size_t i = 0; i <= n; ++i) labels.push_back("x" + std::to_string(i));
  std::vector<QuadraticRelation> chosen;
  for (auto k : independent_subset(minors, n + 1)) chosen.push_back(normalize(minors[k], n + 1));

  VarietyModel model("veronese_cone", std::move(labels), n - 3, std::move(chosen));
  model.degree_ = Integer(4);
  model.sampler_ = PointSampler::VeroneseCone;
  return model;
}

VarietyModel scroll_model(const std::vector<long>& d) {
  if (d.empty() || !std::is_sorted(d.begin(), d.end()) || d.front() < 0 || d.back() <= 0)
    throw Error(ErrorKind::Validation, "scroll degrees must be sorted, nonnegative, with a positive last entry");
  std::vector<std::string> labels;
  std::vector<std::pair<std::size_t, std::size_t>> columns;  // (top, bottom) coordinate indices
  for (std::size_t block = 0; block < d.size(); ++block) {
    const std::size_t start = labels.size();
    for (long j = 0; j <= d[block]; ++j) labels.push_back("x" + std::to_string(block) + "_" + std::to_string(j));
    for (long j = 0; j < d[block]; ++j)
      columns.emplace_back(start + static_cast<std::size_t>(j), start + static_cast<std::size_t>(j) + 1);
  }
  std::vector<QuadraticRelation> minors;
  for (std::size_t a = 0; a < columns.size(); ++a)
    for (std::size_t b = a + 1; b < columns.size(); ++b) {
      minors.push_back(normalize({{columns[a].first, columns[b].second, Rational(1)},
                                  {columns[b].first, columns[a].second, Rational(-1)}},
                                 labels.size()));
    }
  std::vector<QuadraticRelation> chosen;
  for (auto k : independent_subset(minors, labels.size())) chosen.push_back(minors[k]);

  std::ostringstream name;
  name << "scroll(";
  for (std::size_t i = 0; i < d.size(); ++i) name << (i ? "," : "") << d[i];
  name << ")";
  VarietyModel model(name.str(), std::move(labels), d.size(), std::move(chosen));
  model.degree_ = Integer(std::accumulate(d.begin(), d.end(), 0L));
  model.sampler_ = PointSampler::Scroll;
  model.scroll_degrees_ = d;
  return model;
}

VarietyModel quadric_model(std::size_t n) {
  if (n < 1) throw Error(ErrorKind::Validation, "quadric needs n >= 1");
  std::vector<std::string> labels;
  QuadraticRelation r;
  for (std::size_t i = 0; i <= n; ++i) {
    labels.push_back("x" + std::to_string(i));
    r.push_back({i, i, Rational(i < n ? 1 : -1)});
  }
  VarietyModel model("quadric", std::move(labels), n - 1, {r});
  model.degree_ = Integer(2);
  model.sampler_ = PointSampler::Quadric;
  return model;
}

std::size_t epsilon(const VarietyModel& model) {
  const auto n = static_cast<long long>(model.n());
  const auto m = static_cast<long long>(model.m());
  const auto relations = static_cast<long long>(model.i2_basis().size());
  const long long from_relations = binom2(n - m + 1) - relations;
  const long long from_dimension = static_cast<long long>(model.dim_r2()) - (m + 1) * (n + 1) + binom2(m + 1);
  if (from_relations != from_dimension || from_relations < 0)
    throw Error(ErrorKind::InconsistentModel, "quadratic deficiency formulas disagree (" +
                                                  std::to_string(from_relations) + " vs " +
                                                  std::to_string(from_dimension) + ")");
  return static_cast<std::size_t>(from_relations);
}

bool is_minimal_degree(const VarietyModel& model) { return epsilon(model) == 0; }

LatticePolytope veronese_reembedding(const LatticePolytope& q, long d) {
  if (d < 1) throw Error(ErrorKind::Validation, "re-embedding degree must be >= 1");
  return q.dilate(d);
}

std::optional<std::vector<double>> sample_real_point(const VarietyModel& model, CounterRng& rng) {
  std::vector<double> x;
  switch (model.sampler()) {
    case PointSampler::None:
      return std::nullopt;
    case PointSampler::Torus: {
      const std::size_t rank = model.r1_exponents().front().size();
      std::vector<double> z(rank);
      for (auto& v : z) v = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::exp(rng.normal());
      for (const auto& a : model.r1_exponents()) {
        double mono = 1.0;
        for (std::size_t i = 0; i < rank; ++i) mono *= std::pow(z[i], a[i].get_d());
        x.push_back(mono);
      }
      break;
    }
    case PointSampler::Scroll: {
      const double s = rng.normal(), t = rng.normal();
      for (long d : model.scroll_degrees()) {
        const double u = rng.normal();
        for (long j = 0; j <= d; ++j)
          x.push_back(u * std::pow(s, static_cast<double>(d - j)) * std::pow(t, static_cast<double>(j)));
      }
      break;
    }
    case PointSampler::VeroneseCone: {
      const double y0 = rng.normal(), y1 = rng.normal(), y2 = rng.normal();
      x = {y0 * y0, y0 * y1, y0 * y2, y1 * y1, y1 * y2, y2 * y2};
      while (x.size() < model.vars()) x.push_back(rng.normal());
      break;
    }
    case PointSampler::Quadric: {
      double norm = 0.0;
      for (std::size_t i = 0; i < model.n(); ++i) {
        x.push_back(rng.normal());
        norm += x.back() * x.back();
      }
      x.push_back((rng.uniform() < 0.5 ? -1.0 : 1.0) * std::sqrt(norm));
      break;
    }
  }
  return x;
}

double evaluate(const VarietyModel& model, const QuadraticForm& f, const std::vector<double>& x) {
  if (f.coefficients.size() != model.dim_r2() || x.size() != model.vars())
    throw Error(ErrorKind::DimensionMismatch, "form or point does not match the model");
  double acc = 0.0;
  for (std::size_t b = 0; b < f.coefficients.size(); ++b) {
    const auto [i, j] = model.r2_pairs()[b];
    acc += f.coefficients[b].get_d() * x[i] * x[j];
  }
  return acc;
}

Rational evaluate(const VarietyModel& model, const QuadraticForm& f, const std::vector<Rational>& x) {
  if (f.coefficients.size() != model.dim_r2() || x.size() != model.vars())
    throw Error(ErrorKind::DimensionMismatch, "form or point does not match the model");
  Rational acc = 0;
  for (std::size_t b = 0; b < f.coefficients.size(); ++b) {
    const auto [i, j] = model.r2_pairs()[b];
    acc += f.coefficients[b] * x[i] * x[j];
  }
  return acc;
}

std::vector<double> sigma_of(const VarietyModel& model, const std::vector<double>& gram) {
  const std::size_t v = model.vars();
  if (gram.size() != v * v) throw Error(ErrorKind::DimensionMismatch, "Gram matrix has the wrong size");
  std::vector<double> out(model.dim_r2(), 0.0);
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = i; j < v; ++j) {
      const double g = i == j ? gram[i * v + i] : gram[i * v + j] + gram[j * v + i];
      if (g == 0.0) continue;
      for (const auto& [b, c] : model.sigma(i, j)) out[b] += c.get_d() * g;
    }
  return out;
}

QuadraticForm product_form(const VarietyModel& model, const std::vector<Rational>& a, const std::vector<Rational>& b) {
  const std::size_t v = model.vars();
  if (a.size() != v || b.size() != v) throw Error(ErrorKind::DimensionMismatch, "linear form length mismatch");
  QuadraticForm f{std::vector<Rational>(model.dim_r2())};
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = i; j < v; ++j) {
      const Rational c = i == j ? Rational(a[i] * b[i]) : Rational(a[i] * b[j] + a[j] * b[i]);
      if (sgn(c) == 0) continue;
      for (const auto& [k, s] : model.sigma(i, j)) f.coefficients[k] += c * s;
    }
  return f;
}

}  // namespace sosmin
