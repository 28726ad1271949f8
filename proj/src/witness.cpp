#include "sosmin/witness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "combinatorics.hpp"
#include "sosmin/errors.hpp"
#include "sosmin/random.hpp"

namespace sosmin {

namespace {

Rational power(const Rational& x, long k) {
  Rational r = 1;
  for (long i = 0; i < k; ++i) r *= x;
  return r;
}

Rational power_of_two(long k) {
  Rational r = 1;
  if (k >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(k));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-k));
  }
  return r;
}

long degree_of(const VarietyModel& model) {
  if (!model.is_toric() || model.r1_exponents().front().size() != 2)
    throw Error(ErrorKind::Validation, "expected a Veronese model of P^2");
  long d = 0;
  for (const auto& u : model.r1_exponents()) d = std::max(d, Integer(u[0] + u[1]).get_si());
  return d;
}

// Exponent triple (x0, x1, x2) of a basis monomial of total degree `total`.
std::array<long, 3> exponents(const LatticePoint& u, long total) {
  const long a = u[0].get_si(), b = u[1].get_si();
  return {total - a - b, a, b};
}

Rational monomial(const std::array<long, 3>& e, const ProjectivePoint& p) {
  return power(p[0], e[0]) * power(p[1], e[1]) * power(p[2], e[2]);
}

// Rows of the three partial derivatives of a degree-2d form at p, over R2.
std::array<std::vector<Rational>, 3> gradient_rows(const VarietyModel& model, long d, const ProjectivePoint& p) {
  std::array<std::vector<Rational>, 3> rows;
  for (const auto& w : model.r2_exponents()) {
    const auto e = exponents(w, 2 * d);
    for (std::size_t k = 0; k < 3; ++k) {
      if (e[k] == 0) {
        rows[k].emplace_back(0);
        continue;
      }
      auto lowered = e;
      --lowered[k];
      rows[k].push_back(e[k] * monomial(lowered, p));
    }
  }
  return rows;
}

ProjectivePoint normalized(const std::array<Integer, 3>& c) {
  Integer g = 0;
  for (const auto& x : c) g = gcd(g, x);
  const auto lead = std::find_if(c.begin(), c.end(), [](const Integer& x) { return sgn(x) != 0; });
  if (sgn(*lead) < 0) g = -g;
  return {Rational(c[0] / g), Rational(c[1] / g), Rational(c[2] / g)};
}

bool same_point(const ProjectivePoint& a, const ProjectivePoint& b) {
  return a[1] * b[2] == a[2] * b[1] && a[0] * b[2] == a[2] * b[0] && a[0] * b[1] == a[1] * b[0];
}

std::vector<Rational> as_rational(const IntegerVector& v) { return {v.begin(), v.end()}; }

// Double-precision evaluation of a form over a basis of monomials.
class FormEvaluator {
 public:
  FormEvaluator(const std::vector<LatticePoint>& basis, long total, const std::vector<Rational>& coefficients)
      : total_(total) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (sgn(coefficients[b]) == 0) continue;
      terms_.push_back({exponents(basis[b], total), coefficients[b].get_d()});
    }
  }

  [[nodiscard]] double operator()(const std::array<double, 3>& x) const {
    std::array<std::vector<double>, 3> pw;
    for (std::size_t k = 0; k < 3; ++k) {
      pw[k].resize(static_cast<std::size_t>(total_) + 1);
      pw[k][0] = 1.0;
      for (long i = 1; i <= total_; ++i) pw[k][static_cast<std::size_t>(i)] = pw[k][static_cast<std::size_t>(i - 1)] * x[k];
    }
    double acc = 0.0;
    for (const auto& [e, c] : terms_)
      acc += c * pw[0][static_cast<std::size_t>(e[0])] * pw[1][static_cast<std::size_t>(e[1])] *
             pw[2][static_cast<std::size_t>(e[2])];
    return acc;
  }

 private:
  long total_;
  std::vector<std::pair<std::array<long, 3>, double>> terms_;
};

std::array<double, 3> sphere_point(CounterRng& rng) {
  while (true) {
    std::array<double, 3> x = {rng.normal(), rng.normal(), rng.normal()};
    const double n = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (n < 1e-12) continue;
    for (auto& c : x) c /= n;
    return x;
  }
}

std::vector<std::vector<Rational>> l2_products(const VarietyModel& model, const std::array<std::vector<Rational>, 3>& h) {
  std::vector<std::vector<Rational>> out;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j) out.push_back(product_form(model, h[i], h[j]).coefficients);
  return out;
}

std::vector<std::vector<Rational>> evaluation_rows(const VarietyModel& model, const std::vector<ProjectivePoint>& pts) {
  std::vector<std::vector<Rational>> rows;
  for (const auto& p : pts) rows.push_back(veronese_point(model, p));
  return rows;
}

std::size_t vanishing_dimension(const VarietyModel& model, const std::vector<ProjectivePoint>& pts) {
  if (pts.empty()) return model.vars();
  return rank_and_nullspace(RationalMatrix::from_rows(evaluation_rows(model, pts))).nullspace.size();
}

std::vector<ProjectivePoint> pick(const std::vector<ProjectivePoint>& pts, const std::vector<std::size_t>& idx) {
  std::vector<ProjectivePoint> out;
  for (auto i : idx) out.push_back(pts.at(i));
  return out;
}

void validate_selection(const std::vector<std::size_t>& selected, std::size_t count, std::size_t expected) {
  if (selected.size() != expected)
    throw Error(ErrorKind::Validation, "expected " + std::to_string(expected) + " selected points");
  std::vector<std::size_t> sorted = selected;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || (!sorted.empty() && sorted.back() >= count))
    throw Error(ErrorKind::Validation, "selected indices must be distinct and in range");
}

}  // namespace

std::vector<Rational> veronese_point(const VarietyModel& model, const ProjectivePoint& p) {
  const long d = degree_of(model);
  std::vector<Rational> out;
  for (const auto& u : model.r1_exponents()) out.push_back(monomial(exponents(u, d), p));
  return out;
}

Rational evaluate_form(const VarietyModel& model, const std::vector<Rational>& g, const ProjectivePoint& p) {
  if (g.size() != model.vars()) throw Error(ErrorKind::DimensionMismatch, "form length differs from dim R1");
  return dot(g, veronese_point(model, p));
}

std::vector<Rational> product_of_lines(const VarietyModel& model, const std::vector<LinearForm>& lines) {
  const long d = degree_of(model);
  if (static_cast<long>(lines.size()) != d) throw Error(ErrorKind::DimensionMismatch, "need exactly d linear forms");
  // Polynomial in (x1, x2) exponents; the x0 exponent is implied by the degree.
  std::map<std::pair<long, long>, Rational> poly = {{{0, 0}, Rational(1)}};
  for (const auto& l : lines) {
    std::map<std::pair<long, long>, Rational> next;
    for (const auto& [e, c] : poly) {
      next[e] += c * l[0];
      next[{e.first + 1, e.second}] += c * l[1];
      next[{e.first, e.second + 1}] += c * l[2];
    }
    poly = std::move(next);
  }
  std::vector<Rational> out;
  for (const auto& u : model.r1_exponents()) {
    const auto it = poly.find({u[0].get_si(), u[1].get_si()});
    out.push_back(it == poly.end() ? Rational(0) : it->second);
  }
  return out;
}

HyperplaneSections choose_hyperplanes(std::size_t d, std::uint64_t seed, std::size_t max_draws) {
  if (d < 3) throw Error(ErrorKind::Validation, "witness construction needs d >= 3");
  const VarietyModel model = veronese_model(2, d);
  const std::size_t general = model.e() + 1;
  CounterRng rng(seed, 1);

  for (std::size_t draw = 1; draw <= max_draws; ++draw) {
    auto random_line = [&] {
      LinearForm l;
      do {
        for (auto& c : l) c = rng.integer(-4, 4);
      } while (sgn(l[0]) == 0 && sgn(l[1]) == 0 && sgn(l[2]) == 0);
      return l;
    };
    HyperplaneSections s;
    s.d = d;
    s.draws = draw;
    for (std::size_t i = 0; i < d; ++i) s.first.push_back(random_line());
    for (std::size_t i = 0; i < d; ++i) s.second.push_back(random_line());

    bool ok = true;
    for (std::size_t i = 0; i < d && ok; ++i)
      for (std::size_t j = 0; j < d && ok; ++j) {
        const auto& a = s.first[i];
        const auto& b = s.second[j];
        const std::array<Integer, 3> cross = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                                              a[0] * b[1] - a[1] * b[0]};
        if (sgn(cross[0]) == 0 && sgn(cross[1]) == 0 && sgn(cross[2]) == 0) {
          ok = false;
          break;
        }
        const ProjectivePoint p = normalized(cross);
        for (const auto& q : s.points)
          if (same_point(p, q)) ok = false;
        s.points.push_back(p);
      }
    if (!ok) continue;

    const auto rows = evaluation_rows(model, s.points);
    if (rank_of(rows) != general) continue;
    // With d >= 4 some line holds d points, and the (e+1)-subsets avoiding
    // three of them are dependent, so only the cubic case is checked exhaustively.
    if (d == 3)
      for_each_combination(rows.size(), general, [&](std::span<const std::size_t> idx) {
        if (!ok) return;
        std::vector<RationalVector> subset;
        for (auto i : idx) subset.push_back(rows[i]);
        if (rank_of(subset) != general) ok = false;
      });
    if (!ok) continue;

    s.h1 = product_of_lines(model, s.first);
    s.h2 = product_of_lines(model, s.second);
    return s;
  }
  throw Error(ErrorKind::RetryExhausted,
              "no admissible pair of line arrangements in " + std::to_string(max_draws) + " draws");
}

std::vector<Rational> fit_h0(const VarietyModel& model, const HyperplaneSections& sections,
                             const std::vector<std::size_t>& selected, std::uint64_t seed) {
  validate_selection(selected, sections.points.size(), model.e());
  const auto chosen = pick(sections.points, selected);
  const auto kernel = rank_and_nullspace(RationalMatrix::from_rows(evaluation_rows(model, chosen))).nullspace;
  if (kernel.size() != model.m() + 1)
    throw Error(ErrorKind::DegenerateSpan, "forms vanishing at the selected points span dimension " +
                                               std::to_string(kernel.size()) + ", expected " +
                                               std::to_string(model.m() + 1));
  std::vector<ProjectivePoint> others;
  for (std::size_t i = 0; i < sections.points.size(); ++i)
    if (std::find(selected.begin(), selected.end(), i) == selected.end()) others.push_back(sections.points[i]);

  CounterRng rng(seed, 2);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Rational> h0(model.vars());
    for (const auto& k : kernel) {
      const Rational c = rng.integer(-5, 5);
      for (std::size_t i = 0; i < h0.size(); ++i) h0[i] += c * k[i];
    }
    if (rank_of({h0, sections.h1, sections.h2}) != 3) continue;
    if (std::any_of(others.begin(), others.end(),
                    [&](const ProjectivePoint& q) { return sgn(evaluate_form(model, h0, q)) == 0; }))
      continue;
    return as_rational(primitive_integer(h0));
  }
  throw Error(ErrorKind::DegenerateSpan, "no combination vanishes only at the selected points");
}

FormChoice build_f(const VarietyModel& model, const std::vector<ProjectivePoint>& points,
                   const std::vector<std::size_t>& selected, const std::array<std::vector<Rational>, 3>& h) {
  const long d = degree_of(model);
  validate_selection(selected, points.size(), model.e());
  std::vector<RationalVector> rows;
  for (auto i : selected)
    for (auto& r : gradient_rows(model, d, points[i])) rows.push_back(std::move(r));
  const auto solutions = rank_and_nullspace(RationalMatrix::from_rows(rows)).nullspace;

  FormChoice out;
  out.solution_dimension = solutions.size();
  auto l2 = l2_products(model, h);
  out.l2_rank = rank_of(l2);
  out.quotient_dimension = out.solution_dimension - out.l2_rank;
  for (const auto& candidate : solutions) {
    l2.push_back(candidate);
    const bool outside = rank_of(l2) > out.l2_rank;
    l2.pop_back();
    if (outside) {
      out.f.coefficients = as_rational(primitive_integer(candidate));
      return out;
    }
  }
  throw Error(ErrorKind::EmptyComplement, "every form singular at the selected points lies in L^2");
}

SampleSummary sample_on_sphere(const VarietyModel& model, const QuadraticForm& w, std::size_t samples,
                               std::uint64_t seed) {
  const long d = degree_of(model);
  if (w.coefficients.size() != model.dim_r2()) throw Error(ErrorKind::DimensionMismatch, "form length differs from dim R2");
  const FormEvaluator eval(model.r2_exponents(), 2 * d, w.coefficients);
  CounterRng rng(seed, 3);
  SampleSummary s;
  s.samples = samples;
  s.min_value = samples ? std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double v = eval(sphere_point(rng));
    s.min_value = std::min(s.min_value, v);
    s.max_abs = std::max(s.max_abs, std::abs(v));
  }
  return s;
}

DeltaChoice delta_search(const VarietyModel& model, const QuadraticForm& f, const std::array<std::vector<Rational>, 3>& h,
                         const std::vector<ProjectivePoint>& selected_points, std::size_t samples, std::uint64_t seed) {
  const long d = degree_of(model);
  if (samples == 0) throw Error(ErrorKind::Validation, "delta search needs samples");
  if (f.coefficients.size() != model.dim_r2()) throw Error(ErrorKind::DimensionMismatch, "form length differs from dim R2");
  const FormEvaluator fe(model.r2_exponents(), 2 * d, f.coefficients);
  std::vector<FormEvaluator> he;
  for (const auto& g : h) he.emplace_back(model.r1_exponents(), d, g);

  std::vector<std::array<double, 3>> centers;
  for (const auto& p : selected_points) {
    std::array<double, 3> c = {p[0].get_d(), p[1].get_d(), p[2].get_d()};
    const double n = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    for (auto& x : c) x /= n;
    centers.push_back(c);
  }
  const double near = std::cos(0.05);

  CounterRng rng(seed, 4);
  std::vector<double> fv(samples), sv(samples);
  double inf_squares = std::numeric_limits<double>::infinity(), sup_f = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto x = sphere_point(rng);
    fv[i] = fe(x);
    sv[i] = 0.0;
    for (const auto& g : he) sv[i] += g(x) * g(x);
    scale = std::max(scale, sv[i]);
    const bool excluded = std::any_of(centers.begin(), centers.end(), [&](const auto& c) {
      return std::abs(c[0] * x[0] + c[1] * x[1] + c[2] * x[2]) > near;
    });
    if (excluded) continue;
    inf_squares = std::min(inf_squares, sv[i]);
    sup_f = std::max(sup_f, std::abs(fv[i]));
  }

  DeltaChoice out;
  out.samples = samples;
  out.scale = scale;
  out.estimate = sup_f > 0.0 && std::isfinite(inf_squares) ? inf_squares / sup_f : 1.0;
  long k = static_cast<long>(std::floor(std::log2(std::max(out.estimate, 0x1.0p-61))));
  k = std::min(k, 20L);

  auto min_at = [&](double delta) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples; ++i) m = std::min(m, delta * fv[i] + sv[i]);
    return m;
  };
  while (true) {
    if (k < -60) throw Error(ErrorKind::NoDeltaFound, "delta fell below 2^-60");
    const double m = min_at(std::ldexp(1.0, static_cast<int>(k)));
    if (m >= kNonnegativeMargin * scale) break;
    --k;
    ++out.halvings;
  }
  --k;
  out.delta = power_of_two(k);
  out.min_value = min_at(std::ldexp(1.0, static_cast<int>(k)));
  return out;
}

bool certify_not_sos(const WitnessReport& report) {
  try {
    const VarietyModel& model = report.model;
    const long d = degree_of(model);
    const auto chosen = pick(report.sections.points, report.selected);
    for (const auto& g : report.h)
      if (g.size() != model.vars()) return false;

    // (a) the forms vanishing at the selected points are exactly span{h0, h1, h2}.
    for (const auto& g : report.h)
      for (const auto& p : chosen)
        if (sgn(evaluate_form(model, g, p)) != 0) return false;
    if (rank_of({report.h[0], report.h[1], report.h[2]}) != 3) return false;
    if (vanishing_dimension(model, chosen) != 3) return false;

    // (b) f is singular at every selected point but not in L^2.
    const auto& f = report.form.f.coefficients;
    if (f.size() != model.dim_r2()) return false;
    for (const auto& p : chosen)
      for (const auto& row : gradient_rows(model, d, p))
        if (sgn(dot(row, f)) != 0) return false;
    auto l2 = l2_products(model, report.h);
    const std::size_t base = rank_of(l2);
    l2.push_back(f);
    if (rank_of(l2) != base + 1) return false;

    // The witness is delta f + h0^2 + h1^2 + h2^2 with delta > 0.
    if (sgn(report.delta.delta) <= 0) return false;
    std::vector<Rational> w(model.dim_r2());
    for (std::size_t b = 0; b < w.size(); ++b) w[b] = report.delta.delta * f[b];
    for (const auto& g : report.h) {
      const auto sq = product_form(model, g, g).coefficients;
      for (std::size_t b = 0; b < w.size(); ++b) w[b] += sq[b];
    }
    return w == report.witness.coefficients;
  } catch (const Error&) {
    return false;
  } catch (const std::out_of_range&) {
    return false;
  }
}

WitnessReport hilbert_witness(std::size_t d, std::uint64_t seed, const WitnessOptions& options) {
  if (d < 3) throw Error(ErrorKind::Validation, "witness construction needs d >= 3");
  const VarietyModel model = veronese_model(2, d);
  CounterRng master(seed, 5);
  std::string last_failure = "no attempts";

  for (std::size_t attempt = 1; attempt <= options.max_attempts; ++attempt) {
    const std::uint64_t sub = master.next();
    try {
      WitnessReport r{.d = d,
                      .model = model,
                      .sections = {},
                      .selected = {},
                      .h = {},
                      .form = {},
                      .delta = {},
                      .witness = {},
                      .certificate = {},
                      .functional = std::nullopt,
                      .sos_status = std::nullopt,
                      .attempts = attempt};
      r.sections = choose_hyperplanes(d, sub);

      std::vector<std::size_t> order(r.sections.points.size());
      std::iota(order.begin(), order.end(), 0);
      CounterRng pick_rng(sub, 6);
      for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[static_cast<std::size_t>(pick_rng.integer(0, static_cast<std::int64_t>(i) - 1))]);
      r.selected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(model.e()));
      std::sort(r.selected.begin(), r.selected.end());

      r.h = {fit_h0(model, r.sections, r.selected, sub), r.sections.h1, r.sections.h2};
      r.form = build_f(model, r.sections.points, r.selected, r.h);
      const auto chosen = pick(r.sections.points, r.selected);
      r.delta = delta_search(model, r.form.f, r.h, chosen, options.samples, sub);

      r.witness.coefficients.assign(model.dim_r2(), Rational(0));
      for (std::size_t b = 0; b < model.dim_r2(); ++b) r.witness.coefficients[b] = r.delta.delta * r.form.f.coefficients[b];
      for (const auto& g : r.h) {
        const auto sq = product_form(model, g, g).coefficients;
        for (std::size_t b = 0; b < sq.size(); ++b) r.witness.coefficients[b] += sq[b];
      }

      r.certificate.vanishing_dimension = vanishing_dimension(model, chosen);
      r.certificate.span_rank = rank_of({r.h[0], r.h[1], r.h[2]});
      auto l2 = l2_products(model, r.h);
      r.certificate.l2_rank = rank_of(l2);
      l2.push_back(r.form.f.coefficients);
      r.certificate.l2_with_f_rank = rank_of(l2);

      if (options.attach_functional) {
        // e selected points followed by two of the others.
        std::vector<std::vector<Rational>> pts;
        for (const auto& p : chosen) pts.push_back(veronese_point(model, p));
        for (std::size_t i = 0; i < r.sections.points.size() && pts.size() < model.e() + 2; ++i)
          if (!std::binary_search(r.selected.begin(), r.selected.end(), i))
            pts.push_back(veronese_point(model, r.sections.points[i]));
        r.functional = separating_functional_real(model, pts, std::vector<Rational>(pts.size() - 1, Rational(1)));
      }
      if (options.run_sos_check) r.sos_status = sos_check(r.witness, build_gram_slice(model), options.budget).status;
      return r;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Validation || e.kind() == ErrorKind::DimensionMismatch) throw;
      last_failure = e.what();
    }
  }
  throw Error(ErrorKind::RetryExhausted, "witness construction failed after " + std::to_string(options.max_attempts) +
                                             " attempts; last failure: " + last_failure);
}

}  // namespace sosmin
