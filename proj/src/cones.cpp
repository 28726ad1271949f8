#include "sosmin/cones.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "sosmin/errors.hpp"

namespace sosmin {

namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) throw Error(ErrorKind::DimensionMismatch, std::string(what) + " has the wrong length");
}

bool on_variety(const VarietyModel& model, const std::vector<Rational>& p) {
  for (const auto& r : model.i2_basis()) {
    Rational value = 0;
    for (const auto& t : r) value += t.coefficient * p[t.i] * p[t.j];
    if (sgn(value) != 0) return false;
  }
  return true;
}

// Scales so the largest coordinate magnitude is 1.
Rational max_norm(const std::vector<Rational>& p) {
  Rational m = 0;
  for (const auto& x : p) m = std::max<Rational>(m, abs(x));
  return m;
}

std::vector<Rational> scaled(std::vector<Rational> p, const Rational& s) {
  for (auto& x : p) x /= s;
  return p;
}

SymMatrix moment_from(const VarietyModel& model, const std::vector<double>& values) {
  SymMatrix m(model.vars());
  for (std::size_t i = 0; i < model.vars(); ++i)
    for (std::size_t j = i; j < model.vars(); ++j) {
      double acc = 0.0;
      for (const auto& [b, c] : model.sigma(i, j)) acc += c.get_d() * values[b];
      m(i, j) = acc;
    }
  return m;
}

// Kernel of the moment matrix: exact when possible, otherwise eigenvectors
// below the relative threshold with a guard band against ambiguous ranks.
struct Kernel {
  std::vector<std::vector<Rational>> exact;
  std::vector<std::vector<double>> approximate;
  [[nodiscard]] std::size_t size() const { return exact.size() + approximate.size(); }
};

Kernel moment_kernel(const DualFunctional& ell, double tol) {
  Kernel k;
  if (ell.exact_moment) {
    k.exact = rank_and_nullspace(*ell.exact_moment).nullspace;
    return k;
  }
  const auto e = sym_eigen(ell.moment);
  double top = 0.0;
  for (double v : e.values) top = std::max(top, std::abs(v));
  const double threshold = tol * top;
  for (std::size_t i = 0; i < e.values.size(); ++i) {
    const double v = e.values[i];
    if (top > 0.0 && std::abs(v) > threshold / 10 && std::abs(v) < threshold * 10)
      throw Error(ErrorKind::RankAmbiguity, "moment eigenvalue " + std::to_string(v) + " is within a factor 10 of the kernel threshold");
    if (v < threshold) {
      std::vector<double> col(e.dim);
      for (std::size_t r = 0; r < e.dim; ++r) col[r] = e.vector_entry(i, r);
      k.approximate.push_back(std::move(col));
    }
  }
  return k;
}

}  // namespace

GramSlice build_gram_slice(const VarietyModel& model) {
  // Representative monomials hit the unit vectors, so sigma is onto; the
  // relations lie in the kernel and the dimensions match.
  for (std::size_t b = 0; b < model.dim_r2(); ++b) {
    const auto [i, j] = model.r2_pairs()[b];
    const auto& col = model.sigma(i, j);
    if (col.size() != 1 || col[0].first != b || col[0].second != 1)
      throw Error(ErrorKind::InconsistentModel, "representative monomial does not map to its basis vector");
  }
  for (const auto& r : model.i2_basis()) {
    std::vector<Rational> image(model.dim_r2());
    for (const auto& t : r)
      for (const auto& [b, c] : model.sigma(t.i, t.j)) image[b] += t.coefficient * c;
    if (std::any_of(image.begin(), image.end(), [](const Rational& v) { return sgn(v) != 0; }))
      throw Error(ErrorKind::InconsistentModel, "relation does not lie in the kernel of sigma");
  }
  if (model.dim_r2() + model.i2_basis().size() != pair_count(model.vars()))
    throw Error(ErrorKind::InconsistentModel, "kernel of sigma is larger than the span of the relations");
  return GramSlice(model);
}

RationalMatrix GramSlice::sigma_matrix() const {
  RationalMatrix s(model_.dim_r2(), pair_count(model_.vars()));
  for (std::size_t i = 0; i < model_.vars(); ++i)
    for (std::size_t j = i; j < model_.vars(); ++j)
      for (const auto& [b, c] : model_.sigma(i, j)) s(b, pair_index(i, j, model_.vars())) = c;
  return s;
}

DualFunctional make_functional(const VarietyModel& model, std::vector<Rational> values) {
  require_size(values.size(), model.dim_r2(), "functional");
  std::vector<double> approx;
  for (const auto& v : values) approx.push_back(v.get_d());
  DualFunctional ell = make_functional(model, std::move(approx));
  ell.exact_moment = exact_moment_matrix(model, values);
  ell.exact_values = std::move(values);
  return ell;
}

DualFunctional make_functional(const VarietyModel& model, std::vector<double> values) {
  require_size(values.size(), model.dim_r2(), "functional");
  DualFunctional ell;
  ell.moment = moment_from(model, values);
  ell.values = std::move(values);
  return ell;
}

RationalMatrix exact_moment_matrix(const VarietyModel& model, const std::vector<Rational>& values) {
  require_size(values.size(), model.dim_r2(), "functional");
  RationalMatrix m(model.vars(), model.vars());
  for (std::size_t i = 0; i < model.vars(); ++i)
    for (std::size_t j = i; j < model.vars(); ++j) {
      Rational acc = 0;
      for (const auto& [b, c] : model.sigma(i, j)) acc += c * values[b];
      m(i, j) = acc;
      m(j, i) = acc;
    }
  return m;
}

Rational apply_exact(const DualFunctional& ell, const QuadraticForm& f) {
  if (!ell.exact()) throw Error(ErrorKind::Validation, "functional has no exact values");
  require_size(f.coefficients.size(), ell.exact_values->size(), "form");
  return dot(*ell.exact_values, f.coefficients);
}

double apply(const DualFunctional& ell, const QuadraticForm& f) {
  require_size(f.coefficients.size(), ell.values.size(), "form");
  double acc = 0.0;
  for (std::size_t b = 0; b < ell.values.size(); ++b) acc += ell.values[b] * f.coefficients[b].get_d();
  return acc;
}

DualFunctional point_square(const VarietyModel& model, const std::vector<Rational>& p) {
  require_size(p.size(), model.vars(), "point");
  if (!on_variety(model, p)) throw Error(ErrorKind::Validation, "point does not satisfy the quadratic relations");
  std::vector<Rational> values;
  for (const auto& [r, s] : model.r2_pairs()) values.push_back(p[r] * p[s]);
  return make_functional(model, std::move(values));
}

DualFunctional point_square(const VarietyModel& model, const std::vector<double>& p) {
  require_size(p.size(), model.vars(), "point");
  std::vector<double> values;
  for (const auto& [r, s] : model.r2_pairs()) values.push_back(p[r] * p[s]);
  return make_functional(model, std::move(values));
}

std::string to_string(SosStatus s) {
  switch (s) {
    case SosStatus::Certificate: return "Certificate";
    case SosStatus::Infeasible: return "Infeasible";
    case SosStatus::Undetermined: return "Undetermined";
  }
  return "?";
}

bool moment_psd(const DualFunctional& ell, double tol) {
  return min_eigenvalue(ell.moment) >= -tol * std::max(1.0, ell.moment.frobenius_norm());
}

SosOutcome sos_check(const QuadraticForm& f, const GramSlice& slice, const SosBudget& budget) {
  const VarietyModel& model = slice.model();
  require_size(f.coefficients.size(), model.dim_r2(), "form");
  if (budget.max_iterations == 0 || budget.check_every == 0)
    throw Error(ErrorKind::Validation, "iteration budget must be positive");
  const auto v = static_cast<Eigen::Index>(model.vars());
  const auto r2 = static_cast<Eigen::Index>(model.dim_r2());
  const auto pairs = static_cast<Eigen::Index>(pair_count(model.vars()));

  SosOutcome out;
  out.budget = budget;

  Eigen::VectorXd target(r2);
  for (Eigen::Index b = 0; b < r2; ++b) target[b] = f.coefficients[static_cast<std::size_t>(b)].get_d();
  const double scale = target.norm();
  if (scale == 0.0) {
    out.status = SosStatus::Certificate;
    out.gram = SymMatrix(model.vars());
    return out;
  }
  target /= scale;

  // sigma(G) = S (w .* packed(G)); its adjoint sends y to the symmetric matrix
  // with entries sigma(i,j) . y.
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(r2, pairs);
  Eigen::VectorXd weight(pairs);
  for (std::size_t i = 0; i < model.vars(); ++i)
    for (std::size_t j = i; j < model.vars(); ++j) {
      const auto p = static_cast<Eigen::Index>(pair_index(i, j, model.vars()));
      weight[p] = i == j ? 1.0 : 2.0;
      for (const auto& [b, c] : model.sigma(i, j)) s(static_cast<Eigen::Index>(b), p) = c.get_d();
    }
  const Eigen::LDLT<Eigen::MatrixXd> normal((s * weight.asDiagonal() * s.transpose()).eval());

  auto sigma = [&](const Eigen::MatrixXd& g) {
    Eigen::VectorXd packed(pairs);
    for (Eigen::Index i = 0, p = 0; i < v; ++i)
      for (Eigen::Index j = i; j < v; ++j, ++p) packed[p] = weight[p] * g(i, j);
    return Eigen::VectorXd(s * packed);
  };
  auto adjoint = [&](const Eigen::VectorXd& y) {
    const Eigen::VectorXd packed = s.transpose() * y;
    Eigen::MatrixXd m(v, v);
    for (Eigen::Index i = 0, p = 0; i < v; ++i)
      for (Eigen::Index j = i; j < v; ++j, ++p) m(i, j) = m(j, i) = packed[p];
    return m;
  };

  Eigen::MatrixXd x = adjoint(normal.solve(target));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(v);
  for (std::size_t k = 1; k <= budget.max_iterations; ++k) {
    eig.compute(x);
    if (eig.info() != Eigen::Success) throw Error(ErrorKind::NonConvergence, "eigensolver failed in sos_check");
    const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXd y = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
    const Eigen::VectorXd residual = sigma(y) - target;
    out.iterations = k;
    out.residual = residual.norm() * scale;

    if (out.residual <= budget.feas_tol) {
      SymMatrix gram(model.vars());
      for (Eigen::Index i = 0; i < v; ++i)
        for (Eigen::Index j = i; j < v; ++j)
          gram(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = scale * y(i, j);
      out.min_eigenvalue = min_eigenvalue(gram);
      if (out.min_eigenvalue >= -budget.psd_tol) {
        out.status = SosStatus::Certificate;
        out.gram = std::move(gram);
        return out;
      }
    }

    // y - P_A(y) = sigma^*(lambda); in the limit of an infeasible problem it
    // is PSD and lambda separates f from the SOS cone.
    const Eigen::VectorXd lambda = normal.solve(residual);
    const Eigen::MatrixXd m = adjoint(lambda);
    x = y - m;

    if (k % budget.check_every == 0) {
      const double norm = m.norm();
      if (norm == 0.0) continue;
      const double value = lambda.dot(target) / norm;
      out.dual_value = value;
      if (value > -budget.sep_tol) continue;
      std::vector<double> values(static_cast<std::size_t>(r2));
      for (Eigen::Index b = 0; b < r2; ++b) values[static_cast<std::size_t>(b)] = lambda[b] / norm;
      DualFunctional ell = make_functional(model, std::move(values));
      out.min_eigenvalue = min_eigenvalue(ell.moment);
      if (out.min_eigenvalue >= -budget.psd_tol) {
        out.status = SosStatus::Infeasible;
        out.dual = std::move(ell);
        return out;
      }
    }
  }
  return out;
}

SeparatingFunctional separating_functional_real(const VarietyModel& model,
                                                const std::vector<std::vector<Rational>>& points,
                                                const std::vector<Rational>& kappas) {
  if (points.size() < 2) throw Error(ErrorKind::Validation, "need at least two points");
  require_size(kappas.size(), points.size() - 1, "kappa list");
  for (const auto& k : kappas)
    if (sgn(k) <= 0) throw Error(ErrorKind::Validation, "weights must be positive");

  SeparatingFunctional out;
  for (const auto& p : points) {
    require_size(p.size(), model.vars(), "point");
    if (!on_variety(model, p)) throw Error(ErrorKind::Validation, "point does not satisfy the quadratic relations");
    const Rational s = max_norm(p);
    if (sgn(s) == 0) throw Error(ErrorKind::Validation, "zero vector is not a point");
    out.points.push_back(scaled(p, s));
  }
  const std::size_t count = out.points.size();
  RationalMatrix columns(model.vars(), count);
  for (std::size_t j = 0; j < count; ++j)
    for (std::size_t i = 0; i < model.vars(); ++i) columns(i, j) = out.points[j][i];
  const auto kernel = rank_and_nullspace(columns).nullspace;
  if (kernel.size() != 1) throw Error(ErrorKind::DegeneratePosition, "evaluations do not satisfy exactly one linear relation");
  const auto& rel = kernel.front();
  if (std::any_of(rel.begin(), rel.end(), [](const Rational& c) { return sgn(c) == 0; }))
    throw Error(ErrorKind::DegeneratePosition, "linear relation among evaluations has a zero coefficient");

  Rational total = 0;
  for (std::size_t j = 0; j + 1 < count; ++j) {
    out.lambdas.push_back(rel[j] / rel[count - 1]);
    total += out.lambdas[j] * out.lambdas[j] / kappas[j];
  }
  out.kappas = kappas;
  out.kappas.push_back(1 / total);

  std::vector<Rational> values;
  for (const auto& [r, s] : model.r2_pairs()) {
    Rational acc = 0;
    for (std::size_t j = 0; j + 1 < count; ++j) acc += out.kappas[j] * out.points[j][r] * out.points[j][s];
    acc -= out.kappas.back() * out.points.back()[r] * out.points.back()[s];
    values.push_back(acc);
  }
  out.functional = make_functional(model, std::move(values));

  RationalMatrix rows(count - 1, model.vars());
  std::vector<Rational> rhs;
  for (std::size_t j = 0; j + 1 < count; ++j) {
    for (std::size_t i = 0; i < model.vars(); ++i) rows(j, i) = out.points[j][i];
    rhs.push_back(out.lambdas[j] / kappas[j]);
  }
  out.interpolant = solve(rows, rhs).value();
  return out;
}

SeparatingFunctional separating_functional_complex(const VarietyModel& model,
                                                   const std::vector<std::vector<Rational>>& real_points,
                                                   const std::vector<Rational>& a, const std::vector<Rational>& b,
                                                   const std::vector<Rational>& kappas, const Rational& ratio) {
  if (real_points.empty()) throw Error(ErrorKind::Validation, "need at least one real point");
  require_size(kappas.size(), real_points.size(), "kappa list");
  require_size(a.size(), model.vars(), "real part");
  require_size(b.size(), model.vars(), "imaginary part");
  for (const auto& k : kappas)
    if (sgn(k) <= 0) throw Error(ErrorKind::Validation, "weights must be positive");
  // a + b i lies on X iff q(a) = q(b) and the polarization q(a, b) vanishes.
  for (const auto& r : model.i2_basis()) {
    Rational re = 0, im = 0;
    for (const auto& t : r) {
      re += t.coefficient * (a[t.i] * a[t.j] - b[t.i] * b[t.j]);
      im += t.coefficient * (a[t.i] * b[t.j] + a[t.j] * b[t.i]);
    }
    if (sgn(re) != 0 || sgn(im) != 0) throw Error(ErrorKind::Validation, "conjugate pair does not lie on the variety");
  }

  SeparatingFunctional out;
  for (const auto& p : real_points) {
    require_size(p.size(), model.vars(), "point");
    if (!on_variety(model, p)) throw Error(ErrorKind::Validation, "point does not satisfy the quadratic relations");
    const Rational s = max_norm(p);
    if (sgn(s) == 0) throw Error(ErrorKind::Validation, "zero vector is not a point");
    out.points.push_back(scaled(p, s));
  }
  const Rational pair_scale = std::max(max_norm(a), max_norm(b));
  if (sgn(pair_scale) == 0) throw Error(ErrorKind::Validation, "zero vector is not a point");
  const auto sa = scaled(a, pair_scale), sb = scaled(b, pair_scale);
  const bool real_pair = sgn(max_norm(sb)) == 0;

  // Real relation sum lambda_j p_j + mu a + nu b = 0. Rescaling the pair by
  // mu - nu i turns it into sum lambda_j p_j + Re(pair) = 0.
  const std::size_t e = out.points.size();
  const std::size_t cols = e + (real_pair ? 1 : 2);
  RationalMatrix columns(model.vars(), cols);
  for (std::size_t i = 0; i < model.vars(); ++i) {
    for (std::size_t j = 0; j < e; ++j) columns(i, j) = out.points[j][i];
    columns(i, e) = sa[i];
    if (!real_pair) columns(i, e + 1) = sb[i];
  }
  const auto kernel = rank_and_nullspace(columns).nullspace;
  if (kernel.size() != 1) throw Error(ErrorKind::DegeneratePosition, "evaluations do not satisfy exactly one linear relation");
  const auto& rel = kernel.front();
  if (std::any_of(rel.begin(), rel.begin() + static_cast<std::ptrdiff_t>(e), [](const Rational& c) { return sgn(c) == 0; }))
    throw Error(ErrorKind::DegeneratePosition, "linear relation among evaluations has a zero coefficient");
  const Rational mu = rel[e], nu = real_pair ? Rational(0) : rel[e + 1];
  if (sgn(mu) == 0 && sgn(nu) == 0)
    throw Error(ErrorKind::DegeneratePosition, "conjugate pair does not enter the linear relation");
  std::vector<Rational> ra(model.vars()), rb(model.vars());
  for (std::size_t i = 0; i < model.vars(); ++i) {
    ra[i] = mu * sa[i] + nu * sb[i];
    rb[i] = mu * sb[i] - nu * sa[i];
  }

  Rational total = 0;
  for (std::size_t j = 0; j < e; ++j) {
    out.lambdas.push_back(rel[j]);
    total += out.lambdas[j] * out.lambdas[j] / kappas[j];
  }
  const Rational pair_weight = 1 / (total * (1 + ratio * ratio));
  out.kappas = kappas;
  out.kappas.push_back(pair_weight);
  out.kappas.push_back(ratio * pair_weight);
  out.points.push_back(ra);
  out.points.push_back(rb);

  std::vector<Rational> values;
  for (const auto& [r, s] : model.r2_pairs()) {
    Rational acc = 0;
    for (std::size_t j = 0; j < e; ++j) acc += kappas[j] * out.points[j][r] * out.points[j][s];
    acc -= out.kappas[e] * (ra[r] * ra[s] - rb[r] * rb[s]);
    acc += out.kappas[e + 1] * (ra[r] * rb[s] + ra[s] * rb[r]);
    values.push_back(acc);
  }
  out.functional = make_functional(model, std::move(values));

  // g(p_j) = lambda_j / kappa_j and g(b) = ratio * total make both squares in
  // the completed-square expansion vanish.
  RationalMatrix rows(e + 1, model.vars());
  std::vector<Rational> rhs;
  for (std::size_t j = 0; j < e; ++j) {
    for (std::size_t i = 0; i < model.vars(); ++i) rows(j, i) = out.points[j][i];
    rhs.push_back(out.lambdas[j] / kappas[j]);
  }
  for (std::size_t i = 0; i < model.vars(); ++i) rows(e, i) = rb[i];
  rhs.push_back(ratio * total);
  if (auto g = solve(rows, rhs)) out.interpolant = std::move(*g);
  return out;
}

std::size_t kernel_dimension(const DualFunctional& ell, double tol) {
  if (ell.exact_moment) return ell.exact_moment->rows() - rank(*ell.exact_moment);
  const auto e = sym_eigen(ell.moment);
  double top = 0.0;
  for (double v : e.values) top = std::max(top, std::abs(v));
  const double threshold = tol * top;
  std::size_t count = 0;
  for (double v : e.values) {
    if (top > 0.0 && std::abs(v) > threshold / 10 && std::abs(v) < threshold * 10)
      throw Error(ErrorKind::RankAmbiguity, "moment eigenvalue within a factor 10 of the kernel threshold");
    if (v < threshold) ++count;
  }
  return count;
}

bool extremality_check(const DualFunctional& ell, const GramSlice& slice, double tol) {
  const VarietyModel& model = slice.model();
  require_size(ell.values.size(), model.dim_r2(), "functional");
  const Kernel kernel = moment_kernel(ell, tol);
  const std::size_t vars = model.vars(), r2 = model.dim_r2();
  if (kernel.size() == 0) return r2 == 1;

  // Unknown mu in R2*; constraint sigma^*(mu) k = 0 for every kernel vector k.
  if (!kernel.exact.empty()) {
    RationalMatrix c(vars * kernel.exact.size(), r2);
    for (std::size_t q = 0; q < kernel.exact.size(); ++q)
      for (std::size_t i = 0; i < vars; ++i)
        for (std::size_t j = 0; j < vars; ++j) {
          const Rational& kj = kernel.exact[q][j];
          if (sgn(kj) == 0) continue;
          for (const auto& [b, coeff] : model.sigma(i, j)) c(q * vars + i, b) += coeff * kj;
        }
    return r2 - rank(c) == 1;
  }
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(vars * kernel.approximate.size()),
                                            static_cast<Eigen::Index>(r2));
  for (std::size_t q = 0; q < kernel.approximate.size(); ++q)
    for (std::size_t i = 0; i < vars; ++i)
      for (std::size_t j = 0; j < vars; ++j)
        for (const auto& [b, coeff] : model.sigma(i, j))
          c(static_cast<Eigen::Index>(q * vars + i), static_cast<Eigen::Index>(b)) += coeff.get_d() * kernel.approximate[q][j];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv[0] : 0.0;
  std::size_t rank_c = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-9 * std::max(1.0, top)) ++rank_c;
  return r2 - rank_c == 1;
}

}  // namespace sosmin
