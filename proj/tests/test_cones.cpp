#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>

#include "oracles.hpp"
#include "sosmin/cones.hpp"
#include "sosmin/errors.hpp"

using namespace sosmin;
namespace orc = testing_oracles;

namespace {

std::vector<Rational> rv(std::initializer_list<long> xs) {
  std::vector<Rational> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

Rational q(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Coordinates (1, t, s, st) of P1 x P1 in lattice-point order.
VarietyModel p1xp1() { return segre_veronese_model({1, 1}, {1, 1}); }
std::vector<Rational> p1xp1_point(const Rational& s, const Rational& t) { return {1, t, s, s * t}; }

std::vector<double> random_psd(CounterRng& rng, std::size_t v, std::size_t rank) {
  std::vector<double> g(v * v, 0.0);
  for (std::size_t k = 0; k < rank; ++k) {
    std::vector<double> u(v);
    for (auto& x : u) x = rng.normal();
    for (std::size_t i = 0; i < v; ++i)
      for (std::size_t j = 0; j < v; ++j) g[i * v + j] += u[i] * u[j];
  }
  return g;
}

QuadraticForm as_form(const std::vector<double>& coeffs) {
  QuadraticForm f;
  for (double c : coeffs) f.coefficients.emplace_back(c);
  return f;
}

double eigen_min(const SymMatrix& m) {
  const auto d = m.dim();
  Eigen::MatrixXd e(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(e).eigenvalues().minCoeff();
}

double distance(const std::vector<double>& a, const QuadraticForm& f) {
  double acc = 0.0;
  for (std::size_t b = 0; b < a.size(); ++b) {
    const double d = a[b] - f.coefficients[b].get_d();
    acc += d * d;
  }
  return std::sqrt(acc);
}

std::vector<VarietyModel> minimal_degree_models() {
  return {toric_model(simplex(2, 2)), scroll_model({1, 2}), scroll_model({2, 2}), toric_model(segment(0, 3))};
}

}  // namespace

TEST(GramSlice, Examples) {
  const auto line = build_gram_slice(toric_model(simplex(1)));
  EXPECT_EQ(line.sigma_matrix(), RationalMatrix::identity(3));
  EXPECT_EQ(line.kernel_dimension(), 0u);

  const auto cubic = build_gram_slice(toric_model(segment(0, 3)));
  EXPECT_EQ(cubic.sigma_matrix().rows(), 7u);
  EXPECT_EQ(cubic.sigma_matrix().cols(), 10u);
  EXPECT_EQ(cubic.kernel_dimension(), 3u);

  const auto surface = build_gram_slice(toric_model(simplex(2, 2)));
  EXPECT_EQ(surface.sigma_matrix().rows(), 15u);
  EXPECT_EQ(surface.sigma_matrix().cols(), 21u);
  EXPECT_EQ(surface.kernel_dimension(), 6u);
}

TEST(GramSlice, SurjectiveWithKernelSpannedByRelations) {
  for (const auto& x : minimal_degree_models()) {
    const auto slice = build_gram_slice(x);
    const auto s = slice.sigma_matrix();
    std::vector<orc::QVec> rows;
    for (std::size_t r = 0; r < s.rows(); ++r) rows.emplace_back(s.row(r).begin(), s.row(r).end());
    EXPECT_EQ(orc::rank(rows, s.cols()), x.dim_r2());
    const auto kernel = orc::nullspace(rows, s.cols());
    EXPECT_EQ(kernel.size(), x.i2_basis().size());
    // Each relation, written over monomials, is killed by sigma.
    for (const auto& rel : x.i2_basis()) {
      std::vector<Rational> col(s.cols());
      for (const auto& t : rel) col[pair_index(t.i, t.j, x.vars())] += t.coefficient;
      for (const auto& v : s.apply(col)) EXPECT_EQ(sgn(v), 0);
    }
  }
}

TEST(DualFunctional, MomentIsTransposeOfSigma) {
  const auto x = scroll_model({1, 2});
  const auto slice = build_gram_slice(x);
  CounterRng rng(3);
  std::vector<Rational> values;
  for (std::size_t b = 0; b < x.dim_r2(); ++b) values.emplace_back(rng.integer(-5, 5));
  const auto ell = make_functional(x, values);
  const auto image = slice.sigma_matrix().transpose().apply(values);
  for (std::size_t i = 0; i < x.vars(); ++i)
    for (std::size_t j = i; j < x.vars(); ++j) {
      EXPECT_EQ((*ell.exact_moment)(i, j), image[pair_index(i, j, x.vars())]);
      EXPECT_DOUBLE_EQ(ell.moment(i, j), image[pair_index(i, j, x.vars())].get_d());
    }
  EXPECT_THROW(make_functional(x, std::vector<double>{1.0}), Error);
}

TEST(DualFunctional, PointEvaluations) {
  const auto x = toric_model(simplex(2, 2));
  CounterRng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = *sample_real_point(x, rng);
    const auto ell = point_square(x, p);
    EXPECT_TRUE(moment_psd(ell));
    auto neg = ell.values;
    for (auto& v : neg) v = -v;
    EXPECT_FALSE(moment_psd(make_functional(x, neg)));
  }
  // Exact point of P^n: rank one, kernel of dimension n.
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto pn = toric_model(simplex(n));
    std::vector<Rational> p;
    for (std::size_t i = 0; i <= n; ++i) p.emplace_back(static_cast<long>(i) + 1);
    EXPECT_EQ(kernel_dimension(point_square(pn, p)), n);
    std::vector<double> pd;
    for (const auto& c : p) pd.push_back(c.get_d());
    EXPECT_EQ(kernel_dimension(point_square(pn, pd)), n);
  }
  EXPECT_THROW(point_square(p1xp1(), rv({1, 1, 1, 2})), Error);
}

TEST(DualFunctional, GenericEvaluationsHaveFullRank) {
  const auto x = toric_model(segment(0, 3));
  std::vector<Rational> total(x.dim_r2());
  for (long s = 1; s <= 4; ++s) {
    const auto ell = point_square(x, rv({1, s, s * s, s * s * s}));
    for (std::size_t b = 0; b < total.size(); ++b) total[b] += (*ell.exact_values)[b];
  }
  EXPECT_EQ(kernel_dimension(make_functional(x, total)), 0u);
}

TEST(Extremality, PointVersusSum) {
  const auto line = toric_model(simplex(1));
  const auto slice = build_gram_slice(line);
  const auto a = point_square(line, rv({1, 2}));
  const auto b = point_square(line, rv({3, -1}));
  EXPECT_TRUE(extremality_check(a, slice));
  std::vector<Rational> sum;
  for (std::size_t i = 0; i < a.exact_values->size(); ++i) sum.push_back((*a.exact_values)[i] + (*b.exact_values)[i]);
  EXPECT_FALSE(extremality_check(make_functional(line, sum), slice));
  // Approximate path agrees.
  EXPECT_TRUE(extremality_check(point_square(line, std::vector<double>{1.0, 2.0}), slice));
  EXPECT_FALSE(extremality_check(make_functional(line, std::vector<double>{10.0, 3.0, 5.0}), slice));
}

TEST(Extremality, AmbiguousRankRaises) {
  const auto line = toric_model(simplex(1));
  // Moment diag(1, 5e-7): eigenvalue within the guard band of 1e-7.
  const auto ell = make_functional(line, std::vector<double>{1.0, 0.0, 5e-7});
  try {
    (void)kernel_dimension(ell);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RankAmbiguity);
  }
  EXPECT_THROW(extremality_check(ell, build_gram_slice(line)), Error);
}

TEST(SosCheck, ZeroForm) {
  const auto slice = build_gram_slice(toric_model(simplex(2, 2)));
  const auto out = sos_check(QuadraticForm{std::vector<Rational>(15)}, slice);
  EXPECT_EQ(out.status, SosStatus::Certificate);
  ASSERT_TRUE(out.gram);
  EXPECT_EQ(out.gram->frobenius_norm(), 0.0);
}

TEST(SosCheck, GramRoundTrip) {
  CounterRng rng(21);
  for (const auto& x : minimal_degree_models()) {
    const auto slice = build_gram_slice(x);
    for (int trial = 0; trial < 10; ++trial) {
      const auto f = as_form(sigma_of(x, random_psd(rng, x.vars(), x.vars() + static_cast<std::size_t>(trial))));
      const auto out = sos_check(f, slice);
      ASSERT_EQ(out.status, SosStatus::Certificate) << x.name() << " residual " << out.residual;
      EXPECT_LE(distance(sigma_of(x, out.gram->dense()), f), 1e-6);
      EXPECT_GE(eigen_min(*out.gram), -1e-8);
      // Any PSD moment matrix pairs nonnegatively with a certified form.
      for (int k = 0; k < 3; ++k) {
        const auto ell = point_square(x, *sample_real_point(x, rng));
        double scale = 0.0;
        for (const auto& c : f.coefficients) scale = std::max(scale, std::abs(c.get_d()));
        EXPECT_GE(apply(ell, f), -1e-6 * ell.moment.frobenius_norm() * (1.0 + scale));
      }
    }
  }
}

TEST(SosCheck, LowRankGramIsNeverInfeasible) {
  CounterRng rng(22);
  for (const auto& x : minimal_degree_models()) {
    const auto slice = build_gram_slice(x);
    SosBudget b;
    b.max_iterations = 5000;
    for (std::size_t rank = 1; rank < x.vars(); rank += 2) {
      const auto out = sos_check(as_form(sigma_of(x, random_psd(rng, x.vars(), rank))), slice, b);
      EXPECT_NE(out.status, SosStatus::Infeasible) << x.name() << " rank " << rank;
    }
  }
}

TEST(SosCheck, MotzkinTypeFormIsInfeasible) {
  const LatticePolytope q(2, {make_point({0, 0}), make_point({2, 1}), make_point({1, 2})});
  const auto x = toric_model(q);
  QuadraticForm f{std::vector<Rational>(x.dim_r2())};
  auto set = [&](std::initializer_list<long> u, long c) {
    const auto it = std::find(x.r2_exponents().begin(), x.r2_exponents().end(), make_point(u));
    ASSERT_NE(it, x.r2_exponents().end());
    f.coefficients[static_cast<std::size_t>(it - x.r2_exponents().begin())] = c;
  };
  set({0, 0}, 1);
  set({4, 2}, 1);
  set({2, 4}, 1);
  set({2, 2}, -3);
  const auto out = sos_check(f, build_gram_slice(x));
  ASSERT_EQ(out.status, SosStatus::Infeasible);
  ASSERT_TRUE(out.dual);
  EXPECT_TRUE(moment_psd(*out.dual, out.budget.psd_tol));
  EXPECT_LT(apply(*out.dual, f), 0.0);
}

TEST(SosCheck, RejectsBadInput) {
  const auto slice = build_gram_slice(toric_model(simplex(1)));
  EXPECT_THROW(sos_check(QuadraticForm{rv({1})}, slice), Error);
  SosBudget b;
  b.max_iterations = 0;
  EXPECT_THROW(sos_check(QuadraticForm{rv({1, 0, 1})}, slice, b), Error);
}

TEST(SosCheck, TinyBudgetIsUndetermined) {
  const auto x = scroll_model({2, 2});
  CounterRng rng(8);
  const auto f = as_form(sigma_of(x, random_psd(rng, x.vars(), 2)));
  SosBudget b;
  b.max_iterations = 1;
  b.feas_tol = 1e-14;
  const auto out = sos_check(f, build_gram_slice(x), b);
  EXPECT_EQ(out.status, SosStatus::Undetermined);
  EXPECT_FALSE(out.gram);
  EXPECT_FALSE(out.dual);
}

TEST(SeparatingFunctional, CollinearPointsOnRuling) {
  const auto x = p1xp1();
  const std::vector<std::vector<Rational>> pts = {p1xp1_point(-1, 1), p1xp1_point(1, 1), p1xp1_point(0, 1)};
  const auto sep = separating_functional_real(x, pts, {Rational(1), Rational(1)});
  EXPECT_EQ(sep.lambdas, (std::vector<Rational>{q(-1, 2), q(-1, 2)}));
  EXPECT_EQ(sep.kappas.back(), 2);
  EXPECT_TRUE(moment_psd(sep.functional));
  EXPECT_EQ(kernel_dimension(sep.functional), 3u);
  // The interpolant's square is annihilated.
  EXPECT_EQ(sgn(apply_exact(sep.functional, product_form(x, sep.interpolant, sep.interpolant))), 0);
  // Swapping s -> -s fixes the configuration, so odd-in-s values vanish.
  for (std::size_t b = 0; b < x.dim_r2(); ++b)
    if (x.r2_exponents()[b][0] % 2 != 0) EXPECT_EQ(sgn((*sep.functional.exact_values)[b]), 0);
}

TEST(SeparatingFunctional, CauchySchwarzExpansion) {
  const auto x = p1xp1();
  const std::vector<std::vector<Rational>> pts = {p1xp1_point(2, 3), p1xp1_point(-1, 3), p1xp1_point(5, 3),
                                                  p1xp1_point(q(1, 2), 3)};
  // Four points on a line span only two dimensions: rejected.
  EXPECT_THROW(separating_functional_real(x, pts, {Rational(1), Rational(2), Rational(3)}), Error);
  const std::vector<std::vector<Rational>> three(pts.begin(), pts.begin() + 3);
  const std::vector<Rational> kappas = {q(1, 3), Rational(2)};
  const auto sep = separating_functional_real(x, three, kappas);
  const Rational total = 1 / sep.kappas.back();
  CounterRng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Rational> g;
    for (std::size_t i = 0; i < x.vars(); ++i) g.emplace_back(rng.integer(-6, 6));
    std::vector<Rational> at;
    for (const auto& p : sep.points) at.push_back(dot(g, p));
    Rational weighted = 0, linear = 0;
    for (std::size_t j = 0; j + 1 < sep.points.size(); ++j) {
      weighted += kappas[j] * at[j] * at[j];
      linear += sep.lambdas[j] * at[j];
    }
    const Rational bracket = (total * weighted - linear * linear) / total;
    const Rational value = apply_exact(sep.functional, product_form(x, g, g));
    EXPECT_EQ(value, bracket);
    EXPECT_GE(sgn(value), 0);
  }
}

TEST(SeparatingFunctional, Degenerate) {
  const auto x = p1xp1();
  // Points off a common line: no relation.
  EXPECT_THROW(separating_functional_real(x, {p1xp1_point(1, 1), p1xp1_point(2, 3), p1xp1_point(-1, 5)},
                                          {Rational(1), Rational(1)}),
               Error);
  // Repeated point: relation with a zero coefficient.
  try {
    separating_functional_real(x, {p1xp1_point(1, 1), p1xp1_point(2, 1), p1xp1_point(2, 1)}, {Rational(1), Rational(1)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegeneratePosition);
  }
  EXPECT_THROW(separating_functional_real(x, {p1xp1_point(1, 1), p1xp1_point(2, 1)}, {Rational(-1)}), Error);
  EXPECT_THROW(separating_functional_real(x, {p1xp1_point(1, 1), rv({1, 1, 1, 2})}, {Rational(1)}), Error);
}

TEST(SeparatingFunctional, ConjugatePair) {
  const auto x = p1xp1();
  // Real point s = 2 and the pair s = 1 +- 3i on the ruling t = 1.
  const auto p = p1xp1_point(2, 1);
  const auto a = rv({1, 1, 1, 1});
  const auto b = rv({0, 0, 3, 3});
  for (const Rational& ratio : {Rational(0), q(1, 2), Rational(-2)}) {
    const auto sep = separating_functional_complex(x, {p}, a, b, {Rational(3)}, ratio);
    EXPECT_TRUE(moment_psd(sep.functional));
    EXPECT_EQ(sep.kappas.size(), 3u);
    EXPECT_EQ(sep.kappas[2], ratio * sep.kappas[1]);
    ASSERT_FALSE(sep.interpolant.empty());
    EXPECT_EQ(sgn(apply_exact(sep.functional, product_form(x, sep.interpolant, sep.interpolant))), 0);
    // Weight identity for the pair.
    const Rational k1 = sep.kappas[1], k2 = sep.kappas[2];
    EXPECT_EQ((k1 * k1 + k2 * k2) / k1, 1 / (sep.lambdas[0] * sep.lambdas[0] / 3));
  }
  EXPECT_THROW(separating_functional_complex(x, {p}, a, rv({0, 1, 3, 3}), {Rational(1)}), Error);
}

TEST(SeparatingFunctional, RealPairReducesToRealCase) {
  const auto x = p1xp1();
  const auto p = p1xp1_point(2, 1), r = p1xp1_point(-3, 1), a = p1xp1_point(5, 1);
  const std::vector<Rational> kappas = {q(5, 2), Rational(1)};
  const auto complex = separating_functional_complex(x, {p, r}, a, rv({0, 0, 0, 0}), kappas);
  const auto real = separating_functional_real(x, {p, r, a}, kappas);
  EXPECT_EQ(complex.functional.exact_values, real.functional.exact_values);
}
