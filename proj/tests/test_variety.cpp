#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "sosmin/errors.hpp"
#include "sosmin/variety.hpp"

using namespace sosmin;
namespace orc = testing_oracles;

namespace {

// Rows of the relation matrix over all monomials x_i x_j, i <= j.
std::vector<orc::QVec> relation_rows(const VarietyModel& x) {
  std::vector<orc::QVec> rows;
  for (const auto& r : x.i2_basis()) {
    orc::QVec row(pair_count(x.vars()), 0);
    for (const auto& t : r) row[pair_index(t.i, t.j, x.vars())] += t.coefficient;
    rows.push_back(row);
  }
  return rows;
}

std::size_t pairwise_sum_count(const LatticePolytope& q) {
  const auto pts = lattice_points(q);
  std::set<LatticePoint> sums;
  for (const auto& a : pts)
    for (const auto& b : pts) {
      LatticePoint s = a;
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += b[i];
      sums.insert(s);
    }
  return sums.size();
}

long c2(long n) { return n * (n - 1) / 2; }

void expect_well_formed(const VarietyModel& x) {
  const auto rows = relation_rows(x);
  EXPECT_EQ(orc::rank(rows, pair_count(x.vars())), rows.size()) << x.name();
  EXPECT_EQ(x.dim_r2() + rows.size(), pair_count(x.vars())) << x.name();
  EXPECT_EQ(x.e(), x.n() - x.m());
  // Every relation maps to zero in R2.
  for (const auto& r : x.i2_basis()) {
    std::vector<Rational> image(x.dim_r2());
    for (const auto& t : r)
      for (const auto& [b, c] : x.sigma(t.i, t.j)) image[b] += t.coefficient * c;
    for (const auto& v : image) EXPECT_EQ(sgn(v), 0) << x.name();
  }
  // Representative monomials map to basis vectors.
  for (std::size_t b = 0; b < x.dim_r2(); ++b) {
    const auto [i, j] = x.r2_pairs()[b];
    EXPECT_EQ(x.sigma(i, j), (SparseColumn{{b, Rational(1)}}));
  }
}

}  // namespace

TEST(PairIndex, LexicographicPacking) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i; j < 5; ++j) {
      EXPECT_EQ(pair_index(i, j, 5), k);
      EXPECT_EQ(pair_index(j, i, 5), k);
      ++k;
    }
  EXPECT_EQ(pair_count(5), k);
}

TEST(RelationMatrix, RoundTrip) {
  const QuadraticRelation r = {{0, 0, Rational(3)}, {0, 2, Rational(-1)}, {1, 2, Rational(5, 2)}};
  const auto s = relation_matrix(r, 3);
  EXPECT_EQ(s[0 * 3 + 2], Rational(-1, 2));
  EXPECT_EQ(s[2 * 3 + 0], Rational(-1, 2));
  EXPECT_EQ(relation_from_matrix(s, 3), r);
  auto bad = s;
  bad[1] = 7;
  EXPECT_THROW(relation_from_matrix(bad, 3), Error);
  EXPECT_THROW(relation_from_matrix(s, 2), Error);
}

TEST(ToricModel, Examples) {
  const auto v = toric_model(simplex(2, 2));
  EXPECT_EQ(v.n(), 5u);
  EXPECT_EQ(v.m(), 2u);
  EXPECT_EQ(v.e(), 3u);
  EXPECT_EQ(v.i2_basis().size(), 6u);
  EXPECT_EQ(v.degree(), Integer(4));
  expect_well_formed(v);

  for (std::size_t m = 1; m <= 4; ++m) {
    const auto p = toric_model(simplex(m));
    EXPECT_EQ(p.n(), m);
    EXPECT_EQ(p.e(), 0u);
    EXPECT_TRUE(p.i2_basis().empty());
    EXPECT_EQ(epsilon(p), 0u);
  }

  const auto cubic = toric_model(segment(0, 3));
  EXPECT_EQ(cubic.n(), 3u);
  EXPECT_EQ(cubic.e(), 2u);
  EXPECT_EQ(cubic.i2_basis().size(), 3u);
  EXPECT_EQ(cubic.dim_r2(), 7u);
  EXPECT_EQ(cubic.degree(), Integer(3));
  expect_well_formed(cubic);
}

TEST(ToricModel, BasesAreLatticePointsAndSums) {
  const auto q = cayley_segments({1, 2});
  const auto x = toric_model(q);
  EXPECT_EQ(x.r1_exponents(), lattice_points(q));
  EXPECT_EQ(x.r2_exponents(), lattice_points(q, 2));
  EXPECT_TRUE(std::is_sorted(x.r2_exponents().begin(), x.r2_exponents().end()));
  for (std::size_t b = 0; b < x.dim_r2(); ++b) {
    const auto [i, j] = x.r2_pairs()[b];
    LatticePoint s = x.r1_exponents()[i];
    for (std::size_t c = 0; c < s.size(); ++c) s[c] += x.r1_exponents()[j][c];
    EXPECT_EQ(s, x.r2_exponents()[b]);
  }
}

TEST(ToricModel, MatchesOracleOnCorpus) {
  for (const auto& q : orc::corpus(31, 40)) {
    const auto x = toric_model(q);
    EXPECT_EQ(x.vars(), lattice_points(q).size());
    EXPECT_EQ(x.dim_r2(), pairwise_sum_count(q));
    expect_well_formed(x);
    if (is_k_normal(q, 2).normal) {
      EXPECT_EQ(x.degree(), h_star(q).sum());
    } else {
      EXPECT_FALSE(x.degree().has_value());
    }
  }
}

TEST(ToricModel, DegreeOmittedWhenNotTwoNormal) {
  const auto q = reeve_simplex(3);
  ASSERT_FALSE(is_k_normal(q, 2).normal);
  EXPECT_FALSE(toric_model(q).degree().has_value());
}

TEST(Epsilon, EqualsSecondHStarCoefficientForTwoNormal) {
  std::size_t checked = 0;
  for (const auto& q : orc::corpus(77, 60)) {
    if (!is_k_normal(q, 2).normal) continue;
    EXPECT_EQ(Integer(static_cast<unsigned long>(epsilon(toric_model(q)))), h_star(q).at(2));
    ++checked;
  }
  EXPECT_GT(checked, 20u);
}

TEST(Epsilon, Examples) {
  EXPECT_EQ(epsilon(veronese_model(2, 2)), 0u);
  EXPECT_EQ(epsilon(veronese_model(2, 3)), 1u);
  EXPECT_EQ(veronese_model(2, 3).dim_r2(), 28u);
  EXPECT_EQ(epsilon(veronese_model(3, 2)), 1u);
  EXPECT_EQ(veronese_model(3, 2).dim_r2(), 35u);
  for (std::size_t d = 1; d <= 6; ++d) EXPECT_EQ(epsilon(veronese_model(1, d)), 0u);
  for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(epsilon(quadric_model(n)), 0u);
  // Ternary octics: e = 12, dim I2 = C(16,2) - 45.
  EXPECT_EQ(epsilon(veronese_model(2, 4)), static_cast<std::size_t>(c2(13) - (c2(16) - 45)));
}

TEST(Epsilon, FormulaAgreesWithIndependentCount) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t d = 1; d <= 4; ++d) {
      const auto x = veronese_model(n, d);
      // dim R2 of the d-th Veronese is the number of degree-2d monomials.
      long r2 = 1;
      for (std::size_t i = 1; i <= n; ++i) r2 = r2 * static_cast<long>(2 * d + i) / static_cast<long>(i);
      EXPECT_EQ(static_cast<long>(x.dim_r2()), r2);
      const long nn = static_cast<long>(x.n()), m = static_cast<long>(n);
      EXPECT_EQ(static_cast<long>(epsilon(x)), r2 - (m + 1) * (nn + 1) + c2(m + 1));
    }
}

TEST(Epsilon, RejectsInconsistentModel) {
  // A single conic relation declared as a surface in P^2 fails the count.
  const VarietyModel bad("bad", {"x", "y", "z"}, 2, {{{0, 0, Rational(1)}, {1, 2, Rational(-1)}}});
  try {
    (void)epsilon(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InconsistentModel);
  }
}

TEST(MinimalDegree, HilbertCasesSmallScan) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t d = 1; d <= 4; ++d)
      EXPECT_EQ(is_minimal_degree(veronese_model(n, d)), d == 1 || n == 1 || (n == 2 && d == 2)) << n << "," << d;
}

TEST(SegreVeronese, Examples) {
  EXPECT_EQ(epsilon(segre_veronese_model({1, 1}, {1, 1})), 0u);
  EXPECT_EQ(epsilon(segre_veronese_model({1, 2}, {2, 1})), 0u);
  EXPECT_GT(epsilon(segre_veronese_model({2, 2}, {1, 1})), 0u);
  EXPECT_GT(epsilon(segre_veronese_model({1, 1}, {2, 2})), 0u);
  EXPECT_THROW(segre_veronese_model({1}, {1}), Error);
  EXPECT_THROW(segre_veronese_model({1, 1}, {1}), Error);
  EXPECT_THROW(segre_veronese_model({1, 0}, {1, 1}), Error);
}

TEST(VeroneseCone, Examples) {
  const auto s = veronese_cone_model(5);
  EXPECT_EQ(s.i2_basis().size(), 6u);
  EXPECT_EQ(s.m(), 2u);
  EXPECT_EQ(s.degree(), Integer(4));
  EXPECT_EQ(epsilon(s), 0u);
  expect_well_formed(s);
  EXPECT_EQ(s.dim_r2(), veronese_model(2, 2).dim_r2());

  const auto c = veronese_cone_model(6);
  EXPECT_EQ(c.m(), 3u);
  EXPECT_EQ(c.i2_basis().size(), 6u);
  EXPECT_EQ(epsilon(c), 0u);
  expect_well_formed(c);
  EXPECT_THROW(veronese_cone_model(4), Error);
}

TEST(Scroll, Examples) {
  const auto a = scroll_model({1, 2});
  EXPECT_EQ(a.n(), 4u);
  EXPECT_EQ(a.m(), 2u);
  EXPECT_EQ(a.degree(), Integer(3));
  EXPECT_EQ(a.degree(), Integer(static_cast<long>(1 + a.e())));
  EXPECT_EQ(epsilon(a), 0u);
  expect_well_formed(a);

  for (const auto& d : std::vector<std::vector<long>>{{2, 2}, {1, 1, 1}, {0, 3}, {1, 3}, {2, 3, 4}}) {
    const auto x = scroll_model(d);
    EXPECT_TRUE(is_minimal_degree(x));
    expect_well_formed(x);
  }

  const auto p1p1 = scroll_model({1, 1});
  const auto segre = segre_veronese_model({1, 1}, {1, 1});
  EXPECT_EQ(p1p1.n(), segre.n());
  EXPECT_EQ(p1p1.dim_r2(), segre.dim_r2());
  EXPECT_EQ(epsilon(p1p1), epsilon(segre));

  EXPECT_THROW(scroll_model({}), Error);
  EXPECT_THROW(scroll_model({2, 1}), Error);
  EXPECT_THROW(scroll_model({0, 0}), Error);
  EXPECT_THROW(scroll_model({-1, 2}), Error);
}

TEST(Scroll, RationalNormalCurveMatchesToricModel) {
  const auto s = scroll_model({3});
  const auto t = toric_model(segment(0, 3));
  ASSERT_EQ(s.vars(), t.vars());
  auto rows = relation_rows(s);
  const auto other = relation_rows(t);
  const std::size_t cols = pair_count(s.vars());
  EXPECT_EQ(orc::rank(rows, cols), 3u);
  rows.insert(rows.end(), other.begin(), other.end());
  EXPECT_EQ(orc::rank(rows, cols), 3u);
}

TEST(VarietyModel, GeneralConstructorValidation) {
  EXPECT_THROW(VarietyModel("empty", {}, 0, {}), Error);
  EXPECT_THROW(VarietyModel("big", {"x", "y"}, 2, {}), Error);
  EXPECT_THROW(VarietyModel("oob", {"x", "y"}, 0, {{{0, 2, Rational(1)}}}), Error);
  EXPECT_THROW(VarietyModel("zero", {"x", "y"}, 0, {{{0, 1, Rational(1)}, {1, 0, Rational(-1)}}}), Error);
  try {
    VarietyModel("dep", {"x", "y", "z"}, 1,
                 {{{0, 0, Rational(1)}, {1, 1, Rational(-1)}}, {{0, 0, Rational(2)}, {1, 1, Rational(-2)}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InconsistentModel);
  }
}

TEST(VarietyModel, GeneralConstructorReducesPivotMonomials) {
  // Conic xz = y^2 in P^2.
  const VarietyModel c("conic", {"x", "y", "z"}, 1, {{{0, 2, Rational(1)}, {1, 1, Rational(-1)}}});
  expect_well_formed(c);
  EXPECT_EQ(c.dim_r2(), 5u);
  EXPECT_EQ(epsilon(c), 0u);
  // xz is the pivot and reduces to y^2.
  const auto& xz = c.sigma(0, 2);
  ASSERT_EQ(xz.size(), 1u);
  EXPECT_EQ(c.r2_pairs()[xz[0].first], (std::pair<std::size_t, std::size_t>{1, 1}));
  EXPECT_EQ(xz[0].second, Rational(1));
}

TEST(Sampler, PointsLieOnTheVariety) {
  CounterRng rng(5);
  const std::vector<VarietyModel> models = {toric_model(simplex(2, 2)), toric_model(cayley_segments({1, 2})),
                                            scroll_model({2, 2}),       scroll_model({1, 2}),
                                            veronese_cone_model(6),     quadric_model(3)};
  for (const auto& x : models) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto p = sample_real_point(x, rng);
      ASSERT_TRUE(p.has_value()) << x.name();
      ASSERT_EQ(p->size(), x.vars());
      double scale = 0.0;
      for (double v : *p) scale = std::max(scale, std::abs(v));
      for (const auto& r : x.i2_basis()) {
        double value = 0.0;
        for (const auto& t : r) value += t.coefficient.get_d() * (*p)[t.i] * (*p)[t.j];
        EXPECT_NEAR(value, 0.0, 1e-9 * scale * scale) << x.name();
      }
    }
  }
  const VarietyModel plain("plain", {"x", "y"}, 1, {});
  EXPECT_FALSE(sample_real_point(plain, rng).has_value());
}

TEST(QuadraticForms, ProductFormEvaluatesExactly) {
  const auto q = cayley_segments({1, 2});
  const auto x = toric_model(q);
  CounterRng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> a, b;
    for (std::size_t i = 0; i < x.vars(); ++i) {
      a.emplace_back(rng.integer(-4, 4));
      b.emplace_back(rng.integer(-4, 4));
    }
    const auto f = product_form(x, a, b);
    // Rational torus point z; coordinates z^u.
    std::vector<Rational> z;
    for (std::size_t i = 0; i < q.ambient_rank(); ++i) {
      Rational r(rng.integer(1, 5), rng.integer(1, 5));
      r.canonicalize();
      z.push_back(r);
    }
    std::vector<Rational> pt;
    for (const auto& u : x.r1_exponents()) {
      Rational mono = 1;
      for (std::size_t i = 0; i < z.size(); ++i)
        for (long e = 0; e < u[i].get_si(); ++e) mono *= z[i];
      pt.push_back(mono);
    }
    Rational la = 0, lb = 0;
    for (std::size_t i = 0; i < x.vars(); ++i) {
      la += a[i] * pt[i];
      lb += b[i] * pt[i];
    }
    EXPECT_EQ(evaluate(x, f, pt), la * lb);
  }
  EXPECT_THROW(product_form(x, {Rational(1)}, {Rational(1)}), Error);
}

TEST(QuadraticForms, SigmaOfGramMatchesEvaluation) {
  const auto x = scroll_model({1, 2});
  CounterRng rng(13);
  const std::size_t v = x.vars();
  std::vector<double> g(v * v);
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = i; j < v; ++j) g[i * v + j] = g[j * v + i] = rng.normal();
  QuadraticForm f;
  for (double c : sigma_of(x, g)) f.coefficients.emplace_back(c);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = *sample_real_point(x, rng);
    double direct = 0.0;
    for (std::size_t i = 0; i < v; ++i)
      for (std::size_t j = 0; j < v; ++j) direct += g[i * v + j] * p[i] * p[j];
    EXPECT_NEAR(evaluate(x, f, p), direct, 1e-9 * (1.0 + std::abs(direct)));
  }
  EXPECT_THROW(sigma_of(x, {1.0}), Error);
}

TEST(Reembedding, Examples) {
  EXPECT_EQ(epsilon(toric_model(veronese_reembedding(segment(0, 2), 2))), 0u);
  EXPECT_EQ(lattice_points(veronese_reembedding(segment(0, 2), 2)).size(), 5u);
  EXPECT_EQ(epsilon(toric_model(veronese_reembedding(simplex(2), 2))), 0u);
  EXPECT_EQ(epsilon(toric_model(veronese_reembedding(simplex(2), 3))), 1u);
  EXPECT_THROW(veronese_reembedding(simplex(2), 0), Error);
}
