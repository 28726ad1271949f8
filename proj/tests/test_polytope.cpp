#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "oracles.hpp"
#include "sosmin/errors.hpp"
#include "sosmin/polytope.hpp"

using namespace sosmin;
namespace orc = testing_oracles;

namespace {

HStar hs(std::initializer_list<long> c) {
  HStar h;
  for (long x : c) h.coefficients.emplace_back(x);
  return h;
}

LatticePolytope triangle2() { return simplex(2, 2); }

}  // namespace

TEST(LatticePolytope, DropsRedundantPointsAndSortsVertices) {
  const LatticePolytope q(2, {make_point({1, 1}), make_point({0, 0}), make_point({2, 0}), make_point({0, 2}),
                              make_point({1, 0}), make_point({0, 0})});
  EXPECT_EQ(q.vertices(), (std::vector<LatticePoint>{make_point({0, 0}), make_point({0, 2}), make_point({2, 0})}));
  EXPECT_EQ(q.dimension(), 2u);
  EXPECT_EQ(q.facets().size(), 3u);
}

TEST(LatticePolytope, InputValidation) {
  EXPECT_THROW(LatticePolytope(2, {}), Error);
  try {
    LatticePolytope(2, {make_point({0, 0}), make_point({1})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(LatticePolytope, LowerDimensionalChart) {
  // Lattice segment of length 2 along (1,1,1) with an offset.
  const LatticePolytope q(3, {make_point({1, 0, 0}), make_point({3, 2, 2})});
  EXPECT_EQ(q.dimension(), 1u);
  EXPECT_FALSE(q.full_dimensional());
  EXPECT_EQ(lattice_points(q), (std::vector<LatticePoint>{make_point({1, 0, 0}), make_point({2, 1, 1}),
                                                         make_point({3, 2, 2})}));
  EXPECT_EQ(h_star(q), hs({1, 1}));
  EXPECT_EQ(count_lattice_points(q, 3), 7);
  EXPECT_EQ(normalized_volume(q), 2);
  for (const auto& p : lattice_points(q, 2)) EXPECT_EQ(q.to_ambient(q.to_local(p, 2), 2), p);
}

TEST(LatticePoints, Examples) {
  EXPECT_EQ(lattice_points(simplex(2)),
            (std::vector<LatticePoint>{make_point({0, 0}), make_point({0, 1}), make_point({1, 0})}));
  EXPECT_EQ(lattice_points(triangle2()).size(), 6u);
  const auto seg = lattice_points(segment(0, 3), 2);
  ASSERT_EQ(seg.size(), 7u);
  for (long i = 0; i <= 6; ++i) EXPECT_EQ(seg[static_cast<std::size_t>(i)], make_point({i}));
  EXPECT_EQ(count_lattice_points(triangle2(), 0), 1);
}

TEST(LatticePoints, AgreeWithBarycentricOracle) {
  for (const auto& q : orc::corpus(101, 25))
    for (long k = 0; k <= 2; ++k) EXPECT_EQ(count_lattice_points(q, k), oracle::count_lattice_points(q, k));
}

TEST(HStar, Examples) {
  for (std::size_t m = 1; m <= 5; ++m) {
    HStar expect;
    expect.coefficients.assign(m + 1, 0);
    expect.coefficients[0] = 1;
    EXPECT_EQ(h_star(simplex(m)), expect);
  }
  EXPECT_EQ(h_star(triangle2()), hs({1, 3, 0}));
  EXPECT_EQ(h_star(simplex(2, 3)), hs({1, 7, 1}));
}

TEST(HStar, HigashitaniSimplex) {
  for (long k = 1; k <= 3; ++k) EXPECT_EQ(h_star(higashitani_simplex(5, k)), hs({1, 0, 0, k, 0, 0}));
}

TEST(HStar, MatchesOracleAndVolume) {
  for (const auto& q : orc::corpus(202, 30)) {
    const HStar h = h_star(q);
    EXPECT_EQ(h, oracle::h_star(q));
    EXPECT_EQ(h.at(0), 1);
    for (const auto& c : h.coefficients) EXPECT_GE(c, 0);
    const Integer vol = orc::normalized_volume(q);
    EXPECT_EQ(h.sum(), vol);
    EXPECT_EQ(normalized_volume(q), vol);
  }
}

TEST(HStar, EhrhartReciprocity) {
  for (const auto& q : orc::corpus(303, 30)) {
    const std::size_t m = q.dimension();
    std::vector<Integer> counts;
    for (std::size_t k = 0; k <= m; ++k) counts.push_back(count_lattice_points(q, static_cast<long>(k)));
    for (long k = 1; k <= 3; ++k) {
      orc::Q value = orc::interpolate(counts, orc::Q(-k));
      if (m % 2 == 1) value = -value;
      EXPECT_EQ(value, orc::Q(count_interior_points(q, k))) << "k=" << k;
    }
  }
}

TEST(HStar, FacetMonotonicity) {
  for (const auto& q : orc::corpus(404, 25)) {
    if (q.dimension() < 2) continue;
    const Integer h2 = h_star(q).at(2);
    for (const auto& set : q.facet_vertex_sets()) {
      std::vector<LatticePoint> face;
      for (std::size_t i : set) face.push_back(q.vertices()[i]);
      EXPECT_LE(h_star(LatticePolytope(q.ambient_rank(), face)).at(2), h2);
    }
  }
}

TEST(PolytopeDegree, Examples) {
  for (std::size_t m = 1; m <= 4; ++m) EXPECT_EQ(polytope_degree(simplex(m)), 0u);
  EXPECT_EQ(polytope_degree(triangle2()), 1u);
  EXPECT_EQ(polytope_degree(segment(0, 3)), 1u);
  EXPECT_EQ(polytope_degree(simplex(2, 3)), 2u);
}

TEST(Normality, Examples) {
  EXPECT_TRUE(is_k_normal(simplex(3), 2).normal);
  const auto reeve = is_k_normal(reeve_simplex(5), 2);
  ASSERT_FALSE(reeve.normal);
  ASSERT_TRUE(reeve.counterexample);
  const auto& u = *reeve.counterexample;
  EXPECT_TRUE(oracle::contains(reeve_simplex(5), u, 2));
  const auto pts = lattice_points(reeve_simplex(5));
  for (const auto& a : pts)
    for (const auto& b : pts) {
      LatticePoint s(3);
      for (std::size_t i = 0; i < 3; ++i) s[i] = a[i] + b[i];
      EXPECT_NE(s, u);
    }
}

TEST(Normality, LowDimensionIsNormal) {
  for (const auto& q : orc::corpus(505, 30)) {
    if (q.dimension() > 2) continue;
    for (long k = 2; k <= 3; ++k) EXPECT_TRUE(is_k_normal(q, k).normal);
  }
}

TEST(Normality, AgreesWithSumEnumeration) {
  for (const auto& q : orc::corpus(606, 30, 3))
    for (long k = 2; k <= 3; ++k) EXPECT_EQ(is_k_normal(q, k).normal, oracle::is_k_normal(q, k));
  for (long qq = 1; qq <= 6; ++qq) EXPECT_EQ(is_k_normal(reeve_simplex(qq), 2).normal, qq == 1);
}

TEST(DegreeOne, EquivalentConditionsAgree) {
  for (const auto& q : orc::corpus(707, 80)) {
    const std::size_t m = q.dimension();
    const HStar h = h_star(q);
    bool normal = true;
    for (long k = 2; k <= std::max<long>(2, static_cast<long>(m) - 1); ++k) normal &= is_k_normal(q, k).normal;
    const bool a = normal && h.at(2) == 0;
    const bool b = polytope_degree(q) <= 1;
    bool c = true;
    for (std::size_t j = 2; j <= m; ++j) c &= h.at(j) == 0;
    EXPECT_EQ(a, b);
    EXPECT_EQ(b, c);
  }
}

TEST(AmGm, NormalPolytopesHaveNoWitness) {
  EXPECT_FALSE(amgm_witness(triangle2()));
  EXPECT_FALSE(amgm_witness(segment(0, 5)));
}

TEST(AmGm, ReeveWitnessIsNonnegativeAndObstructed) {
  const LatticePolytope q = reeve_simplex(5);
  const auto w = amgm_witness(q);
  ASSERT_TRUE(w);
  const auto& f = w->polynomial;
  EXPECT_EQ(f.terms().size(), 5u);
  int negatives = 0;
  for (const auto& [e, c] : f.terms()) {
    negatives += sgn(c) < 0;
    EXPECT_TRUE(oracle::contains(q, e, 2));
  }
  EXPECT_EQ(negatives, 1);
  EXPECT_EQ(f.coefficient(w->u), -std::accumulate(w->weights.begin(), w->weights.end(), Integer(0)));

  CounterRng rng(9);
  for (int i = 0; i < 10000; ++i) {
    std::vector<double> z(3);
    for (auto& x : z) x = std::exp(rng.uniform(-2, 2)) * (rng.uniform() < 0.5 ? -1 : 1);
    double scale = 0;
    for (const auto& [e, c] : f.terms()) {
      double mono = std::abs(c.get_d());
      for (std::size_t j = 0; j < 3; ++j) mono *= std::pow(std::abs(z[j]), e[j].get_d());
      scale = std::max(scale, mono);
    }
    EXPECT_GE(f.evaluate(z), -1e-12 * scale);
  }

  const auto obstruction = find_diagonal_obstruction(f, q);
  ASSERT_TRUE(obstruction);
  EXPECT_EQ(obstruction->exponent, w->u);
  EXPECT_EQ(obstruction->pair_count, 0u);
}

TEST(AmGm, RandomNonNormalPolytopes) {
  CounterRng rng(77);
  int found = 0;
  for (int trial = 0; trial < 200 && found < 5; ++trial) {
    const auto q = orc::random_polytope(rng, 3, 4);
    const auto w = amgm_witness(q);
    if (!w) continue;
    ++found;
    // sum r_i (2 v_i) = (sum r_i) u exactly.
    LatticePoint lhs(3, 0);
    Integer total = 0;
    for (std::size_t i = 0; i < w->support.size(); ++i) {
      for (std::size_t j = 0; j < 3; ++j) lhs[j] += 2 * w->weights[i] * w->support[i][j];
      total += w->weights[i];
    }
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(lhs[j], total * w->u[j]);
    EXPECT_TRUE(find_diagonal_obstruction(w->polynomial, q));
  }
  EXPECT_GT(found, 0);
}

TEST(DiagonalObstruction, MotzkinTypeForm) {
  const LatticePolytope q(2, {make_point({0, 0}), make_point({2, 1}), make_point({1, 2})});
  SparsePolynomial f(2);
  f.add_term(make_point({0, 0}), 1);
  f.add_term(make_point({4, 2}), 1);
  f.add_term(make_point({2, 4}), 1);
  f.add_term(make_point({2, 2}), -3);
  const auto obs = find_diagonal_obstruction(f, q);
  ASSERT_TRUE(obs);
  EXPECT_EQ(obs->exponent, make_point({2, 2}));
  EXPECT_EQ(obs->pair_count, 1u);
}

TEST(SparsePolynomial, CancellationErasesTerms) {
  SparsePolynomial f(1);
  f.add_term(make_point({2}), 3);
  f.add_term(make_point({2}), -3);
  EXPECT_TRUE(f.terms().empty());
  EXPECT_THROW(f.add_term(make_point({1, 1}), 1), Error);
}

TEST(SublatticeIndex, Examples) {
  for (std::size_t m = 1; m <= 4; ++m) EXPECT_EQ(sublattice_index(simplex(m)), 1);
  EXPECT_EQ(sublattice_index(triangle2()), 1);
  for (long k = 1; k <= 3; ++k) EXPECT_EQ(sublattice_index(higashitani_simplex(5, k)), k + 1);
  // Only the vertices are lattice points: index equals the normalized volume.
  EXPECT_EQ(sublattice_index(reeve_simplex(3)), 3);
}

TEST(Density, Examples) {
  EXPECT_EQ(real_density(triangle2()), Density::Dense);
  EXPECT_EQ(real_density(higashitani_simplex(5, 2)), Density::Dense);
  EXPECT_EQ(real_density(higashitani_simplex(5, 1)), Density::NotDense);
}

namespace {

void expect_map_onto(const LatticePolytope& model, const LatticePolytope& q, const ModelMap& map) {
  std::set<LatticePoint> image;
  for (const auto& x : lattice_points(model)) image.insert(apply_map(map, x));
  const auto pts = lattice_points(q);
  EXPECT_EQ(image, std::set<LatticePoint>(pts.begin(), pts.end()));
}

LatticePolytope transform(const LatticePolytope& q, const std::vector<std::vector<long>>& a, const std::vector<long>& t) {
  std::vector<LatticePoint> out;
  for (const auto& v : q.vertices()) {
    LatticePoint w(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      w[i] = t[i];
      for (std::size_t j = 0; j < v.size(); ++j) w[i] += a[i][j] * v[j];
    }
    out.push_back(w);
  }
  return {a.size(), out};
}

}  // namespace

TEST(Classify, DoubledTriangle) {
  const auto r = classify(triangle2());
  EXPECT_TRUE(r.h2_zero);
  EXPECT_TRUE(r.degree_one);
  EXPECT_EQ(r.family, PolytopeFamily::PyramidOverTwiceSimplex);
  EXPECT_EQ(r.pos_equals_sos, ConeEquality::Equal);
  ASSERT_TRUE(r.model_map);
  EXPECT_EQ(r.model_map->pyramid_apexes, 0u);
  expect_map_onto(pyramid_over_doubled_triangle(2), triangle2(), *r.model_map);
}

TEST(Classify, CayleyOfSegments) {
  const auto q = cayley_segments({1, 2});
  const auto r = classify(q);
  EXPECT_TRUE(r.h2_zero);
  EXPECT_EQ(r.family, PolytopeFamily::CayleySegments);
  EXPECT_EQ(r.pos_equals_sos, ConeEquality::Equal);
  ASSERT_TRUE(r.model_map);
  expect_map_onto(cayley_segments(r.model_map->segment_lengths), q, *r.model_map);
}

TEST(Classify, TripledTriangleIsNotMinimal) {
  const auto r = classify(simplex(2, 3));
  EXPECT_FALSE(r.h2_zero);
  EXPECT_EQ(r.h_star, hs({1, 7, 1}));
  EXPECT_EQ(r.family, PolytopeFamily::NotMinimal);
  EXPECT_EQ(r.pos_equals_sos, ConeEquality::NotEqual);
}

TEST(Classify, RecognizesTransformedModels) {
  const std::vector<std::vector<long>> u3 = {{1, 2, 3}, {0, 1, 4}, {0, 0, 1}};
  const std::vector<std::vector<long>> u4 = {{0, 0, 1, 1}, {0, 1, 1, 0}, {1, 1, 0, 2}, {0, 0, 0, 1}};

  const auto pyr = transform(pyramid_over_doubled_triangle(3), u3, {2, -1, 5});
  const auto rp = classify(pyr);
  EXPECT_EQ(rp.family, PolytopeFamily::PyramidOverTwiceSimplex);
  ASSERT_TRUE(rp.model_map);
  EXPECT_EQ(rp.model_map->pyramid_apexes, 1u);
  expect_map_onto(pyramid_over_doubled_triangle(3), pyr, *rp.model_map);

  const auto cay = transform(cayley_segments({2, 0, 1, 3}), u4, {0, 1, 0, -2});
  const auto rc = classify(cay);
  EXPECT_EQ(rc.family, PolytopeFamily::CayleySegments);
  ASSERT_TRUE(rc.model_map);
  expect_map_onto(cayley_segments(rc.model_map->segment_lengths), cay, *rc.model_map);
  EXPECT_TRUE(rc.degree_one);
}

TEST(Classify, ReportInvariantsOnCorpus) {
  for (const auto& q : orc::corpus(808, 40)) {
    const auto r = classify(q);
    if (r.degree_one) EXPECT_TRUE(r.h2_zero);
    EXPECT_EQ(r.pos_equals_sos == ConeEquality::Equal, r.h2_zero && r.density == Density::Dense);
    if (r.h2_zero) {
      EXPECT_TRUE(r.two_normal);
      EXPECT_NE(r.family, PolytopeFamily::NotMinimal);
    }
    if (r.model_map) {
      const auto model = r.family == PolytopeFamily::CayleySegments
                             ? cayley_segments(r.model_map->segment_lengths)
                             : pyramid_over_doubled_triangle(q.dimension());
      expect_map_onto(model, q, *r.model_map);
    }
  }
}

TEST(Classify, HigashitaniNeedsDensity) {
  const auto odd = classify(higashitani_simplex(5, 1));
  EXPECT_TRUE(odd.h2_zero);
  EXPECT_EQ(odd.density, Density::NotDense);
  EXPECT_EQ(odd.pos_equals_sos, ConeEquality::NotEqual);
  EXPECT_EQ(odd.family, PolytopeFamily::ImageOfModel);
  const auto even = classify(higashitani_simplex(5, 2));
  EXPECT_EQ(even.density, Density::Dense);
  EXPECT_EQ(even.pos_equals_sos, ConeEquality::Equal);
  EXPECT_EQ(even.density_criterion, "index parity");
}
