#pragma once

// Nonnegative ternary forms of degree 2d that are not sums of squares, built
// on the Veronese surface nu_d(P^2) from two unions of d lines, with exact
// certificates for the non-SOS side and sampling evidence for nonnegativity.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sosmin/cones.hpp"
#include "sosmin/linalg.hpp"
#include "sosmin/variety.hpp"

namespace sosmin {

/// a x0 + b x1 + c x2.
using LinearForm = std::array<Integer, 3>;
using ProjectivePoint = std::array<Rational, 3>;

/// Two products of d linear forms and their d^2 pairwise intersection points.
struct HyperplaneSections {
  std::size_t d = 0;
  std::vector<LinearForm> first;
  std::vector<LinearForm> second;
  std::vector<Rational> h1;  // coefficients over the degree-d monomial basis
  std::vector<Rational> h2;
  std::vector<ProjectivePoint> points;  // point (i, j) = first[i] meets second[j], at index i*d + j
  std::size_t draws = 0;
};

/// Coordinates in R1 of the image of a point of P^2 under the d-th Veronese map.
std::vector<Rational> veronese_point(const VarietyModel& model, const ProjectivePoint& p);

/// Value of a degree-d form (R1 coordinates) at a point of P^2.
Rational evaluate_form(const VarietyModel& model, const std::vector<Rational>& g, const ProjectivePoint& p);

/// Coefficients of a product of linear forms over the degree-d monomial basis.
std::vector<Rational> product_of_lines(const VarietyModel& model, const std::vector<LinearForm>& lines);

/// Draws until the points are distinct and every e+1 of their images are independent.
HyperplaneSections choose_hyperplanes(std::size_t d, std::uint64_t seed, std::size_t max_draws = 64);

/// A form vanishing exactly at the selected points among all d^2. Throws
/// DegenerateSpan unless the forms vanishing there are spanned by h0, h1, h2.
std::vector<Rational> fit_h0(const VarietyModel& model, const HyperplaneSections& sections,
                             const std::vector<std::size_t>& selected, std::uint64_t seed);

struct FormChoice {
  QuadraticForm f;
  std::size_t solution_dimension = 0;  // forms singular at every selected point
  std::size_t l2_rank = 0;             // rank of the products h_i h_j
  std::size_t quotient_dimension = 0;
};

/// First basis vector of the forms singular at the selected points that lies
/// outside span{h_i h_j}. Throws EmptyComplement when there is none.
FormChoice build_f(const VarietyModel& model, const std::vector<ProjectivePoint>& points,
                   const std::vector<std::size_t>& selected, const std::array<std::vector<Rational>, 3>& h);

struct DeltaChoice {
  Rational delta;
  double estimate = 0.0;  // inf sum h_i^2 / sup |f| away from the selected points
  std::size_t halvings = 0;
  std::size_t samples = 0;
  double min_value = 0.0;  // of delta f + sum h_i^2 over the unit sphere samples
  double scale = 0.0;      // max of sum h_i^2 over the samples
  [[nodiscard]] double margin() const { return scale > 0.0 ? min_value / scale : min_value; }
};

inline constexpr double kNonnegativeMargin = -1e-9;

/// Power-of-two delta for which delta f + sum h_i^2 is nonnegative on the
/// samples, then halved once more for slack. Throws NoDeltaFound below 2^-60.
DeltaChoice delta_search(const VarietyModel& model, const QuadraticForm& f, const std::array<std::vector<Rational>, 3>& h,
                         const std::vector<ProjectivePoint>& selected_points, std::size_t samples, std::uint64_t seed);

/// Minimum over `samples` unit-sphere points of w, relative to max |w| there.
struct SampleSummary {
  std::size_t samples = 0;
  double min_value = 0.0;
  double max_abs = 0.0;
  [[nodiscard]] double relative_min() const { return max_abs > 0.0 ? min_value / max_abs : min_value; }
};
SampleSummary sample_on_sphere(const VarietyModel& model, const QuadraticForm& w, std::size_t samples, std::uint64_t seed);

struct NotSosCertificate {
  std::size_t vanishing_dimension = 0;  // degree-d forms vanishing at the selected points
  std::size_t span_rank = 0;            // rank of h0, h1, h2
  std::size_t l2_rank = 0;
  std::size_t l2_with_f_rank = 0;
};

struct WitnessReport {
  std::size_t d = 0;
  VarietyModel model;
  HyperplaneSections sections;
  std::vector<std::size_t> selected;
  std::array<std::vector<Rational>, 3> h;  // h0, h1, h2
  FormChoice form;
  DeltaChoice delta;
  QuadraticForm witness;  // delta f + h0^2 + h1^2 + h2^2
  NotSosCertificate certificate;
  std::optional<SeparatingFunctional> functional;
  std::optional<SosStatus> sos_status;
  std::size_t attempts = 0;
};

/// Recomputes the exact ranks behind the certificate; false means the report is invalid.
bool certify_not_sos(const WitnessReport& report);

struct WitnessOptions {
  std::size_t samples = 100000;
  std::size_t max_attempts = 16;
  bool attach_functional = true;
  bool run_sos_check = true;
  SosBudget budget;
};

WitnessReport hilbert_witness(std::size_t d, std::uint64_t seed, const WitnessOptions& options = {});

}  // namespace sosmin
