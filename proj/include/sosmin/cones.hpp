#pragma once

// The Gram map sigma: Sym^2(R1) -> R2, SOS membership with Gram certificates,
// dual functionals with their moment matrices, and the separating functionals
// built from point evaluations.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sosmin/linalg.hpp"
#include "sosmin/sym_matrix.hpp"
#include "sosmin/variety.hpp"

namespace sosmin {

class GramSlice {
 public:
  [[nodiscard]] const VarietyModel& model() const noexcept { return model_; }
  /// Exact dim_r2 x C(n+2,2) matrix; column pair_index(i,j) is the image of x_i x_j.
  [[nodiscard]] RationalMatrix sigma_matrix() const;
  [[nodiscard]] std::size_t kernel_dimension() const noexcept { return pair_count(model_.vars()) - model_.dim_r2(); }

 private:
  explicit GramSlice(VarietyModel model) : model_(std::move(model)) {}
  friend GramSlice build_gram_slice(const VarietyModel& model);

  VarietyModel model_;
};

/// Throws InconsistentModel unless sigma is onto R2 with kernel spanned by I2.
GramSlice build_gram_slice(const VarietyModel& model);

/// Linear functional on R2 in the model's canonical basis. Exact functionals
/// keep their rational values; `values` always holds the double image.
struct DualFunctional {
  std::vector<double> values;
  std::optional<std::vector<Rational>> exact_values;
  SymMatrix moment;  // entry (i,j) = value on x_i x_j
  std::optional<RationalMatrix> exact_moment;

  [[nodiscard]] bool exact() const noexcept { return exact_values.has_value(); }
};

DualFunctional make_functional(const VarietyModel& model, std::vector<Rational> values);
DualFunctional make_functional(const VarietyModel& model, std::vector<double> values);

/// Exact moment matrix of an exact functional, (n+1) x (n+1).
RationalMatrix exact_moment_matrix(const VarietyModel& model, const std::vector<Rational>& values);

/// Value of the functional on a form; requires an exact functional.
Rational apply_exact(const DualFunctional& ell, const QuadraticForm& f);
double apply(const DualFunctional& ell, const QuadraticForm& f);

/// (p*)^2 for a point p of X given in R1 coordinates.
DualFunctional point_square(const VarietyModel& model, const std::vector<Rational>& p);
DualFunctional point_square(const VarietyModel& model, const std::vector<double>& p);

enum class SosStatus { Certificate, Infeasible, Undetermined };
std::string to_string(SosStatus s);

struct SosBudget {
  std::size_t max_iterations = 100000;
  double feas_tol = 1e-7;
  double psd_tol = 1e-8;
  double sep_tol = 1e-7;
  std::size_t check_every = 10;
};

struct SosOutcome {
  SosStatus status = SosStatus::Undetermined;
  std::optional<SymMatrix> gram;
  std::optional<DualFunctional> dual;
  SosBudget budget;
  std::size_t iterations = 0;
  double residual = 0.0;        // ||sigma(gram) - f|| of the last PSD iterate
  double min_eigenvalue = 0.0;  // of the gram (Certificate) or normalized moment matrix
  double dual_value = 0.0;      // normalized ell(f / ||f||) of the last dual estimate
};

/// Alternating projections between {G : sigma(G) = f} and the PSD cone.
SosOutcome sos_check(const QuadraticForm& f, const GramSlice& slice, const SosBudget& budget = {});

bool moment_psd(const DualFunctional& ell, double tol = 1e-8);

/// Functional from real points p_1..p_k on X whose evaluations satisfy a
/// single linear relation with nonzero coefficients.
struct SeparatingFunctional {
  DualFunctional functional;
  std::vector<std::vector<Rational>> points;  // representatives after scaling to max-norm 1
  std::vector<Rational> lambdas;              // 0 = sum lambda_j p_j* + (last point)*
  std::vector<Rational> kappas;               // all weights; the last is the derived one
  std::vector<Rational> interpolant;          // g in R1 with ell(g^2) = 0
};

SeparatingFunctional separating_functional_real(const VarietyModel& model,
                                                const std::vector<std::vector<Rational>>& points,
                                                const std::vector<Rational>& kappas);

/// Same with the last point replaced by a conjugate pair a +- b i. The pair is
/// rescaled by a complex unit so that its real part enters the relation with
/// coefficient 1; `points` ends with the rescaled real and imaginary parts.
/// `ratio` is the cross-term weight over the pair weight.
SeparatingFunctional separating_functional_complex(const VarietyModel& model,
                                                   const std::vector<std::vector<Rational>>& real_points,
                                                   const std::vector<Rational>& a, const std::vector<Rational>& b,
                                                   const std::vector<Rational>& kappas,
                                                   const Rational& ratio = Rational(0));

/// Threshold for declaring moment eigenvalues zero, relative to the largest.
inline constexpr double kKernelThreshold = 1e-7;

std::size_t kernel_dimension(const DualFunctional& ell, double tol = kKernelThreshold);

/// True iff the moment matrices vanishing on the kernel of ell's form a line.
bool extremality_check(const DualFunctional& ell, const GramSlice& slice, double tol = kKernelThreshold);

}  // namespace sosmin
