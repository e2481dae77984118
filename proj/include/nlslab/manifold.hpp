#pragma once

// Parameterization method for the invariant manifold tangent to the stable
// eigenspace {0} x C^N of a Galerkin truncation. The rotation e^{i theta}
// is factored out, so the model is theta independent: if sigma' = f(sigma)
// is the internal dynamics at theta = 0, then sigma' = e^{i theta} f(sigma)
// is the internal dynamics at any theta, with the same chart W.

#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nlslab/galerkin.hpp"
#include "nlslab/rational.hpp"

namespace nlslab {

using MultiIndex = std::vector<int>;

int total_order(const MultiIndex& k);

/// Graded order: total degree first, then reverse lexicographic on the
/// entries, so (1,0,0) < (0,1,0) < (0,0,1) < (2,0,0) < (1,1,0) < ...
struct GradedLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// All multi-indices of dimension d with total order in [lo, hi], graded order.
std::vector<MultiIndex> multi_indices(int d, int lo, int hi);

using RationalVector = std::vector<RationalComplex>;

/// Quadratic vector field F(a) = diag(mu) a + B(a, a) with exact integer data.
struct QuadraticField {
  std::vector<mpq_class> linear;          // diagonal of DF(0)
  std::vector<QuadraticTerm> couplings;   // from the Galerkin table, theta dropped

  static QuadraticField from_galerkin(const GalerkinSystem& sys);
  int dimension() const { return static_cast<int>(linear.size()); }

  /// Symmetric bilinear form with B(a, a) = quadratic part of F.
  void add_bilinear(RationalVector& out, const RationalVector& a, const RationalVector& b,
                    const RationalComplex& scale) const;
};

struct Resonance {
  MultiIndex k;
  int target;  // range component i with k . lambda = mu_i
  friend bool operator==(const Resonance&, const Resonance&) = default;
};

using ResonanceSet = std::vector<Resonance>;

/// Every (k, i) with 2 <= |k| <= max_order and k . lambda = mu_i.
ResonanceSet detect_resonances(std::span<const mpq_class> lambda, std::span<const mpq_class> mu, int max_order);

/// Tangent eigenvalues (-1, -4, ..., -N^2) against range eigenvalues (0, -1, ..., -N^2).
ResonanceSet detect_resonances(int n_modes, int max_order);

struct TaylorModel {
  int dim_domain = 0;
  int dim_range = 0;
  int order = 0;
  std::vector<mpq_class> eigenvalues;        // tangent lambda_j
  std::vector<mpq_class> range_eigenvalues;  // diagonal of DF(0)
  std::vector<int> tangent_component;        // L e_j = e_{tangent_component[j]}
  std::map<MultiIndex, RationalVector, GradedLess> W;  // length dim_range each
  std::map<MultiIndex, RationalVector, GradedLess> f;  // length dim_domain, nonzero entries only

  /// Nonlinear (|k| >= 2) f monomials as (k, component) pairs.
  ResonanceSet f_support() const;
  /// Drop every coefficient of total order above `k`.
  TaylorModel truncated(int k) const;
};

class CohomologyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Order-by-order solution of F(W(s)) = DW(s) f(s) through order K, with
/// resonant monomials kept in f and the matching W component set to zero.
TaylorModel solve_cohomological(const QuadraticField& field, int order);
TaylorModel solve_cohomological(const GalerkinSystem& sys, int order);

/// Floating-point view of a model for repeated evaluation.
class ModelEvaluator {
 public:
  explicit ModelEvaluator(const TaylorModel& model);

  std::vector<cplx> W(std::span<const cplx> sigma) const;
  std::vector<cplx> f(std::span<const cplx> sigma) const;
  /// dim_range x dim_domain Jacobian, row major.
  std::vector<cplx> DW(std::span<const cplx> sigma) const;
  int dim_domain() const { return d_; }
  int dim_range() const { return n_; }

 private:
  struct Term {
    std::vector<int> k;
    std::vector<cplx> c;
  };
  std::vector<std::vector<cplx>> powers(std::span<const cplx> sigma) const;
  int d_, n_, order_;
  std::vector<Term> w_terms_, f_terms_;
};

/// Radius beyond which evaluation is not trusted.
inline constexpr double kWorkingRadius = 0.8;

/// W(sigma); writes a warning to stderr if max |sigma_j| > kWorkingRadius.
std::vector<cplx> evaluate_W(const TaylorModel& model, std::span<const cplx> sigma);
std::vector<cplx> evaluate_f(const TaylorModel& model, std::span<const cplx> sigma);

struct Constraint {
  int component;  // index into W's output
  cplx value;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct NewtonOptions {
  int max_iterations = 100;
  double tolerance = 1e-12;
  std::optional<std::vector<cplx>> initial_guess;
};

/// Damped Newton for sigma with W(sigma)[c.component] = c.value for each of
/// exactly dim_domain constraints. Throws ConvergenceError on failure.
std::vector<cplx> solve_sigma_for_constraints(const TaylorModel& model, std::span<const Constraint> targets,
                                              const NewtonOptions& opt = {});

struct RadiusEstimate {
  double radius = std::numeric_limits<double>::infinity();
  bool infinite = false;    // no nonlinear coefficients at all
  bool degenerate = false;  // root sequence unusable (zero tail or non-positive limit)
  std::vector<double> per_order;                // max |coeff|^{1/m}, m = 1..K
  std::vector<std::vector<double>> per_axis;    // |W_{m e_j}|^{1/m} per tangent direction
  std::vector<double> axis_radius;              // 1/limit per direction (inf if zero)
};

/// Fit r_m = c0 + c1/m over m in [K/2, K] and return 1/c0. Requires K >= 10
/// unless the model is purely linear.
RadiusEstimate estimate_radius(const TaylorModel& model);

}  // namespace nlslab
