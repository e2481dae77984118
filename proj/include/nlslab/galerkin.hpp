#pragma once

// N-mode Galerkin truncations of the theta-family under the cosine ansatz
// a_{-n} = a_n on a 2pi-periodic domain:
//   e^{-i theta} da_n/dt = -n^2 a_n + sum_{n1+n2=n, |n1|,|n2|<=N} a_{|n1|} a_{|n2|}

#include <array>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "nlslab/fft.hpp"

namespace nlslab {

/// da_out/dt gets coef * a_i * a_j (i <= j) from the quadratic term.
struct QuadraticTerm {
  int out;
  int i;
  int j;
  int coef;
};

struct GalerkinSystem {
  int n_modes = 1;
  double theta = 0.0;
  std::vector<QuadraticTerm> couplings;

  static GalerkinSystem make(int n_modes, double theta);
  int dimension() const { return n_modes + 1; }
};

/// e^{i theta} (-n^2 a_n + quadratic terms). Throws on dimension mismatch.
std::vector<cplx> galerkin_rhs(std::span<const cplx> a, const GalerkinSystem& sys);

/// u(x) = a_0 + 2 sum a_n cos(n x) sampled on `points` equispaced points.
double galerkin_sup_norm(std::span<const cplx> a, int points = 512);
/// E_0 = |a_0|^2/|a|^2, E_n = 2|a_n|^2/|a|^2 with |a|^2 = |a_0|^2 + 2 sum |a_n|^2.
std::vector<double> galerkin_energy(std::span<const cplx> a, int n_max);

enum class GalerkinOutcome { ReachedTEnd, BlowupDetected, NumericalFailure };
std::string_view to_string(GalerkinOutcome o);

struct GalerkinOptions {
  double blowup_threshold = 1e8;
  int record_stride = 100;
  int energy_modes = 8;
};

struct GalerkinTrajectory {
  std::vector<double> times;  // every record_stride steps, t=0 and the final state included
  std::vector<std::vector<cplx>> states;
  std::vector<double> sup_norms;
  std::vector<std::vector<double>> energy_fractions;
  GalerkinOutcome outcome = GalerkinOutcome::ReachedTEnd;
  double end_time = 0.0;
  // running maximum of the sup norm over every step
  double peak_norm = 0.0;
  double peak_time = 0.0;
};

/// Classical RK4 with fixed step; the step is shrunk so the run ends on t_end.
GalerkinTrajectory integrate_galerkin(std::span<const cplx> a0, const GalerkinSystem& sys, double dt,
                                      double t_end, const GalerkinOptions& opt = {});

/// Generic fixed-step RK4 for complex systems; returns the state at t_end.
using ComplexRhs = std::function<std::vector<cplx>(std::span<const cplx>)>;
std::vector<cplx> rk4_integrate(const ComplexRhs& rhs, std::vector<cplx> y, double dt, double t_end);

// Conjugate (internal) dynamics of the N=3 invariant manifold:
//   mu^{-1} s1' = -s1
//   mu^{-1} s2' = -4 s2 + s1^4/3
//   mu^{-1} s3' = -9 s3 - s1 s2^2 + (19/24) s1^5 s2 + (11/81) s1^9
struct SigmaState {
  std::array<cplx, 3> gamma{};
  cplx mu{1.0, 0.0};  // e^{i theta}, |mu| = 1
};

std::array<cplx, 3> conjugate_rhs(const std::array<cplx, 3>& sigma, cplx mu);

/// Explicit flow of the conjugate system at time t from sigma(0) = gamma.
std::array<cplx, 3> closed_form_sigma(const SigmaState& s, double t);

struct SecularCrossing {
  double t23;  // |sigma3| catches |sigma2|: eps^{-5/2}
  double t13;  // |sigma3| catches |sigma1|: eps^{-8/3}
  std::function<double(double)> sigma2_envelope;  // t eps^4 / 3
  std::function<double(double)> sigma3_envelope;  // t^3 eps^9 / 27
};

/// Leading-order crossing times for gamma = (eps, 0, 0), mu = +-i.
/// Requires 0 < eps < 1.
SecularCrossing secular_crossing_times(double eps);

}  // namespace nlslab
