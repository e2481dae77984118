#pragma once

// Fixed-step ETDRK4 integration of u_tau = e^{i theta}(u_xx + u^2) on the
// torus, with blowup and trapping detection.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlslab/field.hpp"

namespace nlslab {

struct EvolveConfig {
  double theta = 0.0;       // radians, in [-pi/2, pi/2]
  double dt = 1e-4;
  double t_end = 1.0;
  int n_modes = 256;
  double period = 1.0;
  double blowup_threshold = 1e8;  // on the sup norm
  int record_stride = 100;        // steps between snapshots / energy rows / trapping checks
  int energy_modes = 8;           // E_0..E_energy_modes recorded
  bool trapping_check = false;
  bool stop_on_trap = true;       // end the run at forward-trapping entry
  bool keep_snapshots = true;
  bool nonlinear = true;          // false: pure linear flow (testing)

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  /// Steps actually taken and their (uniform) size; the last step lands on t_end.
  long n_steps() const;
  double effective_dt() const;
};

/// -e^{i theta} k_n^2 for n = -N..N (index n+N).
std::vector<cplx> linear_symbol(const EvolveConfig& cfg);

/// phi-type coefficient functions of ETDRK4 evaluated at z = L dt:
///   q  = (e^{z/2} - 1)/z
///   f1 = (-4 - z + e^z (4 - 3z + z^2))/z^3
///   f2 = (2 + z + e^z (z - 2))/z^3
///   f3 = (-4 - 3z - z^2 + e^z (4 - z))/z^3
/// Small |z| uses a 16-node contour mean to avoid cancellation.
struct EtdCoefficients {
  cplx q, f1, f2, f3;
};
EtdCoefficients etd_coefficients(cplx z);

class Etdrk4Stepper {
 public:
  /// Precomputes the diagonal exponentials for cfg.n_modes at step `dt`
  /// (defaults to cfg.effective_dt()).
  explicit Etdrk4Stepper(const EvolveConfig& cfg, std::optional<double> dt = std::nullopt);

  void step(FourierField& u) const;
  double dt() const { return dt_; }
  int n_modes() const { return n_modes_; }

  /// e^{i theta} * (dealiased u^2), or zero when the nonlinearity is disabled.
  FourierField nonlinearity(const FourierField& u) const;

 private:
  int n_modes_;
  double period_;
  double dt_;
  cplx rotation_;
  bool nonlinear_;
  std::vector<cplx> e_, e2_, q_, f1_, f2_, f3_;
};

/// One ETDRK4 step of size cfg.dt. Throws std::runtime_error if the
/// result is not finite.
FourierField etdrk4_step(const FourierField& f, const EvolveConfig& cfg);

enum class OutcomeKind { ReachedTEnd, BlowupDetected, TrappedForward, NumericalFailure };

struct Outcome {
  OutcomeKind kind = OutcomeKind::ReachedTEnd;
  double time = 0.0;
};

std::string_view to_string(OutcomeKind k);

struct TrajectoryRecord {
  // every step, t = 0 included
  std::vector<double> step_times;
  std::vector<double> sup_norms;
  // every record_stride steps (and the final state)
  std::vector<double> times;
  std::vector<FourierField> snapshots;               // empty unless keep_snapshots
  std::vector<std::vector<double>> energy_fractions;  // E_0..E_m per record
  std::vector<bool> forward_trapped;                  // per record, when trapping_check
  Outcome outcome;
  FourierField final_state;
  EvolveConfig config;
};

/// Whether u lies in the forward-trapping cone of the theta-flow. Defined
/// for theta = -pi/2 (the NLS orientation of the cone criterion) and
/// theta = +pi/2 (its complex conjugate); false for other theta.
bool forward_trapped(const FourierField& u, double theta);

TrajectoryRecord evolve(const FourierField& u0, const EvolveConfig& cfg);

/// First record time flagged as forward-trapped, if any.
std::optional<double> trapping_entry_time(const TrajectoryRecord& rec);

}  // namespace nlslab
