#pragma once

// Locating the blowup/decay threshold in additive families g + A under the
// heat flow, and NLS sweeps over the same families.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlslab/evolution.hpp"
#include "nlslab/field.hpp"

namespace nlslab {

struct FamilySpec {
  FourierField g;
  double A_lo = -1.0;
  double A_hi = 1.0;
  std::string description;

  /// g with a_0 shifted by A.
  FourierField member(double A) const;
};

enum class Fate { Blowup, Decay, Undetermined };
std::string_view to_string(Fate f);

struct FateReport {
  Fate fate = Fate::Undetermined;
  double time = 0.0;        // when the deciding rule fired (or the certified bound)
  std::string certificate;  // which rule decided
  double final_norm = 0.0;  // sup norm of the last state examined
  double t_max_used = 0.0;
};

struct HeatFateConfig {
  double dt = 1e-4;
  double t_max = 5.0;
  double blowup_threshold = 1e8;
  double decay_threshold = 1e-3;
  int check_stride = 10;   // steps between pointwise checks
  int max_doublings = 4;   // t_max doublings while Undetermined
  double real_tol = 1e-12;
};

/// Heat-flow (theta = 0) fate of real data u0 at u0's own resolution.
/// Throws std::invalid_argument for non-real input.
FateReport classify_heat_fate(const FourierField& u0, const HeatFateConfig& cfg = {});

struct BisectionStep {
  double lo, hi;
  double probe;
  FateReport report;
};

struct BisectionResult {
  double A_star = 0.0;
  double lo = 0.0, hi = 0.0;  // final bracket
  FateReport lo_report, hi_report;
  std::vector<BisectionStep> history;
};

class BisectionError : public std::runtime_error {
 public:
  BisectionError(const std::string& what, std::vector<FateReport> reports)
      : std::runtime_error(what), reports_(std::move(reports)) {}
  const std::vector<FateReport>& reports() const { return reports_; }

 private:
  std::vector<FateReport> reports_;
};

/// Interval bisection on the heat fate of fam.member(A) until the bracket is
/// narrower than tol. Throws BisectionError if the endpoints share a fate or a
/// probe stays Undetermined.
BisectionResult bisect_manifold(const FamilySpec& fam, double tol, const HeatFateConfig& cfg = {});

struct SweepRow {
  double A = 0.0;
  OutcomeKind outcome = OutcomeKind::ReachedTEnd;
  double outcome_time = 0.0;
  std::optional<double> trap_time;
  double max_norm = 0.0;
  std::vector<double> times;  // every step
  std::vector<double> sup_norms;
  std::string error;  // non-empty if the run threw
};

/// One NLS run per A (trapping checks on, runs continue after trapping);
/// rows sorted by A. Runs are spread over `threads` workers (0 = hardware).
std::vector<SweepRow> sweep_nls(const FamilySpec& fam, std::vector<double> A_values, const EvolveConfig& cfg,
                                unsigned threads = 0);

}  // namespace nlslab
