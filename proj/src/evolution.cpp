#include "nlslab/evolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace nlslab {

namespace {

constexpr int kContourNodes = 16;
constexpr double kContourSwitch = 0.5;

const std::array<cplx, kContourNodes>& contour_nodes() {
  static const auto nodes = [] {
    std::array<cplx, kContourNodes> r{};
    for (int j = 0; j < kContourNodes; ++j)
      r[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * std::numbers::pi * (j + 0.5) / kContourNodes);
    return r;
  }();
  return nodes;
}

EtdCoefficients direct(cplx z) {
  const cplx ez = std::exp(z);
  const cplx z3 = z * z * z;
  return {(std::exp(z / 2.0) - 1.0) / z,
          (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3,
          (2.0 + z + ez * (z - 2.0)) / z3,
          (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3};
}

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

}  // namespace

void EvolveConfig::validate() const {
  auto bad = [](const std::string& what) { throw std::invalid_argument("EvolveConfig: " + what); };
  if (!(dt > 0.0)) bad("dt must be > 0");
  if (!(t_end > 0.0)) bad("t_end must be > 0");
  if (n_modes < 1) bad("n_modes must be >= 1");
  if (!(period > 0.0)) bad("period must be > 0");
  if (!(blowup_threshold > 0.0)) bad("blowup_threshold must be > 0");
  if (record_stride < 1) bad("record_stride must be >= 1");
  if (energy_modes < 0) bad("energy_modes must be >= 0");
  if (!(std::abs(theta) <= std::numbers::pi / 2 + 1e-12)) bad("theta must lie in [-pi/2, pi/2]");
}

long EvolveConfig::n_steps() const {
  // Tolerate t_end/dt landing a few ulps above an integer.
  return std::max(1L, static_cast<long>(std::ceil(t_end / dt * (1.0 - 1e-12))));
}

double EvolveConfig::effective_dt() const { return t_end / static_cast<double>(n_steps()); }

std::vector<cplx> linear_symbol(const EvolveConfig& cfg) {
  const cplx rot = std::polar(1.0, cfg.theta);
  std::vector<cplx> L(static_cast<std::size_t>(2 * cfg.n_modes + 1));
  for (int n = -cfg.n_modes; n <= cfg.n_modes; ++n) {
    const double k = 2.0 * std::numbers::pi * n / cfg.period;
    L[static_cast<std::size_t>(n + cfg.n_modes)] = -rot * (k * k);
  }
  return L;
}

EtdCoefficients etd_coefficients(cplx z) {
  if (std::abs(z) > kContourSwitch) return direct(z);
  EtdCoefficients sum{0.0, 0.0, 0.0, 0.0};
  for (const cplx r : contour_nodes()) {
    const EtdCoefficients c = direct(z + r);
    sum.q += c.q;
    sum.f1 += c.f1;
    sum.f2 += c.f2;
    sum.f3 += c.f3;
  }
  const double w = 1.0 / kContourNodes;
  return {sum.q * w, sum.f1 * w, sum.f2 * w, sum.f3 * w};
}

Etdrk4Stepper::Etdrk4Stepper(const EvolveConfig& cfg, std::optional<double> dt)
    : n_modes_(cfg.n_modes),
      period_(cfg.period),
      dt_(dt.value_or(cfg.effective_dt())),
      rotation_(std::polar(1.0, cfg.theta)),
      nonlinear_(cfg.nonlinear) {
  if (!(dt_ > 0.0)) throw std::invalid_argument("Etdrk4Stepper: dt must be > 0");
  const std::vector<cplx> L = linear_symbol(cfg);
  const std::size_t size = L.size();
  e_.resize(size);
  e2_.resize(size);
  q_.resize(size);
  f1_.resize(size);
  f2_.resize(size);
  f3_.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    const cplx z = L[i] * dt_;
    const EtdCoefficients c = etd_coefficients(z);
    e_[i] = std::exp(z);
    e2_[i] = std::exp(z / 2.0);
    q_[i] = dt_ * c.q;
    f1_[i] = dt_ * c.f1;
    f2_[i] = dt_ * c.f2;
    f3_[i] = dt_ * c.f3;
  }
}

FourierField Etdrk4Stepper::nonlinearity(const FourierField& u) const {
  if (!nonlinear_) return FourierField(u.n_modes(), u.period());
  FourierField nl = nonlinear_square(u);
  nl *= rotation_;
  return nl;
}

void Etdrk4Stepper::step(FourierField& u) const {
  if (u.n_modes() != n_modes_ || u.period() != period_)
    throw std::invalid_argument("Etdrk4Stepper: field does not match stepper resolution");
  const std::size_t size = e_.size();
  const FourierField nv = nonlinearity(u);
  FourierField a(n_modes_, period_);
  for (std::size_t i = 0; i < size; ++i) a.coeffs()[i] = e2_[i] * u.coeffs()[i] + q_[i] * nv.coeffs()[i];
  const FourierField na = nonlinearity(a);
  FourierField b(n_modes_, period_);
  for (std::size_t i = 0; i < size; ++i) b.coeffs()[i] = e2_[i] * u.coeffs()[i] + q_[i] * na.coeffs()[i];
  const FourierField nb = nonlinearity(b);
  FourierField c(n_modes_, period_);
  for (std::size_t i = 0; i < size; ++i)
    c.coeffs()[i] = e2_[i] * a.coeffs()[i] + q_[i] * (2.0 * nb.coeffs()[i] - nv.coeffs()[i]);
  const FourierField nc = nonlinearity(c);
  auto v = u.coeffs();
  for (std::size_t i = 0; i < size; ++i)
    v[i] = e_[i] * v[i] + f1_[i] * nv.coeffs()[i] + 2.0 * f2_[i] * (na.coeffs()[i] + nb.coeffs()[i]) +
           f3_[i] * nc.coeffs()[i];
}

FourierField etdrk4_step(const FourierField& f, const EvolveConfig& cfg) {
  EvolveConfig c = cfg;
  c.n_modes = f.n_modes();
  c.period = f.period();
  const Etdrk4Stepper stepper(c, cfg.dt);
  FourierField out = f;
  stepper.step(out);
  if (!out.all_finite()) throw std::runtime_error("etdrk4_step: non-finite values after step");
  return out;
}

std::string_view to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::ReachedTEnd: return "ReachedTEnd";
    case OutcomeKind::BlowupDetected: return "BlowupDetected";
    case OutcomeKind::TrappedForward: return "TrappedForward";
    case OutcomeKind::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

bool forward_trapped(const FourierField& u, double theta) {
  const double half_pi = std::numbers::pi / 2;
  Trapping s;
  if (near(theta, -half_pi))
    s = trapping_status(u);
  else if (near(theta, half_pi))
    s = trapping_status(u.conjugated());
  else
    return false;
  return s == Trapping::ForwardTrapped || s == Trapping::BothTrapped;
}

TrajectoryRecord evolve(const FourierField& u0, const EvolveConfig& cfg_in) {
  EvolveConfig cfg = cfg_in;
  cfg.validate();
  if (u0.n_modes() != cfg.n_modes || u0.period() != cfg.period)
    throw std::invalid_argument("evolve: initial field does not match config n_modes/period");

  TrajectoryRecord rec;
  rec.config = cfg;
  const long steps = cfg.n_steps();
  const double h = cfg.effective_dt();
  const Etdrk4Stepper stepper(cfg, h);

  rec.step_times.reserve(static_cast<std::size_t>(steps + 1));
  rec.sup_norms.reserve(static_cast<std::size_t>(steps + 1));

  FourierField u = u0;

  // Returns true when the run should stop at this record.
  auto record = [&](double t) {
    rec.times.push_back(t);
    if (cfg.keep_snapshots) rec.snapshots.push_back(u);
    if (l2_norm_sq(u) > 0.0)
      rec.energy_fractions.push_back(energy_proportions(u, cfg.energy_modes));
    else
      rec.energy_fractions.emplace_back(static_cast<std::size_t>(cfg.energy_modes + 1), 0.0);
    if (cfg.trapping_check) {
      const bool trapped = forward_trapped(u, cfg.theta);
      rec.forward_trapped.push_back(trapped);
      if (trapped && cfg.stop_on_trap) {
        rec.outcome = {OutcomeKind::TrappedForward, t};
        return true;
      }
    }
    return false;
  };

  const double s0 = sup_norm(u);
  rec.step_times.push_back(0.0);
  rec.sup_norms.push_back(s0);
  if (!(s0 < cfg.blowup_threshold))
    throw std::invalid_argument("evolve: initial sup norm already exceeds blowup_threshold");

  bool stopped = record(0.0);
  long k = 0;
  while (!stopped && k < steps) {
    stepper.step(u);
    ++k;
    const double t = static_cast<double>(k) * h;
    const double s = u.all_finite() ? sup_norm(u) : std::numeric_limits<double>::quiet_NaN();
    rec.step_times.push_back(t);
    rec.sup_norms.push_back(s);
    if (!std::isfinite(s)) {
      rec.outcome = {OutcomeKind::NumericalFailure, t};
      stopped = true;
    } else if (s > cfg.blowup_threshold) {
      rec.outcome = {OutcomeKind::BlowupDetected, t};
      stopped = true;
    }
    if (stopped) {
      // keep the last finite state as the final record
      if (u.all_finite()) record(t);
      break;
    }
    if (k % cfg.record_stride == 0 || k == steps) stopped = record(t);
  }
  if (!stopped) rec.outcome = {OutcomeKind::ReachedTEnd, static_cast<double>(steps) * h};
  rec.final_state = std::move(u);
  return rec;
}

std::optional<double> trapping_entry_time(const TrajectoryRecord& rec) {
  for (std::size_t i = 0; i < rec.forward_trapped.size(); ++i)
    if (rec.forward_trapped[i]) return rec.times[i];
  return std::nullopt;
}

}  // namespace nlslab
