#include "nlslab/hunt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace nlslab {

FourierField FamilySpec::member(double A) const {
  FourierField u = g;
  u[0] += A;
  return u;
}

std::string_view to_string(Fate f) {
  switch (f) {
    case Fate::Blowup: return "Blowup";
    case Fate::Decay: return "Decay";
    case Fate::Undetermined: return "Undetermined";
  }
  return "?";
}

namespace {

std::string describe(const char* rule, double value) {
  std::ostringstream ss;
  ss.precision(10);
  ss << rule << " (" << value << ")";
  return ss.str();
}

double coefficient_l1(const FourierField& u) {
  double s = 0.0;
  for (const auto& c : u.coeffs()) s += std::abs(c);
  return s;
}

// mass of the non-constant modes, scaled by their slowest decay rate
double higher_mass(const FourierField& u) {
  double s = 0.0;
  for (int n = 1; n <= u.n_modes(); ++n) s += std::norm(u[n]) + std::norm(u[-n]);
  const double k1 = u.wavenumber(1);
  return s / (2.0 * k1 * k1);
}

}  // namespace

FateReport classify_heat_fate(const FourierField& u0, const HeatFateConfig& cfg) {
  if (!u0.is_real(cfg.real_tol)) throw std::invalid_argument("classify_heat_fate: initial data must be real");
  if (!(cfg.dt > 0.0) || !(cfg.t_max > 0.0) || cfg.check_stride < 1)
    throw std::invalid_argument("classify_heat_fate: need dt > 0, t_max > 0, check_stride >= 1");

  EvolveConfig ec;
  ec.theta = 0.0;
  ec.dt = cfg.dt;
  ec.t_end = cfg.t_max;
  ec.n_modes = u0.n_modes();
  ec.period = u0.period();
  const Etdrk4Stepper stepper(ec, cfg.dt);
  const std::size_t grid = oversampled_size(u0.n_modes());

  FateReport rep;
  double horizon = cfg.t_max;
  int doublings = 0;
  std::optional<double> certified;  // blowup guaranteed before this time
  FourierField u = u0;
  long k = 0;
  while (true) {
    const double t = static_cast<double>(k) * cfg.dt;
    if (!u.all_finite()) {
      rep = {Fate::Undetermined, t, "non-finite state", std::nan(""), horizon};
      return rep;
    }
    const double a0 = u[0].real();
    if (!certified && a0 > 0.0) {
      // d a0/dt = mean(u^2) >= a0^2, so a0 reaches infinity before t + 1/a0
      certified = t + 1.0 / a0;
      if (*certified > horizon)
        return {Fate::Blowup, *certified, describe("positive mean, blowup before t + 1/a0", *certified), sup_norm(u),
                horizon};
    }
    if (coefficient_l1(u) > cfg.blowup_threshold) {
      const double s = sup_norm(u);
      if (s > cfg.blowup_threshold) return {Fate::Blowup, t, describe("sup norm above threshold", s), s, horizon};
    }
    if (!certified && k % cfg.check_stride == 0) {
      const GridField g = to_grid(u, grid);
      double max_re = -std::numeric_limits<double>::infinity();
      double sup = 0.0;
      for (const auto& v : g.values) {
        max_re = std::max(max_re, v.real());
        sup = std::max(sup, std::abs(v));
      }
      if (max_re < 0.0) return {Fate::Decay, t, describe("pointwise negative, max u", max_re), sup, horizon};
      if (sup < cfg.decay_threshold && a0 < 0.0 && higher_mass(u) < -a0)
        return {Fate::Decay, t, describe("small norm with negative mean", sup), sup, horizon};
    }
    if (t >= horizon - 0.5 * cfg.dt) {
      if (certified)
        return {Fate::Blowup, *certified, describe("positive mean, blowup before t + 1/a0", *certified), sup_norm(u),
                horizon};
      if (doublings >= cfg.max_doublings)
        return {Fate::Undetermined, t, "no rule fired before t_max", sup_norm(u), horizon};
      horizon *= 2.0;
      ++doublings;
    }
    stepper.step(u);
    ++k;
  }
}

BisectionResult bisect_manifold(const FamilySpec& fam, double tol, const HeatFateConfig& cfg) {
  if (!(tol > 0.0)) throw std::invalid_argument("bisect_manifold: tol must be > 0");
  if (!(fam.A_lo < fam.A_hi)) throw std::invalid_argument("bisect_manifold: need A_lo < A_hi");
  BisectionResult res;
  res.lo = fam.A_lo;
  res.hi = fam.A_hi;
  res.lo_report = classify_heat_fate(fam.member(res.lo), cfg);
  res.hi_report = classify_heat_fate(fam.member(res.hi), cfg);
  auto undetermined = [](double A, const FateReport& r) {
    std::ostringstream ss;
    ss << "bisect_manifold: fate at A = " << A << " is Undetermined after t_max = " << r.t_max_used
       << "; increase t_max";
    throw BisectionError(ss.str(), {r});
  };
  if (res.lo_report.fate == Fate::Undetermined) undetermined(res.lo, res.lo_report);
  if (res.hi_report.fate == Fate::Undetermined) undetermined(res.hi, res.hi_report);
  if (res.lo_report.fate == res.hi_report.fate) {
    std::ostringstream ss;
    ss << "bisect_manifold: both endpoints give " << to_string(res.lo_report.fate) << " (" << res.lo_report.certificate
       << " / " << res.hi_report.certificate << ")";
    throw BisectionError(ss.str(), {res.lo_report, res.hi_report});
  }
  while (res.hi - res.lo >= tol) {
    const double mid = 0.5 * (res.lo + res.hi);
    FateReport r = classify_heat_fate(fam.member(mid), cfg);
    res.history.push_back({res.lo, res.hi, mid, r});
    if (r.fate == Fate::Undetermined) undetermined(mid, r);
    if (r.fate == res.lo_report.fate) {
      res.lo = mid;
      res.lo_report = std::move(r);
    } else {
      res.hi = mid;
      res.hi_report = std::move(r);
    }
  }
  res.A_star = 0.5 * (res.lo + res.hi);
  return res;
}

std::vector<SweepRow> sweep_nls(const FamilySpec& fam, std::vector<double> A_values, const EvolveConfig& cfg,
                                unsigned threads) {
  std::sort(A_values.begin(), A_values.end());
  std::vector<SweepRow> rows(A_values.size());
  EvolveConfig run_cfg = cfg;
  run_cfg.trapping_check = true;
  run_cfg.stop_on_trap = false;
  run_cfg.keep_snapshots = false;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      SweepRow& row = rows[i];
      row.A = A_values[i];
      try {
        TrajectoryRecord rec = evolve(fam.member(row.A), run_cfg);
        row.outcome = rec.outcome.kind;
        row.outcome_time = rec.outcome.time;
        row.trap_time = trapping_entry_time(rec);
        for (const double s : rec.sup_norms)
          if (std::isfinite(s)) row.max_norm = std::max(row.max_norm, s);
        row.times = std::move(rec.step_times);
        row.sup_norms = std::move(rec.sup_norms);
      } catch (const std::exception& e) {
        row.outcome = OutcomeKind::NumericalFailure;
        row.error = e.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(rows.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace nlslab
