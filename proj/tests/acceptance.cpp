// Acceptance criteria 1-10, one PASS/FAIL line each.
//   acceptance [--slow] [--only N]... [--modes M]
// Criterion 8 needs --slow (tens of minutes at 4096 modes); --modes shrinks it
// for trial runs. Criteria listed in kKnownRed are reported as FAIL but do not
// change the exit status; any other failure does.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nlslab/evolution.hpp"
#include "nlslab/field.hpp"
#include "nlslab/galerkin.hpp"
#include "nlslab/hunt.hpp"
#include "nlslab/manifold.hpp"
#include "nlslab/selfsim.hpp"
#include "oracles.hpp"

using namespace nlslab;

namespace {

constexpr double kPi = std::numbers::pi;

// the three-mode Galerkin peak and the monochromatic rate fit
const std::set<int> kKnownRed = {7, 8};

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  bool slow;
  std::function<Verdict()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int slow_modes = 4096;

const std::vector<cplx> kPaperSigma{0.4300654917290795, -0.07398732057014827, 0.00530826265454094};

// ------------------------------------------------------------------------- 1

Verdict conjugacy_coefficients() {
  const TaylorModel m = solve_cohomological(GalerkinSystem::make(3, 0.0), 20);
  const std::map<std::pair<MultiIndex, int>, mpq_class> want = {{{{4, 0, 0}, 1}, mpq_class(1, 3)},
                                                                {{{1, 2, 0}, 2}, mpq_class(-1)},
                                                                {{{5, 1, 0}, 2}, mpq_class(19, 24)},
                                                                {{{9, 0, 0}, 2}, mpq_class(11, 81)}};
  std::map<std::pair<MultiIndex, int>, RationalComplex> got;
  for (const auto& [k, v] : m.f)
    if (total_order(k) >= 2)
      for (int i = 0; i < 3; ++i)
        if (!v[static_cast<std::size_t>(i)].is_zero()) got[{k, i}] = v[static_cast<std::size_t>(i)];
  bool ok = got.size() == want.size();
  for (const auto& [key, q] : want) {
    const auto it = got.find(key);
    ok = ok && it != got.end() && it->second == RationalComplex(q);
  }
  std::string terms;
  for (const auto& [key, c] : got) {
    std::string k;
    for (const int e : key.first) k += std::to_string(e);
    terms += fmt(" f%d[%s]=%s", key.second + 1, k.c_str(), RationalComplex::to_string(c.re()).c_str());
  }
  return {ok, fmt("%zu nonlinear terms:", got.size()) + terms};
}

// ------------------------------------------------------------------------- 2

Verdict resonance_enumeration() {
  std::vector<oracle::Res> got;
  for (const auto& r : detect_resonances(3, 20)) got.push_back({r.k, r.target});
  std::sort(got.begin(), got.end());
  const std::vector<oracle::Res> paper{{{1, 2, 0}, 3}, {{4, 0, 0}, 2}, {{5, 1, 0}, 3}, {{9, 0, 0}, 3}};
  const auto brute = oracle::brute_force_resonances(3, 20);
  return {got == paper && brute == paper, fmt("%zu found, brute force %zu", got.size(), brute.size())};
}

// ------------------------------------------------------------------------- 3

Verdict chart_evaluation() {
  const TaylorModel m = solve_cohomological(GalerkinSystem::make(3, 0.0), 20);
  const auto w = evaluate_W(m, kPaperSigma);
  const double want[] = {-0.22301409257004942, 0.5, 0.0, 0.0};
  double err = 0;
  for (int n = 0; n < 4; ++n) err = std::max(err, std::abs(w[static_cast<std::size_t>(n)] - want[n]));
  return {err < 1e-6, fmt("W = (%.17g, %.17g, %.3g, %.3g), max error %.2e", w[0].real(), w[1].real(), w[2].real(),
                          w[3].real(), err)};
}

// ------------------------------------------------------------------------- 4

Verdict invariance_residual() {
  bool ok = true;
  std::string detail;
  for (const int N : {1, 2, 3})
    for (const int K : {6, 12, 20}) {
      const auto rep = oracle::invariance_residual(solve_cohomological(GalerkinSystem::make(N, 0.0), K));
      ok = ok && rep.nonzero == 0 && rep.imaginary == 0;
      detail += fmt(" N%dK%d:%ld", N, K, rep.nonzero + rep.imaginary);
    }
  return {ok, "nonzero residual coefficients" + detail};
}

// ------------------------------------------------------------------------- 5

Verdict monochromatic_dichotomy() {
  const double omega = 2 * kPi;
  const double period = 2 * kPi / (omega * omega);
  EvolveConfig c;
  c.theta = kPi / 2;
  c.n_modes = 128;
  c.dt = 1e-5;
  c.t_end = period;
  c.keep_snapshots = false;
  c.record_stride = 1000;

  FourierField small(128);
  small[1] = 3 * omega * omega;
  const auto a = evolve(small, c);
  double diff = 0, size = 0;
  for (int n = -128; n <= 128; ++n) {
    diff += std::norm(a.final_state[n] - small[n]);
    size += std::norm(small[n]);
  }
  const double rel = std::sqrt(diff / size);

  FourierField large(128);
  large[1] = 6 * omega * omega;
  const auto b = evolve(large, c);
  const bool ok = a.outcome.kind == OutcomeKind::ReachedTEnd && rel < 1e-3 &&
                  b.outcome.kind == OutcomeKind::BlowupDetected && b.outcome.time <= period;
  return {ok, fmt("3w^2: %s, return error %.2e; 6w^2: %s at t = %.5f (bound %.5f)", to_string(a.outcome.kind).data(), rel,
                  to_string(b.outcome.kind).data(), b.outcome.time, period)};
}

// ------------------------------------------------------------------------- 6

Verdict bisection_constants() {
  auto family = [](int N, double amp) {
    FourierField g(N);
    g[1] = g[-1] = amp / 2;
    return g;
  };
  const auto r30 = bisect_manifold({family(256, 30), -10, 0, "cos:30"}, 1e-6);
  const auto r300 = bisect_manifold({family(1024, 300), -250, -100, "cos:300"}, 1e-4);
  const double e30 = std::abs(r30.A_star + 5.3070235);
  const double e300 = std::abs(r300.A_star + 189.286840601635);
  return {e30 < 1e-2 && e300 < 1e-1,
          fmt("A30 = %.9f (error %.1e), A300 = %.7f (error %.1e)", r30.A_star, e30, r300.A_star, e300)};
}

// ------------------------------------------------------------------------- 7

Verdict galerkin_peak() {
  const TaylorModel m = solve_cohomological(GalerkinSystem::make(3, 0.0), 20);
  const std::vector<Constraint> targets{{1, 0.5}, {2, 0.0}, {3, 0.0}};
  const auto a0 = evaluate_W(m, solve_sigma_for_constraints(m, targets));
  const auto tr = integrate_galerkin(a0, GalerkinSystem::make(3, kPi / 2), 1e-3, 200.0);
  const double e0 = tr.energy_fractions.back()[0];
  const bool decays = tr.sup_norms.back() < tr.peak_norm && e0 > 0.5;
  const bool ok = tr.peak_norm >= 300 && tr.peak_norm <= 370 && tr.peak_time >= 105 && tr.peak_time <= 120 && decays;
  return {ok, fmt("peak %.2f at t = %.2f; at t = 200: norm %.3g, E_0 = %.3f", tr.peak_norm, tr.peak_time,
                  tr.sup_norms.back(), e0)};
}

// ------------------------------------------------------------------------- 8

struct NormSeries {
  std::vector<double> t, norm;
  Outcome outcome;
};

NormSeries blowup_run(const FourierField& u0) {
  EvolveConfig c;
  c.theta = kPi / 2;
  c.n_modes = u0.n_modes();
  c.dt = 1e-7 * 4096.0 / u0.n_modes();
  c.t_end = 0.08;
  c.keep_snapshots = false;
  c.record_stride = 1 << 30;
  const auto rec = evolve(u0, c);
  return {rec.step_times, rec.sup_norms, rec.outcome};
}

Verdict rate_fits() {
  const int N = slow_modes;
  FourierField real(N);
  real[1] = real[-1] = 150;
  real[0] = -189.286840601635;
  const auto a = blowup_run(real);
  std::printf("INFO  8  real data: %s at t = %.6f\n", to_string(a.outcome.kind).data(), a.outcome.time);
  BlowupFit fa;
  bool ok_a = false;
  try {
    fa = fit_blowup_rate(a.t, a.norm, 0.070, 0.074);
    ok_a = fa.alpha >= 1.05 && fa.alpha <= 1.25 && fa.r_squared >= 0.999;
  } catch (const std::exception& e) {
    std::printf("INFO  8  real-data fit failed: %s\n", e.what());
  }

  FourierField mono(N);
  mono[1] = 300;
  const auto b = blowup_run(mono);
  std::printf("INFO  8  monochromatic: %s at t = %.6f\n", to_string(b.outcome.kind).data(), b.outcome.time);
  BlowupFit fb;
  bool ok_b = false;
  try {
    fb = fit_blowup_rate(b.t, b.norm, 0.038, 0.045);
    ok_b = fb.alpha >= 1.9 && fb.alpha <= 2.1 && fb.r_squared >= 0.999;
  } catch (const std::exception& e) {
    std::printf("INFO  8  monochromatic fit over [0.038, 0.045] failed: %s\n", e.what());
  }
  try {
    const BlowupFit fc = fit_blowup_rate(b.t, b.norm, 0.0038, 0.0045);
    std::printf("INFO  8  monochromatic fit over [0.0038, 0.0045]: alpha = %.4f, R^2 = %.6f, T = %.6f\n", fc.alpha,
                fc.r_squared, fc.T);
  } catch (const std::exception& e) {
    std::printf("INFO  8  monochromatic fit over [0.0038, 0.0045] failed: %s\n", e.what());
  }
  return {ok_a && ok_b, fmt("%d modes; real: alpha = %.4f R^2 = %.6f T = %.6f; monochromatic: alpha = %.4f R^2 = %.6f", N,
                            fa.alpha, fa.r_squared, fa.T, fb.alpha, fb.r_squared)};
}

// ------------------------------------------------------------------------- 9

double coeff_error(const FourierField& a, const FourierField& b) {
  double e = 0;
  for (int n = -a.n_modes(); n <= a.n_modes(); ++n) e = std::max(e, std::abs(a[n] - b[n]));
  return e;
}

FourierField final_state(const FourierField& u0, double theta, double dt, double t_end) {
  EvolveConfig c;
  c.theta = theta;
  c.n_modes = u0.n_modes();
  c.dt = dt;
  c.t_end = t_end;
  c.keep_snapshots = false;
  c.record_stride = 1 << 30;
  return evolve(u0, c).final_state;
}

Verdict integrator_checks() {
  // temporal order on a smooth NLS run
  FourierField u0(32);
  u0[0] = 2;
  u0[1] = u0[-1] = 5;
  u0[2] = cplx(0, -1);
  u0[-2] = cplx(0, 1);
  const double T = 0.02;
  const FourierField ref = final_state(u0, kPi / 2, T / 3200, T);
  std::vector<double> logdt, logerr;
  for (const int steps : {20, 40, 80, 160}) {
    logdt.push_back(std::log(T / steps));
    logerr.push_back(std::log(coeff_error(final_state(u0, kPi / 2, T / steps, T), ref)));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < logdt.size(); ++i) mx += logdt[i] / 4, my += logerr[i] / 4;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < logdt.size(); ++i) {
    sxy += (logdt[i] - mx) * (logerr[i] - my);
    sxx += (logdt[i] - mx) * (logdt[i] - mx);
  }
  const double slope = sxy / sxx;

  // constant data against 1/(1/u0 - t)
  FourierField one(4);
  one[0] = 1;
  const double e1 = std::abs(final_state(one, 0.0, 0.01, 0.5)[0] - 2.0);
  const double e2 = std::abs(final_state(one, 0.0, 0.005, 0.5)[0] - 2.0);
  const double scalar_order = std::log2(e1 / e2);

  // conjugation symmetry, snapshot by snapshot
  FourierField v0(24);
  for (int n = -24; n <= 24; ++n) v0[n] = cplx(2.0 / (1 + n * n), 0.7 * n / (1.0 + std::pow(n, 4)));
  EvolveConfig c;
  c.n_modes = 24;
  c.dt = 1e-4;
  c.t_end = 0.02;
  c.record_stride = 10;
  double sym = 0;
  for (const double theta : {kPi / 2, 0.3, -1.0}) {
    c.theta = theta;
    const auto a = evolve(v0.conjugated(), c);
    c.theta = -theta;
    const auto b = evolve(v0, c);
    for (std::size_t i = 0; i < a.snapshots.size(); ++i)
      sym = std::max(sym, coeff_error(a.snapshots[i], b.snapshots[i].conjugated()));
  }
  const bool ok = std::abs(slope - 4.0) <= 0.2 && std::abs(scalar_order - 4.0) <= 0.2 && e2 < 1e-8 && sym < 1e-10;
  return {ok, fmt("slope %.3f; scalar error %.2e -> %.2e (order %.2f); conjugation %.1e", slope, e1, e2, scalar_order, sym)};
}

// ------------------------------------------------------------------------ 10

cplx profile(double y) { return std::exp(-y * y / 4) * cplx(1.0, 0.5 * y); }

Verdict property_suite() {
  std::mt19937 rng(2024);
  std::normal_distribution<double> g;
  auto random_field = [&](int N) {
    FourierField f(N, 1.0);
    for (int n = -N; n <= N; ++n) f[n] = cplx(g(rng), g(rng)) / (1.0 + std::abs(n));
    return f;
  };
  double parseval = 0, energy = 0, conv = 0;
  for (const int N : {1, 4, 16, 33, 64}) {
    const FourierField f = random_field(N);
    const double l2 = l2_norm_sq(f);
    parseval = std::max(parseval, std::abs(l2 - oracle::quadrature_l2(f, 2 * N + 5)) / l2);
    double s = 0;
    for (const double e : energy_proportions(f, N)) s += e;
    energy = std::max(energy, std::abs(s - 1));
    conv = std::max(conv, coeff_error(nonlinear_square(f), oracle::direct_square(f)));
  }

  std::vector<double> t, norm;
  for (int i = 0; i <= 400; ++i) {
    t.push_back(0.3 + 0.15 * i / 400);
    norm.push_back(1.0 / (2.0 * std::pow(0.5 - t.back(), 1.5)));
  }
  const BlowupFit fit = fit_blowup_rate(t, norm, 0.3, 0.45);
  const double fit_err = std::max({std::abs(fit.T - 0.5), std::abs(fit.alpha - 1.5), std::abs(fit.C0 - 2)});

  BlowupFit frame_fit;
  frame_fit.T = 0.1;
  double frame_err = 0;
  for (const double tau : {2e-3, 1e-3, 5e-4}) {
    GridField grid;
    grid.values.resize(oversampled_size(160));
    for (std::size_t j = 0; j < grid.size(); ++j)
      for (int p = -1; p <= 1; ++p) grid.values[j] += profile((grid.x(j) - 0.37 + p) / std::sqrt(tau)) / tau;
    const auto fr = rescale_frame(from_grid(grid, 160), frame_fit.T - tau, frame_fit, {1.0, 0.5}, 0.37);
    for (std::size_t j = 0; j < fr.y_grid.size(); ++j)
      frame_err = std::max(frame_err, std::abs(fr.U_values[j] - profile(fr.y_grid[j])));
  }

  SigmaState s;
  s.gamma = {cplx(0.5, -0.2), cplx(0.1, 0.3), cplx(-0.2, 0.05)};
  s.mu = cplx(0, 1);
  const TaylorModel m = solve_cohomological(GalerkinSystem::make(3, 0.0), 12);
  const std::vector<cplx> g0(s.gamma.begin(), s.gamma.end());
  double sigma_err = 0;
  for (const double tt : {2.0, 10.0}) {
    const auto num = oracle::rk4([&](const std::vector<cplx>& y) { return oracle::model_flow_rhs(m, s.mu, y); }, g0, tt,
                                 static_cast<int>(4000 * tt));
    const auto cf = closed_form_sigma(s, tt);
    for (int j = 0; j < 3; ++j)
      sigma_err = std::max(sigma_err, std::abs(num[static_cast<std::size_t>(j)] - cf[static_cast<std::size_t>(j)]));
  }
  const bool ok = parseval < 1e-10 && energy < 1e-12 && conv < 1e-10 && fit_err < 1e-6 && frame_err < 1e-6 &&
                  sigma_err < 1e-8;
  return {ok, fmt("parseval %.1e, energy sum %.1e, convolution %.1e, power law %.1e, frames %.1e, sigma(t) %.1e", parseval,
                  energy, conv, fit_err, frame_err, sigma_err)};
}

}  // namespace

int main(int argc, char** argv) {
  bool slow = false;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--slow") {
      slow = true;
    } else if (a == "--only" && i + 1 < argc) {
      only.insert(std::stoi(argv[++i]));
    } else if (a == "--modes" && i + 1 < argc) {
      slow_modes = std::stoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--slow] [--only N]... [--modes M]\n", argv[0]);
      return 2;
    }
  }
  const std::vector<Criterion> all = {
      {1, "exact conjugacy coefficients", false, conjugacy_coefficients},
      {2, "resonance enumeration", false, resonance_enumeration},
      {3, "chart evaluation", false, chart_evaluation},
      {4, "exact invariance residual", false, invariance_residual},
      {5, "monochromatic dichotomy", false, monochromatic_dichotomy},
      {6, "bisection constants", false, bisection_constants},
      {7, "galerkin peak", false, galerkin_peak},
      {8, "blowup rate fits", true, rate_fits},
      {9, "integrator order and oracles", false, integrator_checks},
      {10, "property suite", false, property_suite},
  };
  int unexpected = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    if (c.slow && !slow) {
      std::printf("SKIP  %-2d %s (slow; run with --slow)\n", c.id, c.title.c_str());
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool known = kKnownRed.count(c.id) > 0;
    std::printf("%s  %-2d %s: %s [%.1fs]%s\n", v.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), v.detail.c_str(), secs,
                !v.pass && known ? " (known red)" : "");
    std::fflush(stdout);
    if (!v.pass && !known) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
