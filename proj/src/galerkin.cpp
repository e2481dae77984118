#include "nlslab/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace nlslab {

GalerkinSystem GalerkinSystem::make(int n_modes, double theta) {
  if (n_modes < 0) throw std::invalid_argument("GalerkinSystem: negative mode count");
  GalerkinSystem sys;
  sys.n_modes = n_modes;
  sys.theta = theta;
  std::map<std::tuple<int, int, int>, int> merged;
  for (int n = 0; n <= n_modes; ++n)
    for (int n1 = -n_modes; n1 <= n_modes; ++n1) {
      const int n2 = n - n1;
      if (std::abs(n2) > n_modes) continue;
      const int i = std::min(std::abs(n1), std::abs(n2));
      const int j = std::max(std::abs(n1), std::abs(n2));
      ++merged[{n, i, j}];
    }
  for (const auto& [key, coef] : merged)
    sys.couplings.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), coef});
  return sys;
}

std::vector<cplx> galerkin_rhs(std::span<const cplx> a, const GalerkinSystem& sys) {
  if (static_cast<int>(a.size()) != sys.dimension())
    throw std::invalid_argument("galerkin_rhs: state has dimension " + std::to_string(a.size()) + ", expected " +
                                std::to_string(sys.dimension()));
  std::vector<cplx> r(a.size());
  for (int n = 0; n <= sys.n_modes; ++n) r[static_cast<std::size_t>(n)] = -static_cast<double>(n * n) * a[static_cast<std::size_t>(n)];
  for (const auto& t : sys.couplings)
    r[static_cast<std::size_t>(t.out)] += static_cast<double>(t.coef) * a[static_cast<std::size_t>(t.i)] * a[static_cast<std::size_t>(t.j)];
  const cplx rot = std::polar(1.0, sys.theta);
  for (auto& v : r) v *= rot;
  return r;
}

double galerkin_sup_norm(std::span<const cplx> a, int points) {
  double m = 0.0;
  for (int j = 0; j < points; ++j) {
    const double x = 2.0 * std::numbers::pi * j / points;
    cplx u = a.empty() ? cplx{} : a[0];
    for (std::size_t n = 1; n < a.size(); ++n) u += 2.0 * a[n] * std::cos(static_cast<double>(n) * x);
    m = std::max(m, std::abs(u));
  }
  return m;
}

std::vector<double> galerkin_energy(std::span<const cplx> a, int n_max) {
  double total = a.empty() ? 0.0 : std::norm(a[0]);
  for (std::size_t n = 1; n < a.size(); ++n) total += 2.0 * std::norm(a[n]);
  if (!(total > 0.0)) throw std::domain_error("galerkin_energy: zero state");
  std::vector<double> e(static_cast<std::size_t>(n_max + 1), 0.0);
  for (std::size_t n = 0; n < a.size() && n <= static_cast<std::size_t>(n_max); ++n)
    e[n] = (n == 0 ? 1.0 : 2.0) * std::norm(a[n]) / total;
  return e;
}

std::string_view to_string(GalerkinOutcome o) {
  switch (o) {
    case GalerkinOutcome::ReachedTEnd: return "ReachedTEnd";
    case GalerkinOutcome::BlowupDetected: return "BlowupDetected";
    case GalerkinOutcome::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

namespace {

std::vector<cplx> axpy(std::span<const cplx> y, double h, std::span<const cplx> k) {
  std::vector<cplx> out(y.begin(), y.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * k[i];
  return out;
}

void rk4_step(const ComplexRhs& rhs, std::vector<cplx>& y, double h) {
  const auto k1 = rhs(y);
  const auto k2 = rhs(axpy(y, h / 2, k1));
  const auto k3 = rhs(axpy(y, h / 2, k2));
  const auto k4 = rhs(axpy(y, h, k3));
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

long steps_for(double dt, double t_end) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw std::invalid_argument("rk4: need dt > 0 and t_end >= 0");
  return static_cast<long>(std::ceil(t_end / dt * (1.0 - 1e-12)));
}

bool finite(std::span<const cplx> y) {
  return std::all_of(y.begin(), y.end(), [](cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

}  // namespace

std::vector<cplx> rk4_integrate(const ComplexRhs& rhs, std::vector<cplx> y, double dt, double t_end) {
  const long n = steps_for(dt, t_end);
  if (n == 0) return y;
  const double h = t_end / static_cast<double>(n);
  for (long k = 0; k < n; ++k) rk4_step(rhs, y, h);
  return y;
}

GalerkinTrajectory integrate_galerkin(std::span<const cplx> a0, const GalerkinSystem& sys, double dt, double t_end,
                                      const GalerkinOptions& opt) {
  if (static_cast<int>(a0.size()) != sys.dimension())
    throw std::invalid_argument("integrate_galerkin: initial state has wrong dimension");
  if (opt.record_stride < 1) throw std::invalid_argument("integrate_galerkin: record_stride must be >= 1");
  const long n = std::max(1L, steps_for(dt, t_end));
  const double h = t_end / static_cast<double>(n);
  const ComplexRhs rhs = [&sys](std::span<const cplx> a) { return galerkin_rhs(a, sys); };

  GalerkinTrajectory tr;
  std::vector<cplx> y(a0.begin(), a0.end());
  auto record = [&](double t, double norm) {
    tr.times.push_back(t);
    tr.states.push_back(y);
    tr.sup_norms.push_back(norm);
    double total = 0.0;
    for (const auto& c : y) total += std::norm(c);
    tr.energy_fractions.push_back(total > 0.0 ? galerkin_energy(y, opt.energy_modes)
                                              : std::vector<double>(static_cast<std::size_t>(opt.energy_modes + 1), 0.0));
  };
  const double n0 = galerkin_sup_norm(y);
  tr.peak_norm = n0;
  record(0.0, n0);
  for (long k = 1; k <= n; ++k) {
    rk4_step(rhs, y, h);
    const double t = static_cast<double>(k) * h;
    if (!finite(y)) {
      tr.outcome = GalerkinOutcome::NumericalFailure;
      tr.end_time = t;
      return tr;
    }
    const double norm = galerkin_sup_norm(y);
    if (norm > tr.peak_norm) {
      tr.peak_norm = norm;
      tr.peak_time = t;
    }
    if (norm > opt.blowup_threshold) {
      record(t, norm);
      tr.outcome = GalerkinOutcome::BlowupDetected;
      tr.end_time = t;
      return tr;
    }
    if (k % opt.record_stride == 0 || k == n) record(t, norm);
  }
  tr.end_time = static_cast<double>(n) * h;
  return tr;
}

std::array<cplx, 3> conjugate_rhs(const std::array<cplx, 3>& s, cplx mu) {
  const cplx s1 = s[0], s2 = s[1], s3 = s[2];
  const cplx s1_4 = s1 * s1 * s1 * s1;
  const cplx s1_5 = s1_4 * s1;
  const cplx s1_9 = s1_5 * s1_4;
  return {mu * (-s1), mu * (-4.0 * s2 + s1_4 / 3.0),
          mu * (-9.0 * s3 - s1 * s2 * s2 + 19.0 / 24.0 * s1_5 * s2 + 11.0 / 81.0 * s1_9)};
}

std::array<cplx, 3> closed_form_sigma(const SigmaState& s, double t) {
  const auto [g1, g2, g3] = s.gamma;
  const cplx mt = s.mu * t;
  const cplx g1_4 = g1 * g1 * g1 * g1;
  const cplx g1_5 = g1_4 * g1;
  const cplx g1_9 = g1_5 * g1_4;
  const cplx sigma1 = g1 * std::exp(-mt);
  const cplx sigma2 = (g2 + mt / 3.0 * g1_4) * std::exp(-4.0 * mt);
  const cplx sigma3 = (g3 - mt * g1 * g2 * g2 + (19.0 * mt / 24.0 - mt * mt / 3.0) * g1_5 * g2 +
                       (11.0 * mt / 81.0 + 19.0 * mt * mt / 144.0 - mt * mt * mt / 27.0) * g1_9) *
                      std::exp(-9.0 * mt);
  return {sigma1, sigma2, sigma3};
}

SecularCrossing secular_crossing_times(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("secular_crossing_times: need 0 < eps < 1");
  SecularCrossing c;
  c.t23 = std::pow(eps, -2.5);
  c.t13 = std::pow(eps, -8.0 / 3.0);
  c.sigma2_envelope = [eps](double t) { return t * std::pow(eps, 4) / 3.0; };
  c.sigma3_envelope = [eps](double t) { return t * t * t * std::pow(eps, 9) / 27.0; };
  return c;
}

}  // namespace nlslab
