#include "nlslab/selfsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "nlslab/fft.hpp"

namespace nlslab {

namespace {

struct Ols {
  double slope = 0.0;
  double intercept = 0.0;
  double ss_res = 0.0;
};

Ols ols(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Ols r;
  r.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  r.intercept = my - r.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (r.intercept + r.slope * x[i]);
    r.ss_res += e * e;
  }
  return r;
}

struct Window {
  std::vector<double> t, y;  // y = log(1/norm)
};

Window select(std::span<const double> t, std::span<const double> norm, double t0, double t1) {
  if (t.size() != norm.size()) throw std::invalid_argument("fit_blowup_rate: time and norm series differ in length");
  if (!(t0 < t1)) throw std::invalid_argument("fit_blowup_rate: need t0 < t1");
  Window w;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= t0 && t[i] <= t1 && norm[i] > 0.0 && std::isfinite(norm[i])) {
      w.t.push_back(t[i]);
      w.y.push_back(-std::log(norm[i]));
    }
  if (w.t.size() < 4) throw std::invalid_argument("fit_blowup_rate: fewer than 4 samples in the window");
  return w;
}

BlowupFit fit_window(const Window& w, const FitOptions& opt) {
  const double t_last = *std::max_element(w.t.begin(), w.t.end());
  const double t_first = *std::min_element(w.t.begin(), w.t.end());
  const double width = std::max(t_last - t_first, 1e-300);
  std::vector<double> x(w.t.size());

  auto at = [&](double log_offset) {
    const double T = t_last + width * std::exp(log_offset);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::log(T - w.t[i]);
    return ols(x, w.y);
  };

  const double lo = std::log(opt.min_offset), hi = std::log(opt.max_offset);
  const int n = std::max(opt.scan_points, 3);
  int best = 0;
  double best_ss = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double ss = at(lo + (hi - lo) * i / (n - 1)).ss_res;
    if (ss < best_ss) {
      best_ss = ss;
      best = i;
    }
  }
  double a = lo + (hi - lo) * std::max(best - 1, 0) / (n - 1);
  double b = lo + (hi - lo) * std::min(best + 1, n - 1) / (n - 1);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = at(c).ss_res, fd = at(d).ss_res;
  for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = at(c).ss_res;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = at(d).ss_res;
    }
  }
  const double opt_log = 0.5 * (a + b);
  const Ols r = at(opt_log);

  BlowupFit fit;
  fit.T = t_last + width * std::exp(opt_log);
  fit.alpha = r.slope;
  fit.C0 = std::exp(r.intercept);
  fit.t0 = t_first;
  fit.t1 = t_last;
  fit.points = static_cast<int>(w.t.size());
  double my = 0.0;
  for (const double v : w.y) my += v;
  my /= static_cast<double>(w.y.size());
  double ss_tot = 0.0;
  for (const double v : w.y) ss_tot += (v - my) * (v - my);
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - r.ss_res / ss_tot, 0.0, 1.0) : 0.0;

  // Jarque-Bera on the residuals, chi^2(2) 95% quantile
  std::vector<double> e(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) e[i] = w.y[i] - (r.intercept + r.slope * x[i]);
  double m1 = 0.0;
  for (const double v : e) m1 += v;
  m1 /= static_cast<double>(e.size());
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (const double v : e) {
    const double dv = v - m1;
    m2 += dv * dv;
    m3 += dv * dv * dv;
    m4 += dv * dv * dv * dv;
  }
  const double ne = static_cast<double>(e.size());
  m2 /= ne;
  m3 /= ne;
  m4 /= ne;
  if (m2 > 0.0) {
    const double skew = m3 / std::pow(m2, 1.5);
    const double kurt = m4 / (m2 * m2);
    fit.jarque_bera = ne / 6.0 * (skew * skew + (kurt - 3.0) * (kurt - 3.0) / 4.0);
  }
  fit.residual_normality_flag = fit.jarque_bera < 5.991;
  return fit;
}

}  // namespace

BlowupFit fit_blowup_rate(std::span<const double> t, std::span<const double> norm, double t0, double t1,
                          const FitOptions& opt) {
  return fit_window(select(t, norm, t0, t1), opt);
}

FitReport fit_blowup_rate_with_halves(std::span<const double> t, std::span<const double> norm, double t0, double t1,
                                      const FitOptions& opt) {
  FitReport rep;
  rep.full = fit_blowup_rate(t, norm, t0, t1, opt);
  const double mid = 0.5 * (t0 + t1);
  try {
    rep.first_half = fit_blowup_rate(t, norm, t0, mid, opt);
  } catch (const std::invalid_argument&) {
  }
  try {
    rep.second_half = fit_blowup_rate(t, norm, mid, t1, opt);
  } catch (const std::invalid_argument&) {
  }
  return rep;
}

std::vector<std::pair<double, double>> peak_positions(const FourierField& u, double relative_floor) {
  const GridField g = to_grid(u, oversampled_size(u.n_modes()));
  const std::size_t M = g.size();
  std::vector<double> a(M);
  double top = 0.0;
  for (std::size_t j = 0; j < M; ++j) {
    a[j] = std::abs(g.values[j]);
    top = std::max(top, a[j]);
  }
  std::vector<std::pair<double, double>> peaks;
  if (!(top > 0.0)) return peaks;
  const double floor = relative_floor * top;
  for (std::size_t j = 0; j < M; ++j) {
    const double l = a[(j + M - 1) % M], c = a[j], r = a[(j + 1) % M];
    if (c < floor || !(c > l) || c < r) continue;
    const double den = l - 2.0 * c + r;
    const double off = den != 0.0 ? 0.5 * (l - r) / den : 0.0;
    const double peak = c - 0.25 * (l - r) * off;
    double x = (static_cast<double>(j) + off) * u.period() / static_cast<double>(M);
    x -= u.period() * std::floor(x / u.period());
    peaks.emplace_back(x, peak);
  }
  return peaks;
}

TrackResult track_blowup_points(std::span<const FourierField> snapshots, std::span<const double> times) {
  if (snapshots.empty()) throw std::invalid_argument("track_blowup_points: no snapshots");
  if (snapshots.size() != times.size()) throw std::invalid_argument("track_blowup_points: times/snapshots mismatch");
  const double P = snapshots.front().period();
  TrackResult res;
  std::vector<std::size_t> active;
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    const auto peaks = peak_positions(snapshots[s]);
    const int count = static_cast<int>(peaks.size());
    if (s > 0 && count != res.counts.back()) res.events.push_back({times[s], res.counts.back(), count});
    res.counts.push_back(count);

    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;  // |dx|, path, peak
    for (const std::size_t p : active) {
      const double last = res.paths[p].xi.back();
      for (std::size_t q = 0; q < peaks.size(); ++q) {
        double dx = peaks[q].first - last;
        dx -= P * std::round(dx / P);
        pairs.emplace_back(std::abs(dx), p, q);
      }
    }
    std::sort(pairs.begin(), pairs.end());
    std::vector<bool> path_used(res.paths.size(), false), peak_used(peaks.size(), false);
    std::vector<std::size_t> next_active;
    for (const auto& [dist, p, q] : pairs) {
      if (path_used[p] || peak_used[q]) continue;
      path_used[p] = peak_used[q] = true;
      BlowupPath& path = res.paths[p];
      double dx = peaks[q].first - path.xi.back();
      dx -= P * std::round(dx / P);
      path.t.push_back(times[s]);
      path.xi.push_back(path.xi.back() + dx);
      path.amplitude.push_back(peaks[q].second);
      next_active.push_back(p);
    }
    for (std::size_t q = 0; q < peaks.size(); ++q) {
      if (peak_used[q]) continue;
      res.paths.push_back({{times[s]}, {peaks[q].first}, {peaks[q].second}});
      next_active.push_back(res.paths.size() - 1);
    }
    active = std::move(next_active);
  }
  return res;
}

std::vector<double> median_filter5(std::span<const double> x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t lo = i >= 2 ? i - 2 : 0;
    const std::size_t hi = std::min(x.size(), i + 3);
    std::vector<double> w(x.begin() + static_cast<std::ptrdiff_t>(lo), x.begin() + static_cast<std::ptrdiff_t>(hi));
    std::sort(w.begin(), w.end());
    out[i] = w.size() % 2 ? w[w.size() / 2] : 0.5 * (w[w.size() / 2 - 1] + w[w.size() / 2]);
  }
  return out;
}

std::vector<double> central_difference(std::span<const double> t, std::span<const double> x) {
  if (t.size() != x.size()) throw std::invalid_argument("central_difference: length mismatch");
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  d[0] = (x[1] - x[0]) / (t[1] - t[0]);
  d[n - 1] = (x[n - 1] - x[n - 2]) / (t[n - 1] - t[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (x[i + 1] - x[i - 1]) / (t[i + 1] - t[i - 1]);
  return d;
}

Scaling default_scaling(const FourierField& u0) {
  int nonzero = 0;
  bool constant = false;
  for (int n = -u0.n_modes(); n <= u0.n_modes(); ++n)
    if (u0[n] != cplx{}) {
      ++nonzero;
      constant = constant || n == 0;
    }
  if (nonzero == 1 && !constant) return {2.0, 1.0};
  return {1.0, 0.5};
}

SelfSimilarFrame rescale_frame(const FourierField& u, double t, const BlowupFit& fit, Scaling scaling, double xi,
                               const FrameGrid& grid) {
  const double tau = fit.T - t;
  if (!(tau > 0.0)) throw std::invalid_argument("rescale_frame: need t < T");
  if (grid.points < 2 || !(grid.y_min < grid.y_max)) throw std::invalid_argument("rescale_frame: bad y-grid");
  SelfSimilarFrame fr;
  fr.t = t;
  fr.s = -std::log(tau);
  fr.xi = xi;
  fr.scaling = scaling;
  const double stretch = std::pow(tau, scaling.beta);
  const double amp = std::pow(tau, scaling.alpha);
  fr.wrapped = stretch * (grid.y_max - grid.y_min) > u.period();
  const double h = (grid.y_max - grid.y_min) / grid.points;
  fr.y_grid.resize(static_cast<std::size_t>(grid.points));
  fr.U_values.resize(fr.y_grid.size());
  for (std::size_t j = 0; j < fr.y_grid.size(); ++j) {
    const double y = grid.y_min + h * static_cast<double>(j);
    fr.y_grid[j] = y;
    fr.U_values[j] = amp * u.evaluate(xi + stretch * y);
  }
  return fr;
}

std::vector<double> tukey_window(int n, double taper) {
  std::vector<double> w(static_cast<std::size_t>(std::max(n, 0)), 1.0);
  if (n < 2 || taper <= 0.0) return w;
  for (int j = 0; j < n; ++j) {
    const double x = static_cast<double>(j) / (n - 1);
    double v = 1.0;
    if (x < taper / 2)
      v = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi / taper * (x - taper / 2)));
    else if (x > 1.0 - taper / 2)
      v = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi / taper * (x - 1.0 + taper / 2)));
    w[static_cast<std::size_t>(j)] = v;
  }
  return w;
}

std::vector<cplx> typeI_residual_field(const SelfSimilarFrame& frame) {
  if (std::abs(frame.scaling.alpha - 1.0) > 1e-12 || std::abs(frame.scaling.beta - 0.5) > 1e-12)
    throw std::invalid_argument("typeI_residual: frame must use scaling (1, 1/2)");
  const std::size_t P = frame.U_values.size();
  if (P < 4 || frame.y_grid.size() != P) throw std::invalid_argument("typeI_residual: frame too small");
  const double h = frame.y_grid[1] - frame.y_grid[0];
  const double L = h * static_cast<double>(P);

  std::vector<cplx> hat(frame.U_values.begin(), frame.U_values.end());
  fft_inplace(hat, FftDirection::Forward);
  std::vector<cplx> d1(P), d2(P);
  for (std::size_t m = 0; m < P; ++m) {
    const long n = m <= P / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(P);
    const double k = 2.0 * std::numbers::pi * static_cast<double>(n) / L;
    const bool nyquist = P % 2 == 0 && m == P / 2;
    d1[m] = nyquist ? cplx{} : cplx{0.0, k} * hat[m];
    d2[m] = -k * k * hat[m];
  }
  fft_inplace(d1, FftDirection::Backward);
  fft_inplace(d2, FftDirection::Backward);
  const double inv = 1.0 / static_cast<double>(P);
  const cplx I{0.0, 1.0};
  std::vector<cplx> R(P);
  for (std::size_t j = 0; j < P; ++j) {
    const cplx U = frame.U_values[j];
    R[j] = d2[j] * inv - 0.5 * I * frame.y_grid[j] * d1[j] * inv - I * U + U * U;
  }
  return R;
}

double typeI_residual(const SelfSimilarFrame& frame) {
  const auto R = typeI_residual_field(frame);
  const auto w = tukey_window(static_cast<int>(R.size()));
  const double h = frame.y_grid[1] - frame.y_grid[0];
  double s = 0.0;
  for (std::size_t j = 0; j < R.size(); ++j) s += w[j] * std::norm(R[j]);
  return std::sqrt(s * h);
}

}  // namespace nlslab
