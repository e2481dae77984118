#include "nlslab/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nlslab {

namespace {

void require_period(double period) {
  if (!(period > 0.0) || !std::isfinite(period))
    throw std::invalid_argument("FourierField: period must be positive");
}

// Place modes -N..N of f into a length-M buffer at index n mod M.
std::vector<cplx> scatter(const FourierField& f, std::size_t M) {
  std::vector<cplx> buf(M, cplx{});
  const int N = f.n_modes();
  const auto m = static_cast<long>(M);
  for (int n = -N; n <= N; ++n) buf[static_cast<std::size_t>(((n % m) + m) % m)] = f[n];
  return buf;
}

}  // namespace

FourierField::FourierField(int n_modes, double period)
    : n_modes_(n_modes), period_(period), coeffs_(static_cast<std::size_t>(2 * n_modes + 1)) {
  if (n_modes < 0) throw std::invalid_argument("FourierField: negative mode count");
  require_period(period);
}

FourierField FourierField::from_coeffs(std::vector<cplx> two_sided, double period) {
  if (two_sided.size() % 2 == 0)
    throw std::invalid_argument("FourierField: coefficient vector must have odd length 2N+1");
  FourierField f(static_cast<int>(two_sided.size() / 2), period);
  f.coeffs_ = std::move(two_sided);
  return f;
}

FourierField FourierField::cosine(std::span<const cplx> half, double period) {
  if (half.empty()) throw std::invalid_argument("FourierField::cosine: need at least a_0");
  const int N = static_cast<int>(half.size()) - 1;
  FourierField f(N, period);
  f[0] = half[0];
  for (int n = 1; n <= N; ++n) f[n] = f[-n] = half[static_cast<std::size_t>(n)];
  return f;
}

double FourierField::wavenumber(int n) const { return 2.0 * std::numbers::pi * n / period_; }

bool FourierField::is_real(double tol) const {
  for (int n = 0; n <= n_modes_; ++n)
    if (std::abs((*this)[-n] - std::conj((*this)[n])) > tol) return false;
  return true;
}

bool FourierField::is_cosine_symmetric(double tol) const {
  for (int n = 1; n <= n_modes_; ++n)
    if (std::abs((*this)[-n] - (*this)[n]) > tol) return false;
  return true;
}

bool FourierField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

FourierField FourierField::resized(int n_modes) const {
  FourierField out(n_modes, period_);
  const int m = std::min(n_modes, n_modes_);
  for (int n = -m; n <= m; ++n) out[n] = (*this)[n];
  return out;
}

FourierField FourierField::conjugated() const {
  FourierField out(n_modes_, period_);
  for (int n = -n_modes_; n <= n_modes_; ++n) out[n] = std::conj((*this)[-n]);
  return out;
}

cplx FourierField::evaluate(double x) const {
  cplx sum = (*this)[0];
  for (int n = 1; n <= n_modes_; ++n) {
    const cplx p = std::polar(1.0, wavenumber(n) * x);
    sum += (*this)[n] * p + (*this)[-n] * std::conj(p);
  }
  return sum;
}

FourierField& FourierField::operator+=(const FourierField& other) {
  if (other.n_modes_ != n_modes_ || other.period_ != period_)
    throw std::invalid_argument("FourierField: size or period mismatch in +=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

FourierField& FourierField::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
FourierField operator*(cplx s, FourierField a) { return a *= s; }

GridField to_grid(const FourierField& f, std::size_t M) {
  if (M < static_cast<std::size_t>(2 * f.n_modes() + 1))
    throw std::invalid_argument("to_grid: M = " + std::to_string(M) + " < 2N+1 would alias");
  GridField g{scatter(f, M), f.period()};
  fft_inplace(g.values, FftDirection::Backward);
  return g;
}

FourierField from_grid(const GridField& g, int n_modes) {
  const std::size_t M = g.values.size();
  if (M < static_cast<std::size_t>(2 * n_modes + 1))
    throw std::invalid_argument("from_grid: grid too small for requested modes");
  std::vector<cplx> buf = g.values;
  fft_inplace(buf, FftDirection::Forward);
  FourierField f(n_modes, g.period);
  const auto m = static_cast<long>(M);
  const double scale = 1.0 / static_cast<double>(M);
  for (int n = -n_modes; n <= n_modes; ++n)
    f[n] = buf[static_cast<std::size_t>(((n % m) + m) % m)] * scale;
  return f;
}

std::size_t oversampled_size(int n_modes) {
  return fft_size_at_least(4 * static_cast<std::size_t>(2 * n_modes + 1));
}

std::size_t dealiased_size(int n_modes) {
  return fft_size_at_least(3 * static_cast<std::size_t>(n_modes) + 1);
}

FourierField nonlinear_square(const FourierField& f) {
  GridField g = to_grid(f, dealiased_size(f.n_modes()));
  for (auto& v : g.values) v *= v;
  return from_grid(g, f.n_modes());
}

double sup_norm(const FourierField& f) {
  const GridField g = to_grid(f, oversampled_size(f.n_modes()));
  double m = 0.0;
  for (const auto& v : g.values) m = std::max(m, std::abs(v));
  return m;
}

double l2_norm_sq(const FourierField& f) {
  double s = 0.0;
  for (const auto& c : f.coeffs()) s += std::norm(c);
  return s;
}

double l1_norm_higher(const FourierField& f) {
  double s = 0.0;
  for (int n = 1; n <= f.n_modes(); ++n) s += std::abs(f[n]) + std::abs(f[-n]);
  return s;
}

std::vector<double> energy_proportions(const FourierField& f, int n_max) {
  const double total = l2_norm_sq(f);
  if (!(total > 0.0)) throw std::domain_error("energy_proportions: zero field");
  std::vector<double> e(static_cast<std::size_t>(std::max(n_max, 0) + 1), 0.0);
  e[0] = std::norm(f[0]) / total;
  for (int n = 1; n <= std::min(n_max, f.n_modes()); ++n)
    e[static_cast<std::size_t>(n)] = (std::norm(f[n]) + std::norm(f[-n])) / total;
  return e;
}

std::string_view to_string(Trapping t) {
  switch (t) {
    case Trapping::ForwardTrapped: return "ForwardTrapped";
    case Trapping::BackwardTrapped: return "BackwardTrapped";
    case Trapping::BothTrapped: return "BothTrapped";
    case Trapping::NotTrapped: return "NotTrapped";
  }
  return "?";
}

Trapping trapping_status(const FourierField& f) {
  const cplx z0 = f[0];
  const double r = std::abs(z0);
  if (r == 0.0) return Trapping::NotTrapped;
  if (!(l1_norm_higher(f) < std::exp(-std::numbers::pi / 2) * r)) return Trapping::NotTrapped;
  // Closed intervals of the theorem: phi in [0,pi] -> backward, [pi,2pi] -> forward.
  if (z0.imag() == 0.0) return Trapping::BothTrapped;
  return z0.imag() > 0.0 ? Trapping::BackwardTrapped : Trapping::ForwardTrapped;
}

}  // namespace nlslab
