#pragma once

// Periodic complex fields stored as two-sided Fourier coefficient vectors,
// with the transforms, norms and diagnostics used throughout the lab.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "nlslab/fft.hpp"

namespace nlslab {

/// u(x) = sum_{n=-N..N} a_n e^{i k_n x},  k_n = 2 pi n / period.
class FourierField {
 public:
  /// All-zero field with N modes on a torus of the given period.
  explicit FourierField(int n_modes = 0, double period = 1.0);

  /// From a two-sided coefficient vector of odd length 2N+1, index n+N.
  static FourierField from_coeffs(std::vector<cplx> two_sided, double period = 1.0);

  /// Cosine-symmetric field a_{-n} = a_n from (a_0, ..., a_N).
  static FourierField cosine(std::span<const cplx> half, double period = 1.0);

  int n_modes() const { return n_modes_; }
  double period() const { return period_; }
  double wavenumber(int n) const;

  cplx& operator[](int n) { return coeffs_[static_cast<std::size_t>(n + n_modes_)]; }
  const cplx& operator[](int n) const { return coeffs_[static_cast<std::size_t>(n + n_modes_)]; }

  std::span<cplx> coeffs() { return coeffs_; }
  std::span<const cplx> coeffs() const { return coeffs_; }

  /// a_{-n} == conj(a_n) within tol (the field is a real function).
  bool is_real(double tol = 0.0) const;
  /// a_{-n} == a_n within tol.
  bool is_cosine_symmetric(double tol = 0.0) const;
  bool all_finite() const;

  /// Same function with M modes: zero-padded or truncated.
  FourierField resized(int n_modes) const;
  /// Coefficients of conj(u(x)): b_n = conj(a_{-n}).
  FourierField conjugated() const;
  /// Point evaluation by direct summation (band-limited interpolation).
  cplx evaluate(double x) const;

  FourierField& operator+=(const FourierField& other);
  FourierField& operator*=(cplx s);

  friend bool operator==(const FourierField&, const FourierField&) = default;

 private:
  int n_modes_;
  double period_;
  std::vector<cplx> coeffs_;
};

FourierField operator+(FourierField a, const FourierField& b);
FourierField operator*(cplx s, FourierField a);

/// Values at x_j = j*period/M, j = 0..M-1.
struct GridField {
  std::vector<cplx> values;
  double period = 1.0;

  std::size_t size() const { return values.size(); }
  double x(std::size_t j) const { return period * static_cast<double>(j) / static_cast<double>(values.size()); }
};

/// Requires M >= 2N+1 (no aliasing); throws std::invalid_argument otherwise.
GridField to_grid(const FourierField& f, std::size_t M);
/// Inverse of to_grid keeping modes |n| <= n_modes; requires M >= 2*n_modes+1.
FourierField from_grid(const GridField& g, int n_modes);

/// Grid size used for sup norms and pointwise diagnostics: >= 4(2N+1).
std::size_t oversampled_size(int n_modes);
/// Grid size for the dealiased product: >= 3N+1.
std::size_t dealiased_size(int n_modes);

/// Fourier coefficients of u^2 on the retained modes |n| <= N. Computed
/// pseudo-spectrally on a zero-padded grid, so it equals the truncated
/// convolution sum_{n1+n2=n, |n1|,|n2|<=N} a_{n1} a_{n2} exactly.
FourierField nonlinear_square(const FourierField& f);

double sup_norm(const FourierField& f);
double l2_norm_sq(const FourierField& f);
/// sum_{n != 0} |a_n|
double l1_norm_higher(const FourierField& f);

/// E_0 = |a_0|^2/|a|^2, E_n = (|a_n|^2 + |a_{-n}|^2)/|a|^2 for 1 <= n <= n_max
/// (= 2|a_n|^2/|a|^2 for cosine-symmetric fields). Entries past N are zero.
/// Throws std::domain_error for the zero field.
std::vector<double> energy_proportions(const FourierField& f, int n_max);

enum class Trapping { ForwardTrapped, BackwardTrapped, BothTrapped, NotTrapped };

std::string_view to_string(Trapping t);

/// Cone criterion for i u_t = u_xx + u^2: sum_{n!=0}|a_n| < e^{-pi/2}|a_0|,
/// classified by phi = arg(a_0) in [0, 2pi).
Trapping trapping_status(const FourierField& f);

}  // namespace nlslab
