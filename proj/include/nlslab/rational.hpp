#pragma once

#include <complex>
#include <string>

#include <gmpxx.h>

namespace nlslab {

/// Exact complex number with arbitrary-precision rational parts.
class RationalComplex {
 public:
  RationalComplex() = default;
  RationalComplex(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  RationalComplex(mpq_class re, mpq_class im = 0);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  RationalComplex& operator+=(const RationalComplex& o);
  RationalComplex& operator-=(const RationalComplex& o);
  RationalComplex& operator*=(const RationalComplex& o);
  RationalComplex& operator/=(const RationalComplex& o);  // throws std::domain_error on zero

  /// this += a * b without a temporary; skips work when either factor is real.
  void add_product(const RationalComplex& a, const RationalComplex& b);

  RationalComplex operator-() const;
  friend RationalComplex operator+(RationalComplex a, const RationalComplex& b) { return a += b; }
  friend RationalComplex operator-(RationalComplex a, const RationalComplex& b) { return a -= b; }
  friend RationalComplex operator*(RationalComplex a, const RationalComplex& b) { return a *= b; }
  friend RationalComplex operator/(RationalComplex a, const RationalComplex& b) { return a /= b; }
  friend bool operator==(const RationalComplex& a, const RationalComplex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  /// "p/q", or "p" when q = 1.
  static std::string to_string(const mpq_class& q);
  /// Accepts "p", "-p", "p/q". Throws std::invalid_argument on malformed input.
  static mpq_class parse(const std::string& s);

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

}  // namespace nlslab
