#include "nlslab/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace nlslab {

RationalComplex::RationalComplex(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

RationalComplex& RationalComplex::operator+=(const RationalComplex& o) {
  re_ += o.re_;
  if (sgn(o.im_) != 0) im_ += o.im_;
  return *this;
}

RationalComplex& RationalComplex::operator-=(const RationalComplex& o) {
  re_ -= o.re_;
  if (sgn(o.im_) != 0) im_ -= o.im_;
  return *this;
}

RationalComplex& RationalComplex::operator*=(const RationalComplex& o) {
  if (is_real() && o.is_real()) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

RationalComplex& RationalComplex::operator/=(const RationalComplex& o) {
  if (o.is_zero()) throw std::domain_error("RationalComplex: division by zero");
  if (o.is_real()) {
    re_ /= o.re_;
    if (sgn(im_) != 0) im_ /= o.re_;
    return *this;
  }
  const mpq_class den = o.re_ * o.re_ + o.im_ * o.im_;
  mpq_class r = (re_ * o.re_ + im_ * o.im_) / den;
  mpq_class i = (im_ * o.re_ - re_ * o.im_) / den;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

void RationalComplex::add_product(const RationalComplex& a, const RationalComplex& b) {
  if (a.is_zero() || b.is_zero()) return;
  if (a.is_real() && b.is_real()) {
    re_ += a.re_ * b.re_;
    return;
  }
  re_ += a.re_ * b.re_ - a.im_ * b.im_;
  im_ += a.re_ * b.im_ + a.im_ * b.re_;
}

RationalComplex RationalComplex::operator-() const { return {-re_, -im_}; }

std::string RationalComplex::to_string(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  return c.get_str(10);
}

mpq_class RationalComplex::parse(const std::string& s) {
  auto bad = [&] { throw std::invalid_argument("malformed rational '" + s + "'"); };
  if (s.empty()) bad();
  const auto slash = s.find('/');
  auto digits_ok = [](const std::string& t, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  const std::string num = s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false)) bad();
  mpz_class p(num[0] == '+' ? num.substr(1) : num, 10);
  mpz_class q(den, 10);
  if (q == 0) bad();
  mpq_class r(p, q);
  r.canonicalize();
  return r;
}

}  // namespace nlslab
