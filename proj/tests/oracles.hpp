#pragma once

// Reference computations kept deliberately naive: direct sums, brute-force
// enumeration, and polynomial algebra written from scratch. They share no
// code with the library beyond its data types.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <vector>

#include <gmpxx.h>

#include "nlslab/field.hpp"
#include "nlslab/manifold.hpp"

namespace oracle {

using nlslab::cplx;
using nlslab::FourierField;

inline FourierField direct_square(const FourierField& f) {
  const int N = f.n_modes();
  FourierField out(N, f.period());
  for (int n = -N; n <= N; ++n)
    for (int m = -N; m <= N; ++m)
      if (std::abs(n - m) <= N) out[n] += f[m] * f[n - m];
  return out;
}

inline cplx direct_value(const FourierField& f, double x) {
  cplx s = 0;
  for (int n = -f.n_modes(); n <= f.n_modes(); ++n)
    s += f[n] * std::exp(cplx(0, 2 * std::numbers::pi * n * x / f.period()));
  return s;
}

inline double sampled_sup(const FourierField& f, int samples) {
  double s = 0;
  for (int j = 0; j < samples; ++j) s = std::max(s, std::abs(direct_value(f, f.period() * j / samples)));
  return s;
}

// mean of |u|^2 by the trapezoid rule, exact for trigonometric polynomials of degree < M
inline double quadrature_l2(const FourierField& f, int M) {
  double s = 0;
  for (int j = 0; j < M; ++j) s += std::norm(direct_value(f, f.period() * j / M));
  return s / M;
}

struct Res {
  std::vector<int> k;
  int target;
  bool operator<(const Res& o) const { return std::tie(k, target) < std::tie(o.k, o.target); }
  bool operator==(const Res& o) const { return k == o.k && target == o.target; }
};

// sum_j k_j j^2 = i^2 over every k with 2 <= |k| <= K in N variables
inline std::vector<Res> brute_force_resonances(int N, int K) {
  std::vector<Res> out;
  std::vector<int> k(static_cast<std::size_t>(N), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == N) {
      const int order = K - left;
      if (order < 2) return;
      long s = 0;
      for (int j = 0; j < N; ++j) s += static_cast<long>(k[static_cast<std::size_t>(j)]) * (j + 1) * (j + 1);
      for (int i = 0; i <= N; ++i)
        if (s == static_cast<long>(i) * i) out.push_back({k, i});
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, left - v);
    }
    k[static_cast<std::size_t>(pos)] = 0;
  };
  rec(0, K);
  std::sort(out.begin(), out.end());
  return out;
}

// --------------------------------------------------------------------------
// Sparse real polynomials over Q in d variables, truncated at a total order.

using Mono = std::vector<int>;
using Poly = std::map<Mono, mpq_class>;

inline int degree(const Mono& m) {
  int s = 0;
  for (const int v : m) s += v;
  return s;
}

inline void add_to(Poly& p, const Mono& m, const mpq_class& c) {
  if (sgn(c) == 0) return;
  auto [it, fresh] = p.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (sgn(it->second) == 0) p.erase(it);
  }
}

inline Poly multiply(const Poly& a, const Poly& b, int max_order) {
  std::vector<std::pair<Mono, mpq_class>> bs(b.begin(), b.end());
  std::sort(bs.begin(), bs.end(), [](const auto& x, const auto& y) { return degree(x.first) < degree(y.first); });
  Poly out;
  Mono m;
  for (const auto& [ma, ca] : a) {
    const int da = degree(ma);
    for (const auto& [mb, cb] : bs) {
      if (da + degree(mb) > max_order) break;
      m = ma;
      for (std::size_t j = 0; j < m.size(); ++j) m[j] += mb[j];
      add_to(out, m, ca * cb);
    }
  }
  return out;
}

inline Poly derivative(const Poly& p, std::size_t j) {
  Poly out;
  for (const auto& [mono, coeff] : p) {
    if (mono[j] == 0) continue;
    Mono m = mono;
    mpq_class c = coeff * m[j];
    --m[j];
    add_to(out, m, c);
  }
  return out;
}

/// Coefficients of F(W(s)) - DW(s) f(s) through total order K for the heat
/// Galerkin field on modes 0..N (2pi-periodic, cosine symmetric):
///   F_n(a) = -n^2 a_n + sum_{m=-N..N, |n-m|<=N} a_|m| a_|n-m|.
/// Only the real parts of the model are read; a nonzero imaginary part is
/// reported as a residual term too.
struct InvarianceReport {
  long nonzero = 0;       // coefficients of the residual that are not exactly 0
  long imaginary = 0;     // model coefficients with nonzero imaginary part
};

inline InvarianceReport invariance_residual(const nlslab::TaylorModel& model) {
  const int N = model.dim_range - 1;
  const int d = model.dim_domain;
  const int K = model.order;
  InvarianceReport rep;
  std::vector<Poly> W(static_cast<std::size_t>(N + 1)), f(static_cast<std::size_t>(d));
  for (const auto& [k, v] : model.W)
    for (int n = 0; n <= N; ++n) {
      if (sgn(v[static_cast<std::size_t>(n)].im()) != 0) ++rep.imaginary;
      add_to(W[static_cast<std::size_t>(n)], k, v[static_cast<std::size_t>(n)].re());
    }
  for (const auto& [k, v] : model.f)
    for (int j = 0; j < d; ++j) {
      if (sgn(v[static_cast<std::size_t>(j)].im()) != 0) ++rep.imaginary;
      add_to(f[static_cast<std::size_t>(j)], k, v[static_cast<std::size_t>(j)].re());
    }
  std::map<std::pair<int, int>, Poly> products;
  auto product = [&](int a, int b) -> const Poly& {
    if (a > b) std::swap(a, b);
    auto it = products.find({a, b});
    if (it == products.end())
      it = products.emplace(std::make_pair(a, b), multiply(W[static_cast<std::size_t>(a)], W[static_cast<std::size_t>(b)], K))
               .first;
    return it->second;
  };
  for (int n = 0; n <= N; ++n) {
    Poly r;
    for (const auto& [m, c] : W[static_cast<std::size_t>(n)]) add_to(r, m, -mpq_class(n * n) * c);
    for (int m = -N; m <= N; ++m)
      if (std::abs(n - m) <= N)
        for (const auto& [mono, c] : product(std::abs(m), std::abs(n - m))) add_to(r, mono, c);
    for (int j = 0; j < d; ++j) {
      const Poly dw = derivative(W[static_cast<std::size_t>(n)], static_cast<std::size_t>(j));
      for (const auto& [mono, c] : multiply(dw, f[static_cast<std::size_t>(j)], K)) add_to(r, mono, -c);
    }
    for (const auto& [mono, c] : r)
      if (degree(mono) <= K && sgn(c) != 0) ++rep.nonzero;
  }
  return rep;
}

// --------------------------------------------------------------------------
// Floating-point parameterization recursion for the heat Galerkin field, with
// the same gauge (resonant component of W set to zero, obstruction kept in f).

struct FloatModel {
  std::map<Mono, std::vector<double>> W, f;
};

inline FloatModel float_recursion(int N, int K) {
  const int d = N;
  FloatModel m;
  auto unit = [&](int j) {
    Mono e(static_cast<std::size_t>(d), 0);
    e[static_cast<std::size_t>(j)] = 1;
    return e;
  };
  for (int j = 0; j < d; ++j) {
    std::vector<double> w(static_cast<std::size_t>(N + 1), 0.0), fl(static_cast<std::size_t>(d), 0.0);
    w[static_cast<std::size_t>(j + 1)] = 1.0;
    fl[static_cast<std::size_t>(j)] = -(j + 1.0) * (j + 1.0);
    m.W[unit(j)] = w;
    m.f[unit(j)] = fl;
  }
  auto get = [](const std::map<Mono, std::vector<double>>& mp, const Mono& k) -> const std::vector<double>* {
    const auto it = mp.find(k);
    return it == mp.end() ? nullptr : &it->second;
  };
  for (int order = 2; order <= K; ++order) {
    std::vector<Mono> ks;
    Mono k(static_cast<std::size_t>(d), 0);
    std::function<void(int, int)> gen = [&](int pos, int left) {
      if (pos == d - 1) {
        k[static_cast<std::size_t>(pos)] = left;
        ks.push_back(k);
        return;
      }
      for (int v = left; v >= 0; --v) {
        k[static_cast<std::size_t>(pos)] = v;
        gen(pos + 1, left - v);
      }
    };
    gen(0, order);
    for (const Mono& kk : ks) {
      // E = [B(W,W)]_k - sum over (m, p) != (k, e_j) of m_j W_m f_p[j] with m - e_j + p = k
      std::vector<double> E(static_cast<std::size_t>(N + 1), 0.0);
      for (const auto& [ma, wa] : m.W) {
        Mono mb(kk);
        bool ok = true;
        for (std::size_t j = 0; j < mb.size(); ++j) {
          mb[j] -= ma[j];
          ok = ok && mb[j] >= 0;
        }
        if (!ok) continue;
        const auto* wb = get(m.W, mb);
        if (!wb) continue;
        for (int n = 0; n <= N; ++n)
          for (int q = -N; q <= N; ++q)
            if (std::abs(n - q) <= N)
              E[static_cast<std::size_t>(n)] += wa[static_cast<std::size_t>(std::abs(q))] *
                                                (*wb)[static_cast<std::size_t>(std::abs(n - q))];
      }
      for (const auto& [mm, wm] : m.W)
        for (int j = 0; j < d; ++j) {
          if (mm[static_cast<std::size_t>(j)] == 0) continue;
          Mono p(kk);
          bool ok = true;
          for (std::size_t i = 0; i < p.size(); ++i) {
            p[i] -= mm[i] - (static_cast<int>(i) == j ? 1 : 0);
            ok = ok && p[i] >= 0;
          }
          if (!ok || degree(p) == 0) continue;
          if (mm == kk) continue;
          const auto* fp = get(m.f, p);
          if (!fp) continue;
          for (int n = 0; n <= N; ++n)
            E[static_cast<std::size_t>(n)] -= mm[static_cast<std::size_t>(j)] * wm[static_cast<std::size_t>(n)] *
                                              (*fp)[static_cast<std::size_t>(j)];
        }
      double kl = 0.0;
      for (int j = 0; j < d; ++j) kl += kk[static_cast<std::size_t>(j)] * -(j + 1.0) * (j + 1.0);
      std::vector<double> w(static_cast<std::size_t>(N + 1), 0.0), fk(static_cast<std::size_t>(d), 0.0);
      bool any_f = false;
      for (int n = 0; n <= N; ++n) {
        const double mu = -static_cast<double>(n) * n;
        if (mu == kl) {
          fk[static_cast<std::size_t>(n - 1)] = E[static_cast<std::size_t>(n)];
          any_f = any_f || E[static_cast<std::size_t>(n)] != 0.0;
        } else {
          w[static_cast<std::size_t>(n)] = -E[static_cast<std::size_t>(n)] / (mu - kl);
        }
      }
      m.W[kk] = w;
      if (any_f) m.f[kk] = fk;
    }
  }
  return m;
}

// --------------------------------------------------------------------------

/// Classical RK4 on a small complex system, written out once more.
template <class Rhs>
std::vector<cplx> rk4(Rhs rhs, std::vector<cplx> y, double t_end, int steps) {
  const double h = t_end / steps;
  auto axpy = [](const std::vector<cplx>& a, const std::vector<cplx>& b, double s) {
    std::vector<cplx> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  for (int s = 0; s < steps; ++s) {
    const auto k1 = rhs(y);
    const auto k2 = rhs(axpy(y, k1, h / 2));
    const auto k3 = rhs(axpy(y, k2, h / 2));
    const auto k4 = rhs(axpy(y, k3, h));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return y;
}

/// sigma' = mu f(sigma) with f read monomial by monomial from the model.
inline std::vector<cplx> model_flow_rhs(const nlslab::TaylorModel& model, cplx mu, const std::vector<cplx>& s) {
  std::vector<cplx> out(s.size(), 0.0);
  for (const auto& [k, v] : model.f) {
    cplx mono = 1.0;
    for (std::size_t j = 0; j < k.size(); ++j)
      for (int e = 0; e < k[j]; ++e) mono *= s[j];
    for (std::size_t j = 0; j < v.size(); ++j) out[j] += mu * v[j].to_complex() * mono;
  }
  return out;
}

/// Second-order central differences (fourth-order in the interior) of
/// U'' - (i/2) y U' - i U + U^2 on a uniform grid; ends left at NaN.
inline std::vector<cplx> fd_typeI_residual(const std::vector<double>& y, const std::vector<cplx>& U) {
  const std::size_t n = U.size();
  const double h = y[1] - y[0];
  std::vector<cplx> r(n, cplx(std::nan(""), std::nan("")));
  const cplx I(0, 1);
  for (std::size_t j = 2; j + 2 < n; ++j) {
    const cplx d1 = (-U[j + 2] + 8.0 * U[j + 1] - 8.0 * U[j - 1] + U[j - 2]) / (12 * h);
    const cplx d2 = (-U[j + 2] + 16.0 * U[j + 1] - 30.0 * U[j] + 16.0 * U[j - 1] - U[j - 2]) / (12 * h * h);
    r[j] = d2 - 0.5 * I * y[j] * d1 - I * U[j] + U[j] * U[j];
  }
  return r;
}

}  // namespace oracle
