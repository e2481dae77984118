#include "nlslab/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include <Eigen/Dense>

namespace nlslab {

int total_order(const MultiIndex& k) { return std::accumulate(k.begin(), k.end(), 0); }

bool GradedLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const int oa = total_order(a), ob = total_order(b);
  if (oa != ob) return oa < ob;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

void compositions(int d, int m, MultiIndex& cur, int pos, std::vector<MultiIndex>& out) {
  if (pos == d - 1) {
    cur[static_cast<std::size_t>(pos)] = m;
    out.push_back(cur);
    return;
  }
  for (int v = m; v >= 0; --v) {
    cur[static_cast<std::size_t>(pos)] = v;
    compositions(d, m - v, cur, pos + 1, out);
  }
}

MultiIndex unit(int d, int j) {
  MultiIndex e(static_cast<std::size_t>(d), 0);
  e[static_cast<std::size_t>(j)] = 1;
  return e;
}

bool all_zero(const RationalVector& v) {
  return std::all_of(v.begin(), v.end(), [](const RationalComplex& c) { return c.is_zero(); });
}

mpq_class dot(const MultiIndex& k, std::span<const mpq_class> lambda) {
  mpq_class s = 0;
  for (std::size_t j = 0; j < k.size(); ++j) s += k[j] * lambda[j];
  return s;
}

// Calls fn(m) for every m with 0 <= m <= k componentwise.
template <class Fn>
void for_each_below(const MultiIndex& k, Fn&& fn) {
  MultiIndex m(k.size(), 0);
  while (true) {
    fn(m);
    std::size_t j = 0;
    while (j < k.size() && m[j] == k[j]) m[j++] = 0;
    if (j == k.size()) return;
    ++m[j];
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices(int d, int lo, int hi) {
  std::vector<MultiIndex> out;
  if (d <= 0) return out;
  MultiIndex cur(static_cast<std::size_t>(d), 0);
  for (int m = std::max(lo, 0); m <= hi; ++m) compositions(d, m, cur, 0, out);
  return out;
}

QuadraticField QuadraticField::from_galerkin(const GalerkinSystem& sys) {
  QuadraticField q;
  for (int n = 0; n <= sys.n_modes; ++n) q.linear.emplace_back(-n * n);
  q.couplings = sys.couplings;
  return q;
}

void QuadraticField::add_bilinear(RationalVector& out, const RationalVector& a, const RationalVector& b,
                                  const RationalComplex& scale) const {
  RationalComplex acc;
  for (const auto& t : couplings) {
    const auto i = static_cast<std::size_t>(t.i), j = static_cast<std::size_t>(t.j);
    acc = RationalComplex{};
    if (i == j) {
      acc.add_product(a[i], b[j]);
      acc *= RationalComplex(t.coef);
    } else {
      acc.add_product(a[i], b[j]);
      acc.add_product(a[j], b[i]);
      acc *= RationalComplex(mpq_class(t.coef, 2));
    }
    if (acc.is_zero()) continue;
    acc *= scale;
    out[static_cast<std::size_t>(t.out)] += acc;
  }
}

ResonanceSet detect_resonances(std::span<const mpq_class> lambda, std::span<const mpq_class> mu, int max_order) {
  ResonanceSet out;
  for (const auto& k : multi_indices(static_cast<int>(lambda.size()), 2, max_order)) {
    const mpq_class kl = dot(k, lambda);
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (kl == mu[i]) out.push_back({k, static_cast<int>(i)});
  }
  return out;
}

ResonanceSet detect_resonances(int n_modes, int max_order) {
  std::vector<mpq_class> lambda, mu;
  for (int n = 0; n <= n_modes; ++n) {
    mu.emplace_back(-n * n);
    if (n > 0) lambda.emplace_back(-n * n);
  }
  return detect_resonances(lambda, mu, max_order);
}

ResonanceSet TaylorModel::f_support() const {
  ResonanceSet out;
  for (const auto& [k, v] : f) {
    if (total_order(k) < 2) continue;
    for (int j = 0; j < dim_domain; ++j)
      if (!v[static_cast<std::size_t>(j)].is_zero()) out.push_back({k, tangent_component[static_cast<std::size_t>(j)]});
  }
  return out;
}

TaylorModel TaylorModel::truncated(int k) const {
  TaylorModel m = *this;
  m.order = std::min(order, k);
  std::erase_if(m.W, [k](const auto& kv) { return total_order(kv.first) > k; });
  std::erase_if(m.f, [k](const auto& kv) { return total_order(kv.first) > k; });
  return m;
}

TaylorModel solve_cohomological(const QuadraticField& field, int order) {
  if (order < 1) throw std::invalid_argument("solve_cohomological: order must be >= 1");
  const int n = field.dimension();
  TaylorModel model;
  model.dim_range = n;
  model.order = order;
  model.range_eigenvalues = field.linear;
  for (int i = 0; i < n; ++i)
    if (sgn(field.linear[static_cast<std::size_t>(i)]) < 0) {
      model.tangent_component.push_back(i);
      model.eigenvalues.push_back(field.linear[static_cast<std::size_t>(i)]);
    }
  const int d = static_cast<int>(model.eigenvalues.size());
  model.dim_domain = d;
  if (d == 0) return model;
  for (std::size_t a = 0; a < model.eigenvalues.size(); ++a)
    for (std::size_t b = a + 1; b < model.eigenvalues.size(); ++b)
      if (model.eigenvalues[a] == model.eigenvalues[b])
        throw std::invalid_argument("solve_cohomological: repeated tangent eigenvalue");

  const std::vector<MultiIndex> all = multi_indices(d, 1, order);
  std::map<MultiIndex, std::size_t, GradedLess> pos;
  for (std::size_t p = 0; p < all.size(); ++p) pos.emplace(all[p], p);
  std::vector<RationalVector> W(all.size(), RationalVector(static_cast<std::size_t>(n)));
  std::vector<bool> zero(all.size(), true);
  // f is sparse: (position, tangent vector)
  std::vector<std::pair<std::size_t, RationalVector>> f;

  for (int j = 0; j < d; ++j) {
    const std::size_t p = pos.at(unit(d, j));
    W[p][static_cast<std::size_t>(model.tangent_component[static_cast<std::size_t>(j)])] = RationalComplex(1);
    zero[p] = false;
    RationalVector fj(static_cast<std::size_t>(d));
    fj[static_cast<std::size_t>(j)] = RationalComplex(model.eigenvalues[static_cast<std::size_t>(j)]);
    f.emplace_back(p, std::move(fj));
  }

  const RationalComplex one(1), two(2);
  for (std::size_t p = static_cast<std::size_t>(d); p < all.size(); ++p) {
    const MultiIndex& k = all[p];
    const int ok = total_order(k);
    RationalVector E(static_cast<std::size_t>(n));

    // order-k part of B(W, W), each unordered pair once
    MultiIndex rest(k.size());
    for_each_below(k, [&](const MultiIndex& m) {
      const int om = total_order(m);
      if (om < 1 || om >= ok) return;
      for (std::size_t i = 0; i < k.size(); ++i) rest[i] = k[i] - m[i];
      const std::size_t pm = pos.at(m), pr = pos.at(rest);
      if (pm > pr || zero[pm] || zero[pr]) return;
      field.add_bilinear(E, W[pm], W[pr], pm == pr ? one : two);
    });

    // order-k part of DW f, minus the two terms that involve W_k or f_k
    MultiIndex m(k.size());
    for (const auto& [pf, fv] : f) {
      const MultiIndex& q = all[pf];
      for (int j = 0; j < d; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (fv[uj].is_zero()) continue;
        bool ok_m = true;
        for (std::size_t i = 0; i < k.size(); ++i) {
          m[i] = k[i] - q[i] + (i == uj ? 1 : 0);
          if (m[i] < 0) ok_m = false;
        }
        if (!ok_m || m[uj] == 0 || m == k) continue;
        const std::size_t pm = pos.at(m);
        if (zero[pm]) continue;
        RationalComplex c = fv[uj];
        c *= RationalComplex(m[uj]);
        for (int i = 0; i < n; ++i) {
          RationalComplex t = W[pm][static_cast<std::size_t>(i)];
          if (t.is_zero()) continue;
          t *= c;
          E[static_cast<std::size_t>(i)] -= t;
        }
      }
    }

    const mpq_class kl = dot(k, model.eigenvalues);
    RationalVector fk(static_cast<std::size_t>(d));
    bool resonant = false;
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const mpq_class den = field.linear[ui] - kl;
      if (sgn(den) == 0) {
        const auto it = std::find(model.tangent_component.begin(), model.tangent_component.end(), i);
        if (it == model.tangent_component.end())
          throw CohomologyError("solve_cohomological: resonance with a non-tangent eigenvalue at order " +
                                std::to_string(ok));
        if (!E[ui].is_zero()) {
          fk[static_cast<std::size_t>(it - model.tangent_component.begin())] = E[ui];
          resonant = true;
        }
        continue;
      }
      if (E[ui].is_zero()) continue;
      W[p][ui] = -(E[ui] / RationalComplex(den));
    }
    zero[p] = all_zero(W[p]);
    if (resonant) f.emplace_back(p, std::move(fk));
  }

  for (std::size_t p = 0; p < all.size(); ++p) model.W.emplace(all[p], std::move(W[p]));
  for (auto& [p, v] : f) model.f.emplace(all[p], std::move(v));
  return model;
}

TaylorModel solve_cohomological(const GalerkinSystem& sys, int order) {
  return solve_cohomological(QuadraticField::from_galerkin(sys), order);
}

ModelEvaluator::ModelEvaluator(const TaylorModel& model)
    : d_(model.dim_domain), n_(model.dim_range), order_(model.order) {
  for (const auto& [k, v] : model.W) {
    if (all_zero(v)) continue;
    Term t{k, {}};
    for (const auto& c : v) t.c.push_back(c.to_complex());
    order_ = std::max(order_, total_order(k));
    w_terms_.push_back(std::move(t));
  }
  for (const auto& [k, v] : model.f) {
    Term t{k, {}};
    for (const auto& c : v) t.c.push_back(c.to_complex());
    order_ = std::max(order_, total_order(k));
    f_terms_.push_back(std::move(t));
  }
}

std::vector<std::vector<cplx>> ModelEvaluator::powers(std::span<const cplx> sigma) const {
  if (static_cast<int>(sigma.size()) != d_) throw std::invalid_argument("ModelEvaluator: sigma has wrong dimension");
  std::vector<std::vector<cplx>> pw(static_cast<std::size_t>(d_), std::vector<cplx>(static_cast<std::size_t>(order_ + 1)));
  for (std::size_t j = 0; j < pw.size(); ++j) {
    pw[j][0] = 1.0;
    for (int e = 1; e <= order_; ++e) pw[j][static_cast<std::size_t>(e)] = pw[j][static_cast<std::size_t>(e - 1)] * sigma[j];
  }
  return pw;
}

std::vector<cplx> ModelEvaluator::W(std::span<const cplx> sigma) const {
  const auto pw = powers(sigma);
  std::vector<cplx> out(static_cast<std::size_t>(n_));
  for (const auto& t : w_terms_) {
    cplx mono = 1.0;
    for (std::size_t j = 0; j < t.k.size(); ++j) mono *= pw[j][static_cast<std::size_t>(t.k[j])];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += t.c[i] * mono;
  }
  return out;
}

std::vector<cplx> ModelEvaluator::f(std::span<const cplx> sigma) const {
  const auto pw = powers(sigma);
  std::vector<cplx> out(static_cast<std::size_t>(d_));
  for (const auto& t : f_terms_) {
    cplx mono = 1.0;
    for (std::size_t j = 0; j < t.k.size(); ++j) mono *= pw[j][static_cast<std::size_t>(t.k[j])];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += t.c[i] * mono;
  }
  return out;
}

std::vector<cplx> ModelEvaluator::DW(std::span<const cplx> sigma) const {
  const auto pw = powers(sigma);
  std::vector<cplx> J(static_cast<std::size_t>(n_ * d_));
  for (const auto& t : w_terms_)
    for (int j = 0; j < d_; ++j) {
      const int kj = t.k[static_cast<std::size_t>(j)];
      if (kj == 0) continue;
      cplx mono = static_cast<double>(kj);
      for (std::size_t l = 0; l < t.k.size(); ++l)
        mono *= pw[l][static_cast<std::size_t>(t.k[l] - (static_cast<int>(l) == j ? 1 : 0))];
      for (int i = 0; i < n_; ++i) J[static_cast<std::size_t>(i * d_ + j)] += t.c[static_cast<std::size_t>(i)] * mono;
    }
  return J;
}

std::vector<cplx> evaluate_W(const TaylorModel& model, std::span<const cplx> sigma) {
  for (const auto& s : sigma)
    if (std::abs(s) > kWorkingRadius) {
      std::cerr << "warning: |sigma| = " << std::abs(s) << " exceeds the working radius " << kWorkingRadius << '\n';
      break;
    }
  return ModelEvaluator(model).W(sigma);
}

std::vector<cplx> evaluate_f(const TaylorModel& model, std::span<const cplx> sigma) {
  return ModelEvaluator(model).f(sigma);
}

std::vector<cplx> solve_sigma_for_constraints(const TaylorModel& model, std::span<const Constraint> targets,
                                              const NewtonOptions& opt) {
  const int d = model.dim_domain;
  if (static_cast<int>(targets.size()) != d)
    throw std::invalid_argument("solve_sigma_for_constraints: need exactly " + std::to_string(d) + " constraints");
  for (const auto& c : targets)
    if (c.component < 0 || c.component >= model.dim_range)
      throw std::invalid_argument("solve_sigma_for_constraints: constraint component out of range");

  const ModelEvaluator ev(model);
  std::vector<cplx> sigma(static_cast<std::size_t>(d));
  if (opt.initial_guess) {
    if (static_cast<int>(opt.initial_guess->size()) != d)
      throw std::invalid_argument("solve_sigma_for_constraints: initial guess has wrong dimension");
    sigma = *opt.initial_guess;
  } else {
    for (const auto& c : targets)
      for (int j = 0; j < d; ++j)
        if (model.tangent_component[static_cast<std::size_t>(j)] == c.component) sigma[static_cast<std::size_t>(j)] = c.value;
  }

  auto residual = [&](std::span<const cplx> s) {
    const auto w = ev.W(s);
    Eigen::VectorXcd r(d);
    for (int c = 0; c < d; ++c) {
      const auto& t = targets[static_cast<std::size_t>(c)];
      r(c) = w[static_cast<std::size_t>(t.component)] - t.value;
    }
    return r;
  };

  Eigen::VectorXcd r = residual(sigma);
  double rn = r.cwiseAbs().maxCoeff();
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (rn < opt.tolerance) return sigma;
    const auto J = ev.DW(sigma);
    Eigen::MatrixXcd A(d, d);
    for (int c = 0; c < d; ++c)
      for (int j = 0; j < d; ++j)
        A(c, j) = J[static_cast<std::size_t>(targets[static_cast<std::size_t>(c)].component * d + j)];
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
    if (!lu.isInvertible()) throw ConvergenceError("solve_sigma_for_constraints: singular Jacobian", rn);
    const Eigen::VectorXcd step = lu.solve(r);
    double damping = 1.0;
    bool accepted = false;
    for (int half = 0; half < 40; ++half, damping *= 0.5) {
      std::vector<cplx> trial = sigma;
      for (int j = 0; j < d; ++j) trial[static_cast<std::size_t>(j)] -= damping * step(j);
      const Eigen::VectorXcd rt = residual(trial);
      const double tn = rt.cwiseAbs().maxCoeff();
      if (std::isfinite(tn) && tn < rn) {
        sigma = std::move(trial);
        r = rt;
        rn = tn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (rn < opt.tolerance) return sigma;
  throw ConvergenceError("solve_sigma_for_constraints: no convergence, residual " + std::to_string(rn), rn);
}

namespace {

double max_abs(const RationalVector& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c.to_complex()));
  return m;
}

struct LineFit {
  double intercept;
  bool ok;
};

// least squares r = c0 + c1/m over the positive entries with m in [lo, hi]
LineFit fit_inverse_order(const std::vector<double>& r, int lo, int hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int m = lo; m <= hi; ++m) {
    const double y = r[static_cast<std::size_t>(m - 1)];
    if (!(y > 0.0)) continue;
    const double x = 1.0 / m;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt < 3) return {0.0, false};
  const double det = cnt * sxx - sx * sx;
  const double c1 = (cnt * sxy - sx * sy) / det;
  const double c0 = (sy - c1 * sx) / cnt;
  return {c0, c0 > 0.0};
}

}  // namespace

RadiusEstimate estimate_radius(const TaylorModel& model) {
  RadiusEstimate est;
  const int K = model.order;
  est.per_order.assign(static_cast<std::size_t>(std::max(K, 0)), 0.0);
  for (const auto& [k, v] : model.W) {
    const int m = total_order(k);
    if (m < 1 || m > K) continue;
    auto& slot = est.per_order[static_cast<std::size_t>(m - 1)];
    slot = std::max(slot, max_abs(v));
  }
  bool nonlinear = false;
  for (int m = 1; m <= K; ++m) {
    auto& slot = est.per_order[static_cast<std::size_t>(m - 1)];
    if (m >= 2 && slot > 0.0) nonlinear = true;
    slot = slot > 0.0 ? std::pow(slot, 1.0 / m) : 0.0;
  }
  const int d = model.dim_domain;
  est.per_axis.assign(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(std::max(K, 0)), 0.0));
  est.axis_radius.assign(static_cast<std::size_t>(d), std::numeric_limits<double>::infinity());
  if (!nonlinear) {
    est.infinite = true;
    return est;
  }
  if (K < 10) throw std::invalid_argument("estimate_radius: need order >= 10");

  for (int j = 0; j < d; ++j) {
    auto& seq = est.per_axis[static_cast<std::size_t>(j)];
    MultiIndex e(static_cast<std::size_t>(d), 0);
    for (int m = 1; m <= K; ++m) {
      e[static_cast<std::size_t>(j)] = m;
      const auto it = model.W.find(e);
      const double c = it == model.W.end() ? 0.0 : max_abs(it->second);
      seq[static_cast<std::size_t>(m - 1)] = c > 0.0 ? std::pow(c, 1.0 / m) : 0.0;
    }
    const LineFit lf = fit_inverse_order(seq, K / 2, K);
    if (lf.ok) est.axis_radius[static_cast<std::size_t>(j)] = 1.0 / lf.intercept;
  }

  const LineFit lf = fit_inverse_order(est.per_order, K / 2, K);
  if (!lf.ok) {
    est.degenerate = true;
    est.radius = std::numeric_limits<double>::quiet_NaN();
    return est;
  }
  est.radius = 1.0 / lf.intercept;
  return est;
}

}  // namespace nlslab
