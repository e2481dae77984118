#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nlslab/galerkin.hpp"
#include "nlslab/manifold.hpp"
#include "oracles.hpp"

using namespace nlslab;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<cplx> hand_n3(const std::vector<cplx>& a) {
  const cplx a0 = a[0], a1 = a[1], a2 = a[2], a3 = a[3];
  return {a0 * a0 + 2.0 * a1 * a1 + 2.0 * a2 * a2 + 2.0 * a3 * a3,
          -a1 + 2.0 * a0 * a1 + 2.0 * a1 * a2 + 2.0 * a2 * a3,
          -4.0 * a2 + 2.0 * a0 * a2 + a1 * a1 + 2.0 * a1 * a3,
          -9.0 * a3 + 2.0 * a0 * a3 + 2.0 * a1 * a2};
}

double dist(std::span<const cplx> a, std::span<const cplx> b) {
  double e = 0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

TEST_SUITE("galerkin") {
  TEST_CASE("right-hand side") {
    const auto s1 = GalerkinSystem::make(1, 0.0);
    const std::vector<cplx> a{1.0, 0.0};
    CHECK(dist(galerkin_rhs(a, s1), std::vector<cplx>{1.0, 0.0}) == 0.0);

    const auto s3 = GalerkinSystem::make(3, 0.0);
    const std::vector<cplx> b{0.0, 1.0, 0.0, 0.0};
    CHECK(dist(galerkin_rhs(b, s3), std::vector<cplx>{2.0, -1.0, 1.0, 0.0}) == 0.0);

    for (const int N : {1, 3, 6}) {
      const std::vector<cplx> zero(static_cast<std::size_t>(N + 1), 0.0);
      CHECK(dist(galerkin_rhs(zero, GalerkinSystem::make(N, 0.3)), zero) == 0.0);
    }
    CHECK_THROWS(galerkin_rhs(b, s1));
  }

  TEST_CASE("matches the hand-expanded systems on random states") {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    const auto s1 = GalerkinSystem::make(1, 0.0);
    const auto s3 = GalerkinSystem::make(3, 0.0);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<cplx> a;
      for (int i = 0; i < 4; ++i) a.emplace_back(u(rng), u(rng));
      CHECK(dist(galerkin_rhs(a, s3), hand_n3(a)) < 1e-14);
      const std::vector<cplx> b{a[0], a[1]};
      const std::vector<cplx> hand{b[0] * b[0] + 2.0 * b[1] * b[1], -b[1] + 2.0 * b[0] * b[1]};
      CHECK(dist(galerkin_rhs(b, s1), hand) < 1e-14);
    }
  }

  TEST_CASE("rotation equivariance is exact") {
    std::vector<cplx> a{cplx(0.2, -0.1), cplx(0.5, 0.3), cplx(-0.25, 0.05), cplx(0.1, 0.0)};
    for (const double theta : {0.3, kPi / 2, -1.1}) {
      const auto r0 = galerkin_rhs(a, GalerkinSystem::make(3, 0.0));
      const auto rt = galerkin_rhs(a, GalerkinSystem::make(3, theta));
      const cplx rot = std::polar(1.0, theta);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(rt[i] == rot * r0[i]);
    }
  }

  TEST_CASE("norms and energies of cosine states") {
    const std::vector<cplx> a{1.0, 0.5, 0.0, 0.0};
    CHECK(galerkin_sup_norm(a) == doctest::Approx(2.0));
    const auto e = galerkin_energy(a, 3);
    CHECK(e[0] == doctest::Approx(1.0 / 1.5));
    CHECK(e[1] == doctest::Approx(0.5 / 1.5));
    CHECK_THROWS_AS(galerkin_energy(std::vector<cplx>(4, 0.0), 3), std::domain_error);
  }

  TEST_CASE("integration") {
    SUBCASE("zero stays zero") {
      const auto tr = integrate_galerkin(std::vector<cplx>(4, 0.0), GalerkinSystem::make(3, kPi / 2), 1e-2, 1.0);
      for (const auto& s : tr.states) CHECK(dist(s, std::vector<cplx>(4, 0.0)) == 0.0);
    }
    SUBCASE("two-mode heat data with negative mean decays") {
      const std::vector<cplx> a{-1.0, 0.1};
      const auto tr = integrate_galerkin(a, GalerkinSystem::make(1, 0.0), 1e-2, 200.0);
      const auto& last = tr.states.back();
      CHECK(std::abs(last[1]) < 1e-10);
      CHECK(std::abs(last[0]) < 0.01);
      CHECK(last[0].real() < 0);
    }
    SUBCASE("positive mean blows up") {
      const std::vector<cplx> a{1.0, 0.0};
      const auto tr = integrate_galerkin(a, GalerkinSystem::make(1, 0.0), 1e-3, 2.0);
      CHECK(tr.outcome == GalerkinOutcome::BlowupDetected);
      CHECK(tr.end_time == doctest::Approx(1.0).epsilon(1e-3));
    }
    SUBCASE("tangent data decays off the imaginary axis") {
      const TaylorModel model = solve_cohomological(GalerkinSystem::make(3, 0.0), 10);
      const std::vector<cplx> sigma{0.2, 0.05, -0.02};
      for (const double theta : {0.0, 0.8, -1.2}) {
        const auto tr = integrate_galerkin(evaluate_W(model, sigma), GalerkinSystem::make(3, theta), 1e-2, 30.0);
        double n = 0;
        for (const auto& c : tr.states.back()) n = std::max(n, std::abs(c));
        CHECK(n < 1e-3);
      }
    }
  }

  TEST_CASE("closed-form internal dynamics") {
    SigmaState s;
    s.gamma = {cplx(0.4, 0.1), cplx(-0.2, 0.05), cplx(0.1, -0.3)};
    const auto at0 = closed_form_sigma(s, 0.0);
    for (int j = 0; j < 3; ++j) CHECK(at0[static_cast<std::size_t>(j)] == s.gamma[static_cast<std::size_t>(j)]);

    SigmaState only1;
    only1.gamma = {0.7, 0.0, 0.0};
    only1.mu = 1.0;
    for (const double t : {0.5, 2.0}) {
      const auto v = closed_form_sigma(only1, t);
      CHECK(std::abs(v[1] - t / 3 * std::pow(0.7, 4) * std::exp(-4 * t)) < 1e-15);
    }

    s.mu = cplx(0, 1);
    const std::vector<cplx> g(s.gamma.begin(), s.gamma.end());
    auto rhs = [&](const std::vector<cplx>& y) {
      const auto r = conjugate_rhs({y[0], y[1], y[2]}, s.mu);
      return std::vector<cplx>(r.begin(), r.end());
    };
    for (const double t : {1.0, 5.0, 10.0}) {
      const auto num = oracle::rk4(rhs, g, t, static_cast<int>(2000 * t));
      const auto cf = closed_form_sigma(s, t);
      for (int j = 0; j < 3; ++j) CHECK(std::abs(num[static_cast<std::size_t>(j)] - cf[static_cast<std::size_t>(j)]) < 1e-8);
      CHECK(std::abs(std::abs(cf[0]) - std::abs(s.gamma[0])) < 1e-15);
    }
    // the closed form solves the system: central differences against the rhs
    for (const double t : {0.7, 3.0}) {
      const double h = 1e-4;
      const auto p = closed_form_sigma(s, t + h), m = closed_form_sigma(s, t - h), c = closed_form_sigma(s, t);
      const auto r = conjugate_rhs(c, s.mu);
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs((p[static_cast<std::size_t>(j)] - m[static_cast<std::size_t>(j)]) / (2 * h) - r[static_cast<std::size_t>(j)]) < 1e-6);
    }
  }

  TEST_CASE("generic rk4 agrees with the oracle integrator") {
    ComplexRhs rhs = [](std::span<const cplx> y) {
      return std::vector<cplx>{cplx(0, 1) * y[0] * y[0], -y[1] + y[0]};
    };
    const std::vector<cplx> y0{0.3, 1.0};
    const auto a = rk4_integrate(rhs, y0, 1e-3, 2.0);
    const auto b = oracle::rk4([&](const std::vector<cplx>& y) { return rhs(y); }, y0, 2.0, 2000);
    CHECK(dist(a, b) < 1e-13);
  }

  TEST_CASE("secular crossing times") {
    const auto c = secular_crossing_times(0.1);
    CHECK(c.t23 == doctest::Approx(std::pow(10.0, 2.5)));
    CHECK(c.t13 == doctest::Approx(std::pow(10.0, 8.0 / 3)));
    const auto near1 = secular_crossing_times(0.999999);
    CHECK(near1.t23 == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(near1.t13 == doctest::Approx(1.0).epsilon(1e-5));
    CHECK_THROWS(secular_crossing_times(1.0));
    CHECK_THROWS(secular_crossing_times(0.0));

    SigmaState s;
    s.gamma = {0.1, 0.0, 0.0};
    s.mu = cplx(0, 1);
    const double t = 1e4;
    CHECK(std::abs(closed_form_sigma(s, t)[1]) / c.sigma2_envelope(t) == doctest::Approx(1.0).epsilon(1e-12));
  }
}
