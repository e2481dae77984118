#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlslab/evolution.hpp"

using namespace nlslab;

namespace {

constexpr double kPi = std::numbers::pi;

FourierField cosine_data(int N, double amp, double mean) {
  FourierField u(N);
  u[0] = mean;
  u[1] = u[-1] = amp / 2;
  return u;
}

double max_diff(const FourierField& a, const FourierField& b) {
  double e = 0;
  for (int n = -a.n_modes(); n <= a.n_modes(); ++n) e = std::max(e, std::abs(a[n] - b[n]));
  return e;
}

FourierField run_to(const FourierField& u0, double theta, double dt, double t_end) {
  EvolveConfig c;
  c.theta = theta;
  c.dt = dt;
  c.t_end = t_end;
  c.n_modes = u0.n_modes();
  c.keep_snapshots = false;
  c.record_stride = 1 << 30;
  return evolve(u0, c).final_state;
}

}  // namespace

TEST_SUITE("evolution") {
  TEST_CASE("linear symbol") {
    EvolveConfig c;
    c.n_modes = 3;
    c.period = 2 * kPi;
    c.theta = 0;
    CHECK(linear_symbol(c)[3 + 2] == cplx(-4.0));
    c.theta = kPi / 2;
    c.period = 1;
    CHECK(linear_symbol(c)[3] == cplx(0.0));
    const cplx l1 = linear_symbol(c)[3 + 1];
    CHECK(std::abs(l1 - cplx(0, -4 * kPi * kPi)) < 1e-12);
  }

  TEST_CASE("phi functions agree with the closed forms away from zero") {
    for (const cplx z : {cplx(0.6, 0), cplx(-0.4, 0.5), cplx(0, 0.45), cplx(-2, 1)}) {
      const auto c = etd_coefficients(z);
      const cplx ez = std::exp(z);
      CHECK(std::abs(c.q - (std::exp(z / 2.0) - 1.0) / z) < 1e-13);
      CHECK(std::abs(c.f1 - (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / (z * z * z)) < 1e-11);
      CHECK(std::abs(c.f2 - (2.0 + z + ez * (z - 2.0)) / (z * z * z)) < 1e-11);
      CHECK(std::abs(c.f3 - (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / (z * z * z)) < 1e-11);
    }
    const auto zero = etd_coefficients(0.0);
    CHECK(std::abs(zero.q - 0.5) < 1e-14);
    CHECK(std::abs(zero.f1 - 1.0 / 6) < 1e-14);
    CHECK(std::abs(zero.f2 - 1.0 / 6) < 1e-14);
    CHECK(std::abs(zero.f3 - 1.0 / 6) < 1e-14);
  }

  TEST_CASE("single steps") {
    EvolveConfig c;
    c.n_modes = 8;
    c.dt = 1e-3;
    SUBCASE("zero is a fixed point") { CHECK(max_diff(etdrk4_step(FourierField(8), c), FourierField(8)) == 0.0); }
    SUBCASE("linear flow is exact") {
      c.nonlinear = false;
      for (const double theta : {0.0, 0.7, kPi / 2, -kPi / 2}) {
        c.theta = theta;
        FourierField u(8);
        for (int n = -8; n <= 8; ++n) u[n] = cplx(1.0 / (1 + n * n), 0.1 * n);
        const FourierField v = etdrk4_step(u, c);
        const auto L = linear_symbol(c);
        for (int n = -8; n <= 8; ++n)
          CHECK(std::abs(v[n] - u[n] * std::exp(L[static_cast<std::size_t>(n + 8)] * c.dt)) <=
                1e-15 * (1 + std::abs(u[n])));
      }
    }
  }

  TEST_CASE("constant data follows 1/(1/u0 - t) to fourth order") {
    double prev = 0;
    for (const double dt : {0.05, 0.025, 0.0125}) {
      FourierField u(2);
      u[0] = 1;
      const double err = std::abs(run_to(u, 0.0, dt, 0.5)[0] - 2.0);
      if (prev > 0) CHECK(std::log2(prev / err) == doctest::Approx(4.0).epsilon(0.06));
      prev = err;
    }
  }

  TEST_CASE("conjugation maps theta to -theta") {
    FourierField u0(16);
    for (int n = -16; n <= 16; ++n) u0[n] = cplx(3.0 / (1 + n * n), 0.5 * n / (1 + n * n * n * n));
    EvolveConfig c;
    c.n_modes = 16;
    c.dt = 1e-4;
    c.t_end = 0.02;
    c.record_stride = 20;
    for (const double theta : {kPi / 2, 0.4}) {
      c.theta = theta;
      const auto a = evolve(u0.conjugated(), c);
      c.theta = -theta;
      const auto b = evolve(u0, c);
      REQUIRE(a.snapshots.size() == b.snapshots.size());
      for (std::size_t i = 0; i < a.snapshots.size(); ++i) CHECK(max_diff(a.snapshots[i], b.snapshots[i].conjugated()) < 1e-10);
    }
  }

  TEST_CASE("real cosine data stays real under the heat flow") {
    const FourierField u = run_to(cosine_data(32, 20, -3), 0.0, 1e-4, 0.05);
    CHECK(u.is_real(1e-12));
    CHECK(u.is_cosine_symmetric(1e-12));
  }

  TEST_CASE("uniform steps land on t_end") {
    EvolveConfig c;
    c.dt = 0.3;
    c.t_end = 1.0;
    CHECK(c.n_steps() == 4);
    CHECK(c.effective_dt() == doctest::Approx(0.25));
    c.dt = -1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }

  TEST_CASE("blowup is detected for positive constants") {
    EvolveConfig c;
    c.theta = 0;
    c.n_modes = 4;
    c.dt = 1e-3;
    c.t_end = 2;
    FourierField u(4);
    u[0] = 1;
    const auto rec = evolve(u, c);
    CHECK(rec.outcome.kind == OutcomeKind::BlowupDetected);
    CHECK(rec.outcome.time == doctest::Approx(1.0).epsilon(1e-3));
  }

  TEST_CASE("trapping entry") {
    EvolveConfig c;
    c.theta = kPi / 2;
    c.n_modes = 256;
    c.dt = 1e-4;
    c.t_end = 1;
    c.trapping_check = true;
    c.stop_on_trap = false;
    c.keep_snapshots = false;
    SUBCASE("A = 150 starts inside the cone") {
      c.t_end = 0.01;
      const auto rec = evolve(cosine_data(256, 30, 150), c);
      REQUIRE(trapping_entry_time(rec));
      CHECK(*trapping_entry_time(rec) == 0.0);
    }
    SUBCASE("A = -20 enters before t = 1") {
      const auto rec = evolve(cosine_data(256, 30, -20), c);
      REQUIRE(trapping_entry_time(rec));
      CHECK(*trapping_entry_time(rec) > 0.0);
      CHECK(*trapping_entry_time(rec) < 1.0);
      CHECK(rec.outcome.kind == OutcomeKind::ReachedTEnd);
    }
    SUBCASE("no checks, no entry") {
      c.trapping_check = false;
      c.t_end = 0.01;
      CHECK_FALSE(trapping_entry_time(evolve(cosine_data(256, 30, 150), c)));
    }
  }
}
