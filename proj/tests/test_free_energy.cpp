#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "multipin/free_energy.hpp"
#include "multipin/kernels.hpp"
#include "oracles.hpp"

using namespace multipin;
using namespace multipin::free_energy;

const auto kInf = InterfaceSpacing::infinite();
InterfaceSpacing fin(long T) { return InterfaceSpacing::finite(T); }

TEST_CASE("phi against closed oracles") {
  CHECK(std::abs(phi(1.0, fin(4)) - oracle::phi_T4(1.0)) <= 1e-12);
  CHECK(std::abs(phi(1.0, fin(4)) - 0.310057) <= 1e-5);
  CHECK(std::abs(phi(2.5, fin(4)) - oracle::phi_T4(2.5)) <= 1e-12);
  CHECK(std::abs(phi(1.0, kInf) - oracle::phi_infinite(1.0)) <= 1e-12);
  CHECK(std::abs(phi_inf(1.0) - (0.5 - 0.5 * std::log(2.0 - std::exp(-1.0)))) <= 1e-12);
  CHECK(phi(1.0, fin(2)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(phi(0.0, kInf) == 0.0);
  CHECK(phi(-2.0, kInf) == 0.0);
  CHECK(phi_inf(-2.0) == 0.0);
}

TEST_CASE("phi against bisection on first-passage series") {
  for (long T : {6L, 8L}) {
    for (double delta : {-1.0, 0.5, 1.0}) {
      CAPTURE(T);
      CAPTURE(delta);
      CHECK(std::abs(phi(delta, fin(T)) - oracle::phi_series(delta, T, 20000)) <= 1e-9);
    }
  }
}

TEST_CASE("negative delta gives a root in (lambda0, 0)") {
  const double p = phi(-1.0, fin(8));
  CHECK(p < 0.0);
  CHECK(p > kernels::lambda0(8));
  CHECK(std::abs(kernels::Q_closed(fin(8), p) - std::exp(1.0)) <= 1e-12);
}

TEST_CASE("root residual on the grid") {
  for (double delta : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
    for (long T : {2L, 4L, 8L, 16L, 32L, 64L}) {
      CHECK(root_residual(delta, fin(T)) <= 1e-12);
    }
  }
}

TEST_CASE("phi decreases to its infinite-spacing limit at an exponential rate") {
  double previous = phi(1.0, fin(4));
  std::vector<double> log_gaps;
  for (long T = 6; T <= 30; T += 2) {
    const double p = phi(1.0, fin(T));
    CHECK(p < previous);
    CHECK(p > phi_inf(1.0));
    previous = p;
    log_gaps.push_back(std::log(p - phi_inf(1.0)));
  }
  // slope of log-gap per unit T should be close to -c_delta
  const double slope = (log_gaps.back() - log_gaps[log_gaps.size() - 5]) / 8.0;
  CHECK(slope == doctest::Approx(-c_delta(1.0)).epsilon(0.02));
}

TEST_CASE("c_delta and its two forms") {
  const double f = oracle::phi_infinite(1.0);
  const double expected = f + std::log(1.0 + std::sqrt(1.0 - std::exp(-2.0 * f)));
  CHECK(c_delta(1.0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(c_delta(1.0) == doctest::Approx(1.0 - oracle::phi_infinite(1.0)).epsilon(1e-12));
  for (double delta : {0.5, 2.0, 4.0}) {
    CHECK(std::abs(c_delta(delta) - c_delta_via_phi(delta)) <= 1e-10);
  }
  CHECK(c_delta(1e-8) < 1e-3);
}

TEST_CASE("step mean") {
  const double e = std::exp(-1.0);
  CHECK(step_mean(1.0, kInf) == doctest::Approx((2.0 - e) / (1.0 - e)).epsilon(1e-10));
  CHECK(step_mean(1.0, fin(2)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(step_mean(1.0, fin(64)) - step_mean(1.0, kInf)) <= 1e-4);
  CHECK(std::abs(phi_prime_inf(1.0) - 1.0 / step_mean(1.0, kInf)) <= 1e-10);
}

TEST_CASE("step mean is the derivative of phi") {
  for (long T : {4L, 8L, 16L}) {
    const double h = 1e-5;
    const double fd = (phi(1.0 + h, fin(T)) - phi(1.0 - h, fin(T))) / (2 * h);
    CHECK(1.0 / step_mean(1.0, fin(T)) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("second step moment by finite differences of the transform") {
  // E[n^2] = e^delta Q''(phi)
  const auto T = fin(8);
  const double p = phi(1.0, T);
  const double h = 1e-4;
  const double d2 = (kernels::Q_closed(T, p + h) - 2 * kernels::Q_closed(T, p) + kernels::Q_closed(T, p - h)) / (h * h);
  CHECK(step_moment(1.0, T, 2) == doctest::Approx(std::exp(1.0) * d2).epsilon(1e-5));
  CHECK(step_moment(1.0, T, 1) == doctest::Approx(step_mean(1.0, T)).epsilon(1e-12));
}

TEST_CASE("scaling constants") {
  const auto k = scaling_constants(1.0, 0.0);
  CHECK(k.C_delta == doctest::Approx(1.15368).epsilon(1e-5));
  CHECK(k.C_delta == doctest::Approx(k.C_delta_closed).epsilon(1e-10));
  CHECK(k.t_zeta == doctest::Approx(1.33098).epsilon(1e-5));
  CHECK(k.t_zeta == doctest::Approx(k.t_zeta_closed).epsilon(1e-10));
  CHECK(k.v_zeta == doctest::Approx(3.43656).epsilon(1e-5));
  CHECK(std::sqrt(1.0 - std::exp(-2.0 * k.phi_inf)) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-10));
  CHECK(scaling_constants(1.0, 30.0).t_zeta < 1e-9);
}

TEST_CASE("regime offsets") {
  const double c = c_delta(1.0);
  CHECK(regime_offset(std::exp(c * 10.0), 10, 1.0).delta_N == doctest::Approx(0.0).epsilon(1e-9));
  const auto low = regime_offset(1e6, 10, 1.0);
  CHECK(low.delta_N == doctest::Approx(10.0 - std::log(1e6) / c).epsilon(1e-12));
  CHECK(low.regime == Regime::gaussian);
  const auto high = regime_offset(1e6, 40, 1.0);
  CHECK(high.delta_N == doctest::Approx(40.0 - std::log(1e6) / c).epsilon(1e-12));
  CHECK(high.regime == Regime::single_interface);
  CHECK(regime_offset(1e6, 18, 1.0).regime == Regime::critical);
}

TEST_CASE("Q1 ratio tends to one") {
  CHECK(std::abs(q1_asymptotic_ratio(1.0, 40) - 1.0) <= 0.01);
  CHECK(std::abs(q1_asymptotic_ratio(1.0, 80) - 1.0) <= 1e-4);
}
