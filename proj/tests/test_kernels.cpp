#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "multipin/kernels.hpp"
#include "oracles.hpp"

using namespace multipin;
using namespace multipin::kernels;

TEST_CASE("kernel values on short walks") {
  CHECK(q0_series(4, 2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(q0_series(4, 4) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(q0_series(4, 3) == 0.0);
  CHECK(q1_series(4, 4) == doctest::Approx(1.0 / 16).epsilon(1e-14));
  CHECK(q1_series(4, 2) == 0.0);
  CHECK(q_total(4, 2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(q_total(4, 5) == 0.0);
}

TEST_CASE("T = 2 is degenerate: every walk hits at time 2") {
  CHECK(q0_series(2, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(q1_series(2, 2) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(q_total(2, 2) == doctest::Approx(1.0).epsilon(1e-15));
  for (long n = 3; n <= 12; ++n) CHECK(q_total(2, n) == 0.0);
}

TEST_CASE("kernels agree with first-passage propagation") {
  for (long T : {2L, 4L, 6L, 8L, 10L}) {
    const auto fp = oracle::first_passage(T, 200);
    for (long n = 1; n <= 200; ++n) {
      CAPTURE(T);
      CAPTURE(n);
      CHECK(std::abs(q0_series(T, n) - static_cast<double>(fp.same[n])) <= 1e-14);
      CHECK(std::abs(q1_series(T, n) - static_cast<double>(fp.up[n])) <= 1e-14);
    }
  }
}

TEST_CASE("q1 vanishes before the walk can travel T") {
  for (long T : {6L, 12L, 32L}) {
    for (long n = 1; n < T; ++n) CHECK(q1_series(T, n) == 0.0);
    CHECK(q1_series(T, T) == doctest::Approx(std::ldexp(1.0, -static_cast<int>(T))).epsilon(1e-12));
  }
}

TEST_CASE("transform limits at lambda = 0") {
  for (long T : {2L, 4L, 8L, 30L}) {
    const auto s = InterfaceSpacing::finite(T);
    const double Td = static_cast<double>(T);
    CHECK(Q0_closed(s, 0.0) == doctest::Approx(1.0 - 1.0 / Td).epsilon(1e-14));
    CHECK(Q1_closed(s, 0.0) == doctest::Approx(0.5 / Td).epsilon(1e-14));
    CHECK(Q_closed(s, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(Q_closed(InterfaceSpacing::infinite(), 0.0) == doctest::Approx(1.0));
  CHECK(Q1_closed(InterfaceSpacing::infinite(), 0.7) == 0.0);
}

TEST_CASE("transforms are continuous across the small-argument expansion") {
  for (long T : {4L, 8L, 64L}) {
    const auto s = InterfaceSpacing::finite(T);
    for (double l : {1e-3, 1e-5, 1e-7, -1e-7, -1e-5, -1e-3}) {
      const double h = l * 1.0001;
      CHECK(std::abs(Q_closed(s, l) - Q_closed(s, h)) <= 1e-4 * std::abs(l) * static_cast<double>(T * T) + 1e-13);
    }
  }
}

TEST_CASE("series sums match the closed transforms, both signs of lambda") {
  for (long T : {4L, 6L, 8L, 16L}) {
    const auto s = InterfaceSpacing::finite(T);
    const long n_max = 60000;
    const auto fp = oracle::first_passage(T, n_max);
    for (double lambda : {-0.02, -0.005, 0.0, 0.01, 0.25, 1.5}) {
      if (lambda < lambda0(T) + 0.01) continue;
      long double s0 = 0.0L;
      long double s1 = 0.0L;
      for (long n = 2; n <= n_max; ++n) {
        const long double w = std::exp(-static_cast<long double>(lambda) * n);
        s0 += fp.same[n] * w;
        s1 += fp.up[n] * w;
      }
      CAPTURE(T);
      CAPTURE(lambda);
      CHECK(std::abs(static_cast<double>(s0) - Q0_closed(s, lambda)) <= 1e-10);
      CHECK(std::abs(static_cast<double>(s1) - Q1_closed(s, lambda)) <= 1e-10);
    }
  }
}

TEST_CASE("infinite spacing transform") {
  for (double l : {0.01, 0.3, 2.0}) {
    CHECK(Q_closed(InterfaceSpacing::infinite(), l) ==
          doctest::Approx(1.0 - std::sqrt(1.0 - std::exp(-2.0 * l))).epsilon(1e-12));
  }
}

TEST_CASE("derivative matches central differences") {
  for (long T : {4L, 8L, 20L}) {
    const auto s = InterfaceSpacing::finite(T);
    for (double l : {-0.01, 0.05, 0.4}) {
      const double h = 1e-6;
      const double fd = (Q_closed(s, l + h) - Q_closed(s, l - h)) / (2 * h);
      CHECK(Q_closed_derivative(s, l) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("lambda0 values") {
  CHECK(lambda0(4) == doctest::Approx(-0.5 * std::log(2.0)).epsilon(1e-14));
  CHECK(lambda0(2) == -std::numeric_limits<double>::infinity());
  CHECK(lambda0(1000) < 0.0);
  CHECK(lambda0(1000) > -1e-4);
  CHECK(lambda0(8) < lambda0(16));
}

TEST_CASE("tail bound dominates the true tail") {
  for (long T : {4L, 8L, 16L}) {
    const long n_max = 30000;
    const auto fp = oracle::first_passage(T, n_max);
    for (double lambda : {0.0, 0.05}) {
      for (long H : {40L, 200L, 1000L}) {
        long double tail = 0.0L;
        for (long n = H + 1; n <= n_max; ++n) {
          tail += (fp.same[n] + 2 * fp.up[n]) * std::exp(-static_cast<long double>(lambda) * n);
        }
        CHECK(static_cast<double>(tail) <= tail_bound(T, lambda, H) * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("horizon meets the requested tolerance") {
  const long H = horizon_for(8, 0.0, 1e-12, 1'000'000);
  CHECK(H % 2 == 0);
  CHECK(tail_bound(8, 0.0, H) <= 1e-12);
  CHECK(tail_bound(8, 0.0, H - 2) > 1e-12);
  CHECK(horizon_for(8, 0.3, 1e-12, 1'000'000) < H);
  CHECK(horizon_for(2, 0.0, 1e-12, 1'000'000) == 2);
}

TEST_CASE("kernel table mass identities") {
  for (long T : {2L, 4L, 8L, 32L}) {
    const auto table = KernelTable::with_tolerance(T);
    double m0 = 0.0;
    double m1 = 0.0;
    for (long n = 0; n <= table.horizon(); ++n) {
      m0 += table.q0(n);
      m1 += table.q1(n);
    }
    const double Td = static_cast<double>(T);
    CHECK(std::abs(m0 - (1.0 - 1.0 / Td)) <= 1e-8);
    CHECK(std::abs(m1 - 0.5 / Td) <= 1e-8);
    CHECK(table.tail_mass_bound() <= 1e-12);
  }
}

TEST_CASE("spacing parsing and validation") {
  CHECK(InterfaceSpacing::parse("inf").is_infinite());
  CHECK(InterfaceSpacing::parse("8").value() == 8);
  CHECK(InterfaceSpacing::parse("8").to_string() == "8");
  CHECK(InterfaceSpacing::infinite().to_string() == "inf");
  CHECK_THROWS_AS(InterfaceSpacing::finite(3), std::invalid_argument);
  CHECK_THROWS_AS(InterfaceSpacing::finite(0), std::invalid_argument);
  CHECK_THROWS_AS(InterfaceSpacing::parse("x"), std::invalid_argument);
  CHECK_THROWS_AS(q0_series(5, 4), std::invalid_argument);
  CHECK_THROWS(InterfaceSpacing::infinite().value());
}
