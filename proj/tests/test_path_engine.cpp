#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "multipin/exact_polymer.hpp"
#include "multipin/free_energy.hpp"
#include "multipin/path_engine.hpp"
#include "multipin/statistics.hpp"
#include "oracles.hpp"

using namespace multipin;
using namespace multipin::path_engine;

TEST_CASE("no-contact endpoint law on short walks") {
  const auto one = no_contact_endpoint(4, 1);
  CHECK(one.survival == doctest::Approx(1.0));
  CHECK(one.conditional(1) == doctest::Approx(0.5));
  CHECK(one.conditional(-1) == doctest::Approx(0.5));
  // after two steps the walk avoids {0, +-4} only by going straight to +-2
  const auto two = no_contact_endpoint(4, 2);
  CHECK(two.survival == doctest::Approx(0.5));
  CHECK(two.mass(2) == doctest::Approx(0.25));
  CHECK(two.mass(-2) == doctest::Approx(0.25));
  CHECK(two.mass(0) == 0.0);
  CHECK(no_contact_endpoint(2, 1).conditional(1) == doctest::Approx(0.5));
  CHECK(no_contact_endpoint(2, 2).survival == 0.0);
}

TEST_CASE("no-contact survival matches first-passage tails") {
  const auto fp = oracle::first_passage(8, 60);
  long double hit = 0.0L;
  for (long m = 1; m <= 60; ++m) {
    hit += fp.same[m] + 2 * fp.up[m];
    CHECK(no_contact_endpoint(8, m).survival == doctest::Approx(static_cast<double>(1.0L - hit)).epsilon(1e-12));
  }
}

TEST_CASE("skeleton statistics") {
  ContactSkeleton empty;
  empty.N = 7;
  empty.T = 4;
  empty.final_offset = 3;
  const auto a = skeleton_statistics(empty);
  CHECK(a.L == 0);
  CHECK(a.L_prime == 0);
  CHECK(a.S_N == 3);

  ContactSkeleton s;
  s.N = 20;
  s.T = 4;
  s.contact_times = {2, 4, 8, 12, 16};
  s.marks = {0, 0, +1, 0, -1};
  s.mu_N = 16;
  s.final_offset = 2;
  const auto b = skeleton_statistics(s);
  CHECK(b.Y.back() == 0);
  CHECK(b.L_prime == 2);
  CHECK(b.delta_geom == 3);
  CHECK(b.theta == std::vector<long>{8, 16});
  CHECK(s.endpoint() == 2);
  CHECK(validate(s).empty());
  s.contact_times[1] = 3;
  CHECK_FALSE(validate(s).empty());
}

TEST_CASE("skeleton text round trip") {
  ContactSkeleton s;
  s.N = 10;
  s.T = 8;
  s.delta = 1.0;
  s.contact_times = {2, 6};
  s.marks = {0, 1};
  s.mu_N = 6;
  s.final_offset = -2;
  std::stringstream io;
  write_skeleton(io, s);
  write_skeleton(io, s);
  const auto back = read_skeletons(io);
  REQUIRE(back.size() == 2);
  CHECK(back[1].contact_times == s.contact_times);
  CHECK(back[1].marks == s.marks);
  CHECK(back[1].final_offset == -2);
  CHECK(back[1].mu_N == 6);
}

TEST_CASE("T = 2 skeletons are deterministic") {
  const FreeSampler sampler(1.0, 2, 10);
  for (std::uint64_t r = 0; r < 3; ++r) {
    RandomStream stream(1, r);
    const auto s = sampler.sample(stream);
    CHECK(s.contact_times == std::vector<long>{2, 4, 6, 8, 10});
    CHECK(skeleton_statistics(s).L == 5);
  }
}

TEST_CASE("suffix weight equals the normalized free partition function") {
  const FreeSampler sampler(1.0, 8, 500);
  const double phi = free_energy::phi(1.0, InterfaceSpacing::finite(8));
  for (long m : {1L, 2L, 37L, 500L}) {
    const double expected = exact_polymer::log_z_free_dp(m, 1.0, InterfaceSpacing::finite(8)) - phi * static_cast<double>(m);
    CHECK(std::abs(sampler.log_suffix_weight(m) - expected) <= 1e-10);
  }
}

TEST_CASE("free sampler reproduces the exact endpoint law") {
  const long N = 60;
  const FreeSampler sampler(1.0, 4, N);
  const auto exact = exact_polymer::endpoint_law_dp(N, 1.0, InterfaceSpacing::finite(4));
  stats::Histogram empirical;
  stats::Histogram reference;
  for (long s = -N; s <= N; ++s) {
    if (exact.at(s) > 0) reference[s] = exact.at(s);
  }
  const int M = 100000;
  for (int r = 0; r < M; ++r) {
    RandomStream stream(9, static_cast<std::uint64_t>(r));
    const auto sk = sampler.sample(stream);
    REQUIRE(validate(sk).empty());
    empirical[sk.endpoint()] += 1.0;
  }
  CHECK(stats::tv_distance(empirical, reference) <= 0.01);
  // a chi-square test on the same draws
  stats::Histogram expected_counts;
  for (const auto& [s, p] : reference) expected_counts[s] = p * M * 50;
  CHECK(stats::chi_square_two_sample(empirical, expected_counts).p_value > 1e-4);
}

TEST_CASE("free sampler contact count matches the exact mean") {
  const long N = 400;
  const FreeSampler sampler(-0.5, 8, N);
  stats::Moments L;
  for (int r = 0; r < 20000; ++r) {
    RandomStream stream(3, static_cast<std::uint64_t>(r));
    SkeletonSummary summary;
    summary.T = 8;
    sampler.sample_into(stream, summary);
    L.add(static_cast<double>(summary.L));
  }
  const double exact = exact_polymer::contact_fraction(N, -0.5, InterfaceSpacing::finite(8)) * N;
  CHECK(std::abs(L.mean() - exact) <= 3.5 * L.standard_error());
}

TEST_CASE("contact fraction at N = 2000 follows 1 / m") {
  const long N = 2000;
  const FreeSampler sampler(1.0, 8, N);
  stats::Moments frac;
  for (int r = 0; r < 20000; ++r) {
    RandomStream stream(4, static_cast<std::uint64_t>(r));
    const auto sk = sampler.sample(stream);
    REQUIRE(validate(sk).empty());
    frac.add(static_cast<double>(sk.contact_times.size()) / N);
  }
  const double exact = exact_polymer::contact_fraction(N, 1.0, InterfaceSpacing::finite(8));
  CHECK(std::abs(frac.mean() - exact) <= 3.5 * frac.standard_error());
  CHECK(std::abs(frac.mean() - 1.0 / free_energy::step_mean(1.0, InterfaceSpacing::finite(8))) <= 0.002);
}

TEST_CASE("constrained sampler ends on an interface with the exact law") {
  const long N = 40;
  const ConstrainedSampler sampler(1.0, 4, N);
  // conditioning the free endpoint law on S_N in 4Z gives the constrained law
  std::map<long, double> exact;
  double total = 0.0;
  const auto free_law = exact_polymer::endpoint_law_dp(N, 1.0, InterfaceSpacing::finite(4));
  for (long s = -N; s <= N; s += 4) {
    exact[s] = free_law.at(s);
    total += free_law.at(s);
  }
  stats::Histogram reference;
  for (auto& [s, p] : exact) reference[s] = p / total;
  stats::Histogram empirical;
  for (int r = 0; r < 50000; ++r) {
    RandomStream stream(6, static_cast<std::uint64_t>(r));
    const auto sk = sampler.sample(stream);
    REQUIRE(validate(sk).empty());
    REQUIRE(sk.contact_times.back() == N);
    REQUIRE(sk.final_offset == 0);
    empirical[sk.endpoint()] += 1.0;
  }
  CHECK(stats::tv_distance(empirical, reference) <= 0.015);
  CHECK_THROWS(ConstrainedSampler(1.0, 4, 41));
}

TEST_CASE("sampling is reproducible per seed and replica") {
  const FreeSampler sampler(1.0, 8, 5000);
  RandomStream a(42, 7);
  RandomStream b(42, 7);
  const auto x = sampler.sample(a);
  const auto y = sampler.sample(b);
  CHECK(x.contact_times == y.contact_times);
  CHECK(x.marks == y.marks);
  CHECK(x.final_offset == y.final_offset);
}

TEST_CASE("last-contact gap decays geometrically") {
  const long N = 10000;
  const FreeSampler sampler(1.0, 8, N);
  const int M = 20000;
  std::vector<double> tail(40, 0.0);
  for (int r = 0; r < M; ++r) {
    RandomStream stream(8, static_cast<std::uint64_t>(r));
    SkeletonSummary summary;
    summary.T = 8;
    sampler.sample_into(stream, summary);
    const long gap = N - summary.mu_N;
    for (long l = 0; l < 40; ++l) tail[static_cast<std::size_t>(l)] += gap > l ? 1.0 : 0.0;
  }
  CHECK(tail[0] > 0.0);
  CHECK(tail[20] < 0.5 * tail[0]);
  CHECK(tail[39] / M < 0.05);
}
