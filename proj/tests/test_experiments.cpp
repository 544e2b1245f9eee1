#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "multipin/experiments.hpp"
#include "multipin/free_energy.hpp"
#include "multipin/report.hpp"
#include "oracles.hpp"

using namespace multipin;
using namespace multipin::experiments;

TEST_CASE("randomized-walk reference law against Bessel functions") {
  const auto law = reference_sgamma_law(1.3310, 40);
  CHECK(law.at(0) == doctest::Approx(0.3949).epsilon(2.5e-3));
  for (long j = -6; j <= 6; ++j) CHECK(law.at(j) == doctest::Approx(oracle::sgamma_bessel(1.3310, j)).epsilon(1e-10));
  const auto tiny = reference_sgamma_law(1e-9, 10);
  CHECK(tiny.at(0) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("spacing rules") {
  const double c = free_energy::c_delta(1.0);
  ExperimentConfig config;
  config.rule = SpacingRule::half_critical;
  CHECK(spacings_for(config, 1000000) == std::vector<long>{nearest_even(std::log(1e6) / (2 * c))});
  CHECK(spacings_for(config, 1000000) == std::vector<long>{10});
  config.rule = SpacingRule::critical;
  CHECK(spacings_for(config, 1000000) == std::vector<long>{18});
  config.rule = SpacingRule::double_critical;
  CHECK(spacings_for(config, 10000) == std::vector<long>{24});
  CHECK(spacings_for(config, 100000) == std::vector<long>{30});
  CHECK(spacings_for(config, 1000000) == std::vector<long>{38});
  config.rule = SpacingRule::explicit_list;
  config.spacings = {4, 8};
  CHECK(spacings_for(config, 10) == std::vector<long>{4, 8});
  CHECK(nearest_even(9.2) == 10);
  CHECK(nearest_even(0.3) == 2);
  CHECK(parse_rule("double-critical") == SpacingRule::double_critical);
  CHECK_THROWS_AS(parse_rule("bogus"), std::invalid_argument);
}

TEST_CASE("empty and invalid configurations") {
  ExperimentConfig config;
  config.rule = SpacingRule::half_critical;
  config.lengths = {10000};
  config.replicas = 0;
  const auto empty = regime_gaussian(config);
  CHECK(empty.rows.empty());
  CHECK(empty.passed());
  config.replicas = 50;
  CHECK_THROWS_AS(regime_gaussian(config), std::invalid_argument);
  config.replicas = 200;
  config.delta = -1.0;
  CHECK_THROWS_AS(regime_gaussian(config), std::invalid_argument);
}

TEST_CASE("small regime runs produce well-formed reports") {
  ExperimentConfig config;
  config.replicas = 400;
  config.lengths = {20000};
  config.seed = 5;
  config.rule = SpacingRule::half_critical;
  const auto a = regime_gaussian(config);
  REQUIRE(a.find("ks_normal") != nullptr);
  CHECK(a.find("ks_normal")->pass.has_value());
  CHECK(a.find("variance_ratio") != nullptr);

  config.rule = SpacingRule::critical;
  const auto b = regime_critical(config);
  REQUIRE(b.find("tv_poisson") != nullptr);
  REQUIRE(b.find("t_zeta") != nullptr);
  const double zeta = b.find("t_zeta")->zeta_realized;
  CHECK(b.find("t_zeta")->value == doctest::Approx(free_energy::scaling_constants(1.0, zeta).t_zeta));

  config.rule = SpacingRule::double_critical;
  config.lengths = {1000, 4000};
  const auto c = regime_tight(config);
  CHECK(c.find("abs_S_q99_spread") != nullptr);
  CHECK_FALSE(c.tail_curve.empty());

  // the same seed reproduces the same rows; thread count does not matter
  auto again = config;
  again.threads = 3;
  const auto d = regime_tight(again);
  REQUIRE(c.rows.size() == d.rows.size());
  for (std::size_t i = 0; i < c.rows.size(); ++i) CHECK(c.rows[i].value == d.rows[i].value);

  std::ostringstream csv;
  report::write_csv(csv, c);
  CHECK(csv.str().rfind(report::csv_header(), 0) == 0);
  const auto j = nlohmann::json::parse(report::json_summary(c));
  CHECK(j["regime"] == "regime-iii");
  CHECK(j["rows"].size() == c.rows.size());
}

TEST_CASE("diagnostics at T = 8") {
  ExperimentConfig config;
  config.spacings = {8};
  config.lengths = {10000};
  config.replicas = 2000;
  const auto r = diagnostics_suite(config);
  CHECK(r.passed());
  REQUIRE(r.find("concentration_exceedance") != nullptr);
  CHECK(r.find("concentration_exceedance")->value <= 0.01);
  REQUIRE(r.find("contact_fraction_gap") != nullptr);
  CHECK(r.find("contact_fraction_gap")->value <= 0.01);
}

TEST_CASE("number formatting") {
  CHECK(report::format_number(0.25) == "0.25");
  CHECK(report::format_number(std::nan("")) == "nan");
  CHECK(report::format_number(-INFINITY) == "-inf");
  CHECK(report::format_number(0.310057253479) == "0.310057253");
}
