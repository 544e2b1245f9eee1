#ifndef MULTIPIN_EXPERIMENTS_HPP_
#define MULTIPIN_EXPERIMENTS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multipin/statistics.hpp"

namespace multipin::experiments {

/// How the interface spacing T_N is chosen for each polymer length N.
enum class SpacingRule {
  explicit_list,    // every T in ExperimentConfig::spacings, for every N
  half_critical,    // nearest even integer to log N / (2 c_delta)
  critical,         // nearest even integer to log N / c_delta + zeta
  double_critical,  // nearest even integer to 2 log N / c_delta
};

SpacingRule parse_rule(const std::string& name);
std::string to_string(SpacingRule rule);

struct Thresholds {
  double ks = 0.05;              // KS distance to the Gaussian limit
  double variance_band = 0.2;    // |Var ratio - 1|
  double tv_poisson = 0.05;      // interface changes vs Poisson
  double tv_sgamma = 0.07;       // rescaled endpoint vs the randomized walk
  double percentile_spread = 10; // spread of the 99th percentile of |S_N|
  double jump_bound = 0.1;       // analytic bound on P(any interface change)
  double concentration_epsilon = 0.02;
  double concentration_probability = 0.01;
  double contact_fraction = 0.01;
  double xi_fraction = 0.05;     // 99th percentile of xi_Delta / N
};

struct ExperimentConfig {
  double delta = 1.0;
  SpacingRule rule = SpacingRule::explicit_list;
  std::vector<long> spacings;  // used by explicit_list
  double zeta = 0.0;           // used by critical
  std::vector<long> lengths;   // N grid
  std::size_t replicas = 5000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  Thresholds thresholds;
  long contact_fraction_length = 2000;  // exact DP length in the diagnostics
};

/// Spacings used at length N under the configured rule (always even >= 2).
std::vector<long> spacings_for(const ExperimentConfig& config, long N);

/// Nearest even integer >= 2 to x.
long nearest_even(double x);

struct ReportRow {
  std::string regime;
  long N = 0;
  long T_N = 0;
  double delta = 0.0;
  double zeta_realized = 0.0;
  std::string statistic;
  double value = 0.0;
  double radius = 0.0;
  double threshold = 0.0;            // NaN for informational rows
  std::optional<bool> pass;          // empty for informational rows
  std::size_t M = 0;
  std::uint64_t seed = 0;
};

struct TailPoint {
  long N;
  long T_N;
  long level;
  double probability;  // P(|S_N| > level)
};

struct ExperimentReport {
  std::string regime;
  ExperimentConfig config;
  std::vector<ReportRow> rows;
  std::vector<TailPoint> tail_curve;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;

  bool passed() const;
  const ReportRow* find(const std::string& statistic, long N = -1) const;
};

/// Gaussian regime: KS of the normalized endpoint and the variance ratio.
ExperimentReport regime_gaussian(const ExperimentConfig& config);

/// Critical regime: interface changes vs Poisson and the rescaled endpoint vs
/// the simple walk evaluated at an independent Poisson time.
ExperimentReport regime_critical(const ExperimentConfig& config);

/// Single-interface regime: jump probability vs its bound and tightness of |S_N|.
ExperimentReport regime_tight(const ExperimentConfig& config);

/// Renewal-level diagnostics at fixed spacing (first entry of config.spacings,
/// otherwise the rule) for every N in the grid.
ExperimentReport diagnostics_suite(const ExperimentConfig& config);

/// P(S_Gamma = j) for j in [-j_max, j_max], Gamma ~ Poisson(t) independent of S.
stats::Histogram reference_sgamma_law(double t, long j_max);

}  // namespace multipin::experiments

#endif  // MULTIPIN_EXPERIMENTS_HPP_
