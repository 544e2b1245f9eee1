#ifndef MULTIPIN_STATISTICS_HPP_
#define MULTIPIN_STATISTICS_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <vector>

namespace multipin::stats {

/// Integer-valued histogram: value -> weight (counts or probabilities).
using Histogram = std::map<long, double>;

Histogram histogram(const std::vector<long>& values);

/// One-sample sup distance between the empirical cdf of `sample` and `cdf`.
/// Throws std::invalid_argument on an empty sample.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Asymptotic 99% Kolmogorov radius, coefficient / sqrt(M).
double ks_radius(std::size_t M, double coefficient = 1.63);

/// Half the l1 distance after normalizing each histogram to unit mass.
double tv_distance(const Histogram& a, const Histogram& b);

struct ChiSquare {
  double statistic;
  long dof;
  double p_value;
};

/// Two-sample chi-square homogeneity test on count histograms; bins with
/// fewer than min_count pooled observations are merged.
ChiSquare chi_square_two_sample(const Histogram& a, const Histogram& b, double min_count = 5.0);

double normal_cdf(double x);
double poisson_pmf(long k, double t);

/// Poisson(t) truncated where the remaining mass is below tail.
Histogram poisson_law(double t, double tail = 1e-12);

/// Empirical quantile by the nearest-rank rule.
double quantile(std::vector<double> values, double q);

/// Running mean and variance (Welford).
class Moments {
 public:
  void add(double x) {
    ++count_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(count_);
    m2_ += d * (x - mean_);
  }
  std::size_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }
  double standard_error() const;

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace multipin::stats

#endif  // MULTIPIN_STATISTICS_HPP_
