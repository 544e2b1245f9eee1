#include "multipin/statistics.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>

namespace multipin::stats {

Histogram histogram(const std::vector<long>& values) {
  Histogram h;
  for (long v : values) h[v] += 1.0;
  return h;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("KS statistic needs a nonempty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  std::size_t i = 0;
  // ties are stepped over together so discrete samples are handled exactly
  while (i < sample.size()) {
    std::size_t j = i;
    while (j < sample.size() && sample[j] == sample[i]) ++j;
    const double f = cdf(sample[i]);
    const double below = static_cast<double>(i) / n;
    const double upto = static_cast<double>(j) / n;
    d = std::max({d, std::abs(upto - f), std::abs(f - below)});
    i = j;
  }
  return d;
}

double ks_radius(std::size_t M, double coefficient) {
  if (M == 0) throw std::invalid_argument("KS radius needs M > 0");
  return coefficient / std::sqrt(static_cast<double>(M));
}

double tv_distance(const Histogram& a, const Histogram& b) {
  double mass_a = 0.0;
  double mass_b = 0.0;
  for (const auto& [k, v] : a) mass_a += v;
  for (const auto& [k, v] : b) mass_b += v;
  if (!(mass_a > 0.0) || !(mass_b > 0.0)) throw std::invalid_argument("TV needs nonempty histograms");
  double sum = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      sum += ia->second / mass_a;
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      sum += ib->second / mass_b;
      ++ib;
    } else {
      sum += std::abs(ia->second / mass_a - ib->second / mass_b);
      ++ia;
      ++ib;
    }
  }
  return 0.5 * sum;
}

ChiSquare chi_square_two_sample(const Histogram& a, const Histogram& b, double min_count) {
  Histogram keys;
  for (const auto& [k, v] : a) keys[k] += v;
  for (const auto& [k, v] : b) keys[k] += v;
  double total_a = 0.0;
  double total_b = 0.0;
  for (const auto& [k, v] : a) total_a += v;
  for (const auto& [k, v] : b) total_b += v;
  if (!(total_a > 0.0) || !(total_b > 0.0)) throw std::invalid_argument("chi-square needs nonempty samples");

  // pool adjacent sparse bins in key order
  std::vector<std::pair<double, double>> bins;
  double pa = 0.0;
  double pb = 0.0;
  for (const auto& [k, pooled] : keys) {
    const auto fa = a.find(k);
    const auto fb = b.find(k);
    pa += fa == a.end() ? 0.0 : fa->second;
    pb += fb == b.end() ? 0.0 : fb->second;
    if (pa + pb >= min_count) {
      bins.emplace_back(pa, pb);
      pa = pb = 0.0;
    }
  }
  if (pa + pb > 0.0) {
    if (bins.empty()) {
      bins.emplace_back(pa, pb);
    } else {
      bins.back().first += pa;
      bins.back().second += pb;
    }
  }
  const double ka = std::sqrt(total_b / total_a);
  const double kb = std::sqrt(total_a / total_b);
  double stat = 0.0;
  for (const auto& [x, y] : bins) {
    const double diff = ka * x - kb * y;
    stat += diff * diff / (x + y);
  }
  ChiSquare out{stat, static_cast<long>(bins.size()) - 1, 1.0};
  if (out.dof > 0) out.p_value = boost::math::gamma_q(0.5 * static_cast<double>(out.dof), 0.5 * stat);
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double poisson_pmf(long k, double t) {
  if (k < 0) return 0.0;
  if (t == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(static_cast<double>(k) * std::log(t) - t - std::lgamma(static_cast<double>(k) + 1.0));
}

Histogram poisson_law(double t, double tail) {
  if (!(t >= 0.0)) throw std::invalid_argument("Poisson parameter must be >= 0");
  Histogram law;
  double mass = 0.0;
  for (long k = 0;; ++k) {
    const double p = poisson_pmf(k, t);
    law[k] = p;
    mass += p;
    if (static_cast<double>(k) > t && 1.0 - mass < tail) break;
    if (k > 100000) break;
  }
  return law;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile level outside [0,1]");
  std::sort(values.begin(), values.end());
  const double rank = std::ceil(q * static_cast<double>(values.size()));
  const auto index = static_cast<std::size_t>(std::max(1.0, rank)) - 1;
  return values[std::min(index, values.size() - 1)];
}

double Moments::standard_error() const {
  return count_ > 1 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
}

}  // namespace multipin::stats
