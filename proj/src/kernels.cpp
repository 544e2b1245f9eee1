#include "multipin/kernels.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace multipin {

InterfaceSpacing InterfaceSpacing::finite(long spacing) {
  if (spacing < 2 || spacing % 2 != 0) {
    throw std::invalid_argument("interface spacing must be an even integer >= 2, got " +
                                std::to_string(spacing));
  }
  return InterfaceSpacing{spacing};
}

InterfaceSpacing InterfaceSpacing::parse(std::string_view text) {
  if (text == "inf" || text == "+inf" || text == "infinity" || text == "Inf") {
    return infinite();
  }
  long value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("cannot parse interface spacing '" + std::string(text) + "'");
  }
  return finite(value);
}

long InterfaceSpacing::value() const {
  if (is_infinite()) throw std::logic_error("infinite interface spacing has no integer value");
  return spacing_;
}

std::string InterfaceSpacing::to_string() const {
  return is_infinite() ? std::string("inf") : std::to_string(spacing_);
}

namespace kernels {
namespace {

void require_spacing(long T) {
  if (T < 2 || T % 2 != 0) {
    throw std::invalid_argument("interface spacing must be an even integer >= 2, got " +
                                std::to_string(T));
  }
}

// tanh(sqrt(z))/sqrt(z), continued analytically to z < 0 as tan(sqrt(-z))/sqrt(-z).
double tanhc(double z) {
  if (std::abs(z) < 1e-4) {
    return 1.0 + z * (-1.0 / 3.0 + z * (2.0 / 15.0 + z * (-17.0 / 315.0 + z * (62.0 / 2835.0))));
  }
  if (z > 0.0) {
    const double s = std::sqrt(z);
    return std::tanh(s) / s;
  }
  const double s = std::sqrt(-z);
  return std::tan(s) / s;
}

// sinh(sqrt(z))/sqrt(z), continued to z < 0 as sin(sqrt(-z))/sqrt(-z).
double sinhc(double z) {
  if (std::abs(z) < 1e-4) {
    return 1.0 + z * (1.0 / 6.0 + z * (1.0 / 120.0 + z * (1.0 / 5040.0 + z * (1.0 / 362880.0))));
  }
  if (z > 0.0) {
    const double s = std::sqrt(z);
    return std::sinh(s) / s;
  }
  const double s = std::sqrt(-z);
  return std::sin(s) / s;
}

// Signed square of the martingale parameter: mu^2 with cosh(mu) = e^lambda
// for lambda > 0, and -theta^2 with cos(theta) = e^lambda for lambda < 0.
double signed_mu_squared(double lambda) {
  if (lambda > 0.0) {
    const double mu = lambda + std::log1p(std::sqrt(-std::expm1(-2.0 * lambda)));
    return mu * mu;
  }
  if (lambda < 0.0) {
    const double theta = std::atan(std::sqrt(std::expm1(-2.0 * lambda)));
    return -theta * theta;
  }
  return 0.0;
}

void require_domain(const InterfaceSpacing& T, double lambda) {
  if (std::isnan(lambda)) throw std::domain_error("Laplace parameter is NaN");
  if (T.is_infinite()) {
    if (lambda < 0.0) {
      throw std::domain_error("single-interface transform diverges for lambda < 0");
    }
    return;
  }
  require_spacing(T.value());
  if (lambda <= lambda0(T.value())) {
    throw std::domain_error("lambda = " + std::to_string(lambda) +
                            " is at or below the first pole lambda0(T)");
  }
}

double cos_pi_over(long T) { return std::cos(std::numbers::pi / static_cast<double>(T)); }

}  // namespace

double q0_series(long T, long n) {
  require_spacing(T);
  if (n < 2 || n % 2 != 0) return 0.0;
  if (T == 2) return n == 2 ? 0.5 : 0.0;
  const double t = static_cast<double>(T);
  double sum = 0.0;
  for (long nu = 1; nu < T; ++nu) {
    const double angle = std::numbers::pi * static_cast<double>(nu) / t;
    const double s = std::sin(angle);
    sum += std::pow(std::cos(angle), static_cast<double>(n - 2)) * s * s;
  }
  return sum / t;
}

double q1_series(long T, long n) {
  require_spacing(T);
  // The walk needs at least T steps to reach a neighbouring interface.
  if (n < T || (n - T) % 2 != 0) return 0.0;
  if (T == 2) return n == 2 ? 0.25 : 0.0;
  const double t = static_cast<double>(T);
  double sum = 0.0;
  for (long nu = 1; nu < T; ++nu) {
    const double angle = std::numbers::pi * static_cast<double>(nu) / t;
    const double s = std::sin(angle);
    const double term = std::pow(std::cos(angle), static_cast<double>(n - 2)) * s * s;
    sum += (nu % 2 == 1) ? term : -term;
  }
  return std::max(0.0, sum / (2.0 * t));
}

double q_total(long T, long n) { return q0_series(T, n) + 2.0 * q1_series(T, n); }

double lambda0(long T) {
  require_spacing(T);
  if (T == 2) return -std::numeric_limits<double>::infinity();
  const double tangent = std::tan(std::numbers::pi / static_cast<double>(T));
  return -0.5 * std::log1p(tangent * tangent);
}

double Q0_closed(const InterfaceSpacing& T, double lambda) {
  require_domain(T, lambda);
  if (T.is_infinite()) return 1.0 - std::sqrt(-std::expm1(-2.0 * lambda));
  const long spacing = T.value();
  if (spacing == 2) return 0.5 * std::exp(-2.0 * lambda);
  const double t = static_cast<double>(spacing);
  const double z = signed_mu_squared(lambda);
  return 1.0 - tanhc(z) / (t * tanhc(t * t * z));
}

double Q1_closed(const InterfaceSpacing& T, double lambda) {
  require_domain(T, lambda);
  if (T.is_infinite()) return 0.0;
  const long spacing = T.value();
  if (spacing == 2) return 0.25 * std::exp(-2.0 * lambda);
  const double t = static_cast<double>(spacing);
  const double z = signed_mu_squared(lambda);
  if (z > 0.0) {
    const double mu = std::sqrt(z);
    if (mu * t > 1.0) {
      // tanh(mu) / (2 sinh(mu T)) without overflow for large mu T
      const double tanh_mu = std::sqrt(-std::expm1(-2.0 * lambda));
      return tanh_mu * std::exp(-mu * t) / (-std::expm1(-2.0 * mu * t));
    }
  }
  return tanhc(z) / (2.0 * t * sinhc(t * t * z));
}

double Q_closed(const InterfaceSpacing& T, double lambda) {
  require_domain(T, lambda);
  if (T.is_infinite()) return 1.0 - std::sqrt(-std::expm1(-2.0 * lambda));
  const long spacing = T.value();
  if (spacing == 2) return std::exp(-2.0 * lambda);
  // Q = 1 - tanh(mu) tanh(mu T / 2)
  const double t = static_cast<double>(spacing);
  const double z = signed_mu_squared(lambda);
  return 1.0 - 0.5 * t * z * tanhc(z) * tanhc(0.25 * t * t * z);
}

double Q_closed_derivative(const InterfaceSpacing& T, double lambda) {
  require_domain(T, lambda);
  if (T.is_infinite()) {
    if (lambda == 0.0) return -std::numeric_limits<double>::infinity();
    return -std::exp(-2.0 * lambda) / std::sqrt(-std::expm1(-2.0 * lambda));
  }
  const long spacing = T.value();
  if (spacing == 2) return -2.0 * std::exp(-2.0 * lambda);
  const double t = static_cast<double>(spacing);
  const double z = signed_mu_squared(lambda);
  const double tz = tanhc(z);
  const double w = 0.25 * t * t * z;
  const double tw = tanhc(w);
  const double sech2_mu = 1.0 - z * tz * tz;
  const double sech2_half = 1.0 - w * tw * tw;
  return -(sech2_mu * 0.5 * t * tw / tz + 0.5 * t * sech2_half);
}

namespace {

struct Majorant {
  double prefactor;  // 2 / cos^2(pi/T)
  double ratio;      // cos(pi/T) e^{-lambda}
};

Majorant majorant(long T, double lambda) {
  require_spacing(T);
  const double c = cos_pi_over(T);
  const double r = c * std::exp(-lambda);
  if (!(r < 1.0)) {
    throw std::domain_error("tail majorant does not converge for lambda <= lambda0(T)");
  }
  return {2.0 / (c * c), r};
}

}  // namespace

double tail_bound(long T, double lambda, long horizon) {
  return tail_moment_bound(T, lambda, horizon, 0);
}

double tail_moment_bound(long T, double lambda, long horizon, int k) {
  require_spacing(T);
  if (k < 0 || k > 2) throw std::invalid_argument("tail_moment_bound supports k = 0, 1, 2");
  if (horizon < 2) throw std::invalid_argument("horizon must be >= 2");
  if (T == 2) return 0.0;  // first passage time is exactly 2
  const Majorant m = majorant(T, lambda);
  // the majorant is summed over even n = H + 2j, j >= 1, with H the even floor
  const long h = horizon - horizon % 2;
  const double a = m.ratio * m.ratio;
  const double s0 = a / (1.0 - a);
  const double s1 = a / ((1.0 - a) * (1.0 - a));
  const double s2 = a * (1.0 + a) / ((1.0 - a) * (1.0 - a) * (1.0 - a));
  const double hd = static_cast<double>(h);
  double sum = s0;
  if (k == 1) sum = hd * s0 + 2.0 * s1;
  if (k == 2) sum = hd * hd * s0 + 4.0 * hd * s1 + 4.0 * s2;
  return m.prefactor * std::pow(m.ratio, hd) * sum;
}

long horizon_for(long T, double lambda, double tolerance, long cap) {
  require_spacing(T);
  if (T == 2) return 2;
  const Majorant m = majorant(T, lambda);
  const double a = m.ratio * m.ratio;
  const double needed = std::log(tolerance * (1.0 - a) / (m.prefactor * a)) / std::log(m.ratio);
  double h = std::ceil(std::max(2.0, needed));
  if (h > static_cast<double>(cap)) return cap - cap % 2;
  long horizon = static_cast<long>(h);
  horizon += horizon % 2;
  while (horizon < cap && tail_bound(T, lambda, horizon) > tolerance) horizon += 2;
  return std::min(horizon, cap - cap % 2);
}

KernelTable::KernelTable(long T, long horizon)
    : spacing_(T),
      q0_(static_cast<std::size_t>(horizon) + 1, 0.0),
      q1_(static_cast<std::size_t>(horizon) + 1, 0.0) {
  require_spacing(T);
  if (horizon < 2) throw std::invalid_argument("kernel horizon must be >= 2");

  // Feller sum over nu = 1..T-1; angles and sin^2 are shared by every n.
  const double t = static_cast<double>(T);
  std::vector<double> cosines;
  std::vector<double> sines2;
  for (long nu = 1; nu < T; ++nu) {
    const double angle = std::numbers::pi * static_cast<double>(nu) / t;
    cosines.push_back(std::cos(angle));
    sines2.push_back(std::sin(angle) * std::sin(angle));
  }
  for (long n = 2; n <= horizon; n += 2) {
    double same = 0.0;
    double jump = 0.0;
    const double power = static_cast<double>(n - 2);
    for (std::size_t i = 0; i < cosines.size(); ++i) {
      const double term = std::pow(cosines[i], power) * sines2[i];
      same += term;
      jump += (i % 2 == 0) ? term : -term;  // nu = i + 1
    }
    q0_[static_cast<std::size_t>(n)] = same / t;
    if (n >= T) q1_[static_cast<std::size_t>(n)] = std::max(0.0, jump / (2.0 * t));
  }
  tail_ = tail_bound(T, 0.0, horizon);
}

KernelTable KernelTable::with_tolerance(long T, double tolerance, long cap) {
  return KernelTable(T, horizon_for(T, 0.0, tolerance, cap));
}

KernelTable KernelTable::with_horizon(long T, long horizon) { return KernelTable(T, horizon); }

}  // namespace kernels
}  // namespace multipin
