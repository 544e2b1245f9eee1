#include "multipin/free_energy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace multipin::free_energy {
namespace {

double phi_finite(double delta, long T) {
  if (delta == 0.0) return 0.0;
  if (T == 2) return 0.5 * delta;  // Q_2(lambda) = exp(-2 lambda)
  const InterfaceSpacing spacing = InterfaceSpacing::finite(T);
  const double target = std::exp(-delta);
  auto f = [&](double lambda) { return kernels::Q_closed(spacing, lambda) - target; };

  double lo = std::max(kernels::lambda0(T) + 1e-9, -50.0);
  double hi = 1.0;
  while (f(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw std::logic_error("free energy bracket not found");
  }
  if (f(lo) < 0.0) throw std::logic_error("free energy bracket lower end has wrong sign");

  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  double best = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
  double best_residual = std::abs(f(best));
  for (int it = 0; it < 3; ++it) {
    const double slope = kernels::Q_closed_derivative(spacing, best);
    const double next = best - f(best) / slope;
    if (!(next > kernels::lambda0(T))) break;
    const double residual = std::abs(f(next));
    if (residual >= best_residual) break;
    best = next;
    best_residual = residual;
  }
  return best;
}

void require_positive(double delta, const char* what) {
  if (!(delta > 0.0)) {
    throw std::domain_error(std::string(what) + " requires delta > 0");
  }
}

// e^delta * sum_n n^k q(n) e^{-phi n} over the certified horizon.
double series_moment(double delta, long T, int k) {
  const double phi_value = phi_finite(delta, T);
  if (T == 2) return std::pow(2.0, k);
  // the polynomial weight fattens the tail, so widen the mass horizon until the moment tail is small too
  constexpr long cap = 1'000'000;
  long horizon = horizon_at(T, phi_value);
  while (std::exp(delta) * kernels::tail_moment_bound(T, phi_value, horizon, k) > 1e-13 && horizon < cap) {
    horizon = std::min(cap, horizon + horizon / 4 + 2);
    horizon -= horizon % 2;
  }
  const double tail = kernels::tail_moment_bound(T, phi_value, horizon, k);
  if (std::exp(delta) * tail > 1e-9) {
    throw std::runtime_error("step moment tail did not converge within the horizon cap");
  }
  const auto table = kernels::KernelTable::with_horizon(T, horizon);
  double sum = 0.0;
  for (long n = 2; n <= horizon; n += 2) {
    const double nd = static_cast<double>(n);
    sum += std::pow(nd, k) * table.q(n) * std::exp(delta - phi_value * nd);
  }
  return sum;
}

}  // namespace

long horizon_at(long T, double phi, double tolerance, long cap) {
  return kernels::horizon_for(T, phi, tolerance, cap);
}

double phi_inf(double delta) {
  if (!(delta > 0.0)) return 0.0;
  return 0.5 * delta - 0.5 * std::log(2.0 - std::exp(-delta));
}

double phi(double delta, const InterfaceSpacing& T) {
  if (std::isnan(delta)) throw std::domain_error("delta is NaN");
  if (T.is_infinite()) return phi_inf(delta);
  return phi_finite(delta, T.value());
}

double root_residual(double delta, const InterfaceSpacing& T) {
  return std::abs(kernels::Q_closed(T, phi(delta, T)) - std::exp(-delta));
}

double c_delta(double delta) {
  require_positive(delta, "c_delta");
  return 0.5 * delta + 0.5 * std::log(2.0 - std::exp(-delta));
}

double c_delta_via_phi(double delta) {
  require_positive(delta, "c_delta");
  const double f = phi_inf(delta);
  return f + std::log1p(std::sqrt(-std::expm1(-2.0 * f)));
}

double phi_prime_inf(double delta) {
  require_positive(delta, "phi_prime_inf");
  const double e = std::exp(-delta);
  return -std::expm1(-delta) / (2.0 - e);
}

double step_mean(double delta, const InterfaceSpacing& T) { return step_moment(delta, T, 1); }

double step_moment(double delta, const InterfaceSpacing& T, int k) {
  if (k != 1 && k != 2) throw std::invalid_argument("step_moment supports k = 1, 2");
  if (T.is_finite()) return series_moment(delta, T.value(), k);
  require_positive(delta, "single-interface step moment");
  // derivatives of Q_inf at phi, with s = sqrt(1 - e^{-2 phi}) = 1 - e^{-delta}
  const double f = phi_inf(delta);
  const double s = -std::expm1(-delta);
  const double e2 = std::exp(-2.0 * f);
  if (k == 1) return std::exp(delta) * e2 / s;
  return std::exp(delta) * (2.0 * e2 / s + e2 * e2 / (s * s * s));
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::gaussian: return "gaussian";
    case Regime::critical: return "critical";
    case Regime::single_interface: return "single_interface";
  }
  return "unknown";
}

RegimeOffset regime_offset(double N, long T_N, double delta, double band) {
  const double offset = static_cast<double>(T_N) - std::log(N) / c_delta(delta);
  Regime regime = Regime::critical;
  if (offset < -band) regime = Regime::gaussian;
  if (offset > band) regime = Regime::single_interface;
  return {offset, regime};
}

DerivedConstants scaling_constants(double delta, double zeta, const InterfaceSpacing& T,
                                   std::optional<double> N) {
  require_positive(delta, "scaling_constants");
  DerivedConstants out;
  out.delta = delta;
  out.zeta = zeta;
  out.phi = phi(delta, T);
  out.phi_inf = phi_inf(delta);
  out.phi_prime_inf = phi_prime_inf(delta);
  out.c_delta = c_delta(delta);

  const double root = std::sqrt(-std::expm1(-2.0 * out.phi_inf));
  const double e = std::exp(-delta);
  const double one_minus = -std::expm1(-delta);
  out.C_delta = std::sqrt(2.0 * std::exp(delta) * out.phi_prime_inf * root);
  out.C_delta_closed = one_minus * std::sqrt(2.0 * std::exp(delta) / (2.0 - e));

  const double decay = std::exp(-out.c_delta * zeta);
  out.v_zeta = 2.0 * std::exp(delta) * root * decay;
  out.t_zeta = out.v_zeta * out.phi_prime_inf;
  out.t_zeta_closed = 2.0 * std::exp(delta) * one_minus * one_minus / (2.0 - e) * decay;

  out.step_mean = step_mean(delta, T);
  out.s_T = 1.0 / out.step_mean;
  out.delta_N = std::numeric_limits<double>::quiet_NaN();
  if (N && T.is_finite()) out.delta_N = regime_offset(*N, T.value(), delta).delta_N;
  return out;
}

double q1_asymptotic_ratio(double delta, long T) {
  require_positive(delta, "q1_asymptotic_ratio");
  const InterfaceSpacing spacing = InterfaceSpacing::finite(T);
  const double q1 = kernels::Q1_closed(spacing, phi(delta, spacing));
  // log-space denominator keeps large T finite
  const double log_den = std::log(-std::expm1(-delta)) - c_delta(delta) * static_cast<double>(T);
  return std::exp(std::log(q1) - log_den);
}

}  // namespace multipin::free_energy
