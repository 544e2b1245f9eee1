#ifndef MULTIPIN_FREE_ENERGY_HPP_
#define MULTIPIN_FREE_ENERGY_HPP_

#include <optional>
#include <string_view>

#include "multipin/kernels.hpp"

namespace multipin::free_energy {

/// Free energy phi(delta, T): the root of Q_T(lambda) = exp(-delta) for finite
/// T, the closed form for infinite T (zero for delta <= 0).
double phi(double delta, const InterfaceSpacing& T);

/// Closed form for the single-interface model.
double phi_inf(double delta);

/// |Q_T(phi) - exp(-delta)|.
double root_residual(double delta, const InterfaceSpacing& T);

/// Decay rate of the interface-jump probability. Requires delta > 0.
double c_delta(double delta);

/// The same constant through phi(delta, inf), used as a cross-check.
double c_delta_via_phi(double delta);

/// Derivative of phi_inf for delta > 0, the single-interface contact density.
double phi_prime_inf(double delta);

/// Mean of the tilted step law, 1/phi'(delta, T). Finite T sums the kernel
/// series up to a certified horizon; infinite T needs delta > 0.
double step_mean(double delta, const InterfaceSpacing& T);

/// k-th moment (k = 1, 2) of the tilted step law.
double step_moment(double delta, const InterfaceSpacing& T, int k);

enum class Regime { gaussian, critical, single_interface };

std::string_view to_string(Regime regime);

struct RegimeOffset {
  double delta_N;  // T_N - log N / c_delta
  Regime regime;
};

/// Classifies by |delta_N| <= band as critical, below as gaussian, above as
/// single-interface.
RegimeOffset regime_offset(double N, long T_N, double delta, double band = 2.0);

struct DerivedConstants {
  double delta = 0.0;
  double zeta = 0.0;
  double phi = 0.0;           // phi(delta, T) for the requested T
  double phi_inf = 0.0;
  double phi_prime_inf = 0.0; // s_inf
  double c_delta = 0.0;
  double C_delta = 0.0;
  double C_delta_closed = 0.0;  // second closed form, must agree with C_delta
  double step_mean = 0.0;       // m(delta, T)
  double s_T = 0.0;             // 1 / step_mean
  double t_zeta = 0.0;
  double t_zeta_closed = 0.0;
  double v_zeta = 0.0;
  double delta_N = 0.0;  // NaN unless N and a finite T were supplied
};

/// All constants of the scaling theory. Requires delta > 0.
DerivedConstants scaling_constants(double delta, double zeta,
                                   const InterfaceSpacing& T = InterfaceSpacing::infinite(),
                                   std::optional<double> N = std::nullopt);

/// Q1_T(phi(delta,T)) / ((1 - e^-delta) e^{-c_delta T}); tends to 1 in T.
double q1_asymptotic_ratio(double delta, long T);

/// Horizon of a kernel table adequate for sums weighted by exp(-phi n).
long horizon_at(long T, double phi, double tolerance = 1e-13, long cap = 1'000'000);

}  // namespace multipin::free_energy

#endif  // MULTIPIN_FREE_ENERGY_HPP_
