#ifndef MULTIPIN_EXACT_POLYMER_HPP_
#define MULTIPIN_EXACT_POLYMER_HPP_

#include <vector>

#include "multipin/kernels.hpp"

namespace multipin::exact_polymer {

// Exact oracles for the pinned walk: Z_N = E[exp(delta * #{1 <= i <= N : S_i in T Z})].
// Infinite spacing is handled as a cylinder wider than the walk can reach.

/// log Z_N by transfer on Z / T Z, O(N T).
double log_z_free_dp(long N, double delta, const InterfaceSpacing& T);

/// log of the constrained partition function (S_N on an interface). N even.
double log_z_constrained_dp(long N, double delta, const InterfaceSpacing& T);

/// Constrained values for every n = 0..N; odd entries are -infinity.
std::vector<double> log_z_constrained_prefix(long N, double delta, const InterfaceSpacing& T);

/// Exhaustive enumeration of all 2^N paths, N <= 20.
double log_z_bruteforce(long N, double delta, const InterfaceSpacing& T, bool constrained = false);

struct Sandwich {
  double log_z;
  double log_lower;  // log(e^{-|delta|} Zc_{2 floor(N/2)})
  double log_upper;  // log sqrt((N + 1) Zc_{2N})
  bool lower_holds;
  bool upper_holds;
  bool holds() const noexcept { return lower_holds && upper_holds; }
  double lower_slack() const noexcept { return log_z - log_lower; }
  double upper_slack() const noexcept { return log_upper - log_z; }
};

/// Free partition function against its constrained lower and upper bounds.
Sandwich sandwich_check(long N, double delta, const InterfaceSpacing& T);

/// Exact E[L_N / N] under the polymer measure.
double contact_fraction(long N, double delta, const InterfaceSpacing& T);

/// Exact law of S_N under the polymer measure.
struct EndpointLaw {
  long N = 0;
  std::vector<double> probs;  // probs[s + N] = P(S_N = s)

  double at(long s) const {
    return (s < -N || s > N) ? 0.0 : probs[static_cast<std::size_t>(s + N)];
  }
};

inline constexpr long kEndpointBudget = 4000;

/// Band transfer over positions -N..N. Throws when N exceeds kEndpointBudget.
EndpointLaw endpoint_law_dp(long N, double delta, const InterfaceSpacing& T);

}  // namespace multipin::exact_polymer

#endif  // MULTIPIN_EXACT_POLYMER_HPP_
