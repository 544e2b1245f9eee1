#ifndef MULTIPIN_KERNELS_HPP_
#define MULTIPIN_KERNELS_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace multipin {

/// Distance between neighbouring interfaces: an even integer >= 2, or
/// infinity (a single interface at height zero).
class InterfaceSpacing {
 public:
  static InterfaceSpacing finite(long spacing);
  static InterfaceSpacing infinite() noexcept { return InterfaceSpacing{}; }

  /// Accepts "inf" (also "infinity", "+inf") or an even integer.
  static InterfaceSpacing parse(std::string_view text);

  bool is_finite() const noexcept { return spacing_ != 0; }
  bool is_infinite() const noexcept { return spacing_ == 0; }

  /// Throws std::logic_error for the infinite spacing.
  long value() const;

  std::string to_string() const;

  friend bool operator==(const InterfaceSpacing&, const InterfaceSpacing&) = default;

 private:
  InterfaceSpacing() = default;
  explicit InterfaceSpacing(long spacing) : spacing_(spacing) {}

  long spacing_ = 0;  // 0 encodes infinity
};

namespace kernels {

// First-passage law of the simple random walk started at 0 to the set T*Z.
// q0(n): first hit at time n lands on the starting interface.
// q1(n): first hit at time n lands on the interface above (same mass below).
// All functions below reject odd T and T < 2 with std::invalid_argument.

double q0_series(long T, long n);
double q1_series(long T, long n);

/// q0 + 2 q1, the law of the first hitting time.
double q_total(long T, long n);

/// First pole of the Laplace transforms, log cos(pi/T). -infinity for T = 2.
double lambda0(long T);

/// Laplace transforms E(exp(-lambda tau) ; mark). For infinite spacing the
/// jump transform is identically zero and lambda must be >= 0.
/// Throws std::domain_error when lambda is outside the domain of convergence.
double Q0_closed(const InterfaceSpacing& T, double lambda);
double Q1_closed(const InterfaceSpacing& T, double lambda);
double Q_closed(const InterfaceSpacing& T, double lambda);

/// d/dlambda Q_closed. Equals -E(tau exp(-lambda tau)).
double Q_closed_derivative(const InterfaceSpacing& T, double lambda);

/// Upper bound on sum_{n > horizon} q_total(T, n) exp(-lambda n), from the
/// geometric majorant q_total(T, n) <= 2 cos^{n-2}(pi/T).
double tail_bound(long T, double lambda, long horizon);

/// Same majorant applied to sum_{n > horizon} n^k q_total(T, n) exp(-lambda n)
/// for k = 1 and k = 2.
double tail_moment_bound(long T, double lambda, long horizon, int k);

/// Smallest even horizon >= 2 whose tail bound is <= tolerance, capped.
long horizon_for(long T, double lambda, double tolerance, long cap);

/// Tabulated q0/q1 with a certified bound on the untabulated mass.
class KernelTable {
 public:
  /// Horizon chosen so that tail_mass_bound() <= tolerance, or the cap is hit
  /// (in which case the achieved bound is reported).
  static KernelTable with_tolerance(long T, double tolerance = 1e-12,
                                    long cap = 1'000'000);
  static KernelTable with_horizon(long T, long horizon);

  long spacing() const noexcept { return spacing_; }
  long horizon() const noexcept { return static_cast<long>(q0_.size()) - 1; }
  double tail_mass_bound() const noexcept { return tail_; }

  /// Indexed by n in 0..horizon; entry 0 is zero.
  std::span<const double> q0() const noexcept { return q0_; }
  std::span<const double> q1() const noexcept { return q1_; }

  double q0(long n) const { return q0_.at(static_cast<std::size_t>(n)); }
  double q1(long n) const { return q1_.at(static_cast<std::size_t>(n)); }
  double q(long n) const { return q0(n) + 2.0 * q1(n); }

 private:
  KernelTable(long T, long horizon);

  long spacing_;
  std::vector<double> q0_;
  std::vector<double> q1_;
  double tail_ = 0.0;
};

}  // namespace kernels
}  // namespace multipin

#endif  // MULTIPIN_KERNELS_HPP_
