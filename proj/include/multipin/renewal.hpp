#ifndef MULTIPIN_RENEWAL_HPP_
#define MULTIPIN_RENEWAL_HPP_

#include <span>
#include <vector>

#include "multipin/alias_table.hpp"
#include "multipin/rng.hpp"

namespace multipin::renewal {

/// One renewal step: gap n >= 2 and interface-change mark in {-1, 0, +1}.
struct Step {
  long n;
  int mark;
};

/// Tilted step law K(n, j) = e^delta q^{|j|}(n) e^{-phi n} on a finite
/// interface lattice, tabulated up to a horizon with a certified tail bound.
class TiltedStepLaw {
 public:
  /// Tabulates until the untabulated mass is <= tolerance.
  /// Throws std::runtime_error when the horizon cap is reached first.
  static TiltedStepLaw build(double delta, long T, double tolerance = 1e-12,
                             long cap = 1'000'000);

  double delta() const noexcept { return delta_; }
  long spacing() const noexcept { return spacing_; }
  double phi() const noexcept { return phi_; }
  long horizon() const noexcept { return static_cast<long>(same_.size()) - 1; }

  /// Upper bound on the step-law mass beyond the horizon.
  double tail_mass() const noexcept { return tail_; }

  /// K(n, 0), K(n, +1) (= K(n, -1)) and their total; zero outside 2..horizon.
  double same(long n) const noexcept { return in_range(n) ? same_[static_cast<std::size_t>(n)] : 0.0; }
  double jump(long n) const noexcept { return in_range(n) ? jump_[static_cast<std::size_t>(n)] : 0.0; }
  double total(long n) const noexcept { return in_range(n) ? total_[static_cast<std::size_t>(n)] : 0.0; }

  /// Totals indexed 0..horizon.
  std::span<const double> totals() const noexcept { return total_; }

  /// Tabulated mass, sum_n total(n).
  double table_mass() const noexcept { return table_mass_; }

  /// Tabulated probability of an interface change, 2 sum_n jump(n).
  double jump_probability() const noexcept { return jump_mass_; }

  /// Exact draw: alias table over the tabulated atoms plus a rejection branch
  /// for the tail, proposed from the geometric majorant.
  Step sample(RandomStream& stream) const;

 private:
  TiltedStepLaw() = default;
  bool in_range(long n) const noexcept { return n >= 0 && n <= horizon(); }
  Step sample_tail(RandomStream& stream, bool& accepted) const;

  double delta_ = 0.0;
  long spacing_ = 2;
  double phi_ = 0.0;
  double tail_ = 0.0;
  double table_mass_ = 0.0;
  double jump_mass_ = 0.0;
  std::vector<double> same_;
  std::vector<double> jump_;
  std::vector<double> total_;

  struct Atom {
    long n;
    int mark;
  };
  std::vector<Atom> atoms_;  // alias index -> atom; n = 0 marks the tail branch
  AliasTable alias_;
};

/// u(n) = P(n is a renewal epoch) for n = 0..N, by direct convolution.
struct RenewalMass {
  std::vector<double> u;
  double at(long n) const { return u.at(static_cast<std::size_t>(n)); }
  long length() const noexcept { return static_cast<long>(u.size()) - 1; }
};

RenewalMass renewal_mass(const TiltedStepLaw& law, long N);

struct IdentityCheck {
  double lhs;  // log of the constrained partition function
  double rhs;  // phi N + log u(N)
  double gap;
};

/// Compares the constrained partition function with e^{phi N} u(N).
/// phi_shift perturbs phi in the right-hand side only (sensitivity hook).
IdentityCheck partition_identity_check(double delta, long T, long N, double phi_shift = 0.0);

/// The same comparison for every even N in 0..N_max, sharing one step law,
/// one renewal convolution and one transfer run. Entry i holds N = 2 i.
std::vector<IdentityCheck> partition_identity_sweep(double delta, long T, long N_max,
                                                    double phi_shift = 0.0);

}  // namespace multipin::renewal

#endif  // MULTIPIN_RENEWAL_HPP_
