#include "multipin/renewal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "multipin/exact_polymer.hpp"
#include "multipin/free_energy.hpp"
#include "multipin/kernels.hpp"

namespace multipin::renewal {

TiltedStepLaw TiltedStepLaw::build(double delta, long T, double tolerance, long cap) {
  const InterfaceSpacing spacing = InterfaceSpacing::finite(T);
  TiltedStepLaw law;
  law.delta_ = delta;
  law.spacing_ = T;
  law.phi_ = free_energy::phi(delta, spacing);

  const double weight = std::exp(delta);
  const long horizon = kernels::horizon_for(T, law.phi_, tolerance / weight, cap);
  law.tail_ = weight * kernels::tail_bound(T, law.phi_, horizon);
  if (law.tail_ > tolerance) {
    throw std::runtime_error("step law tail bound " + std::to_string(law.tail_) +
                             " exceeds tolerance at horizon cap " + std::to_string(cap));
  }

  const auto table = kernels::KernelTable::with_horizon(T, horizon);
  const auto size = static_cast<std::size_t>(horizon) + 1;
  law.same_.assign(size, 0.0);
  law.jump_.assign(size, 0.0);
  law.total_.assign(size, 0.0);

  std::vector<double> weights;
  for (long n = 2; n <= horizon; n += 2) {
    const auto i = static_cast<std::size_t>(n);
    const double tilt = std::exp(delta - law.phi_ * static_cast<double>(n));
    law.same_[i] = table.q0(n) * tilt;
    law.jump_[i] = table.q1(n) * tilt;
    law.total_[i] = law.same_[i] + 2.0 * law.jump_[i];
    law.table_mass_ += law.total_[i];
    law.jump_mass_ += 2.0 * law.jump_[i];
    if (law.same_[i] > 0.0) {
      law.atoms_.push_back({n, 0});
      weights.push_back(law.same_[i]);
    }
    if (law.jump_[i] > 0.0) {
      law.atoms_.push_back({n, +1});
      weights.push_back(law.jump_[i]);
      law.atoms_.push_back({n, -1});
      weights.push_back(law.jump_[i]);
    }
  }
  if (law.tail_ > 0.0) {
    law.atoms_.push_back({0, 0});
    weights.push_back(law.tail_);
  }
  law.alias_ = AliasTable(weights);
  return law;
}

Step TiltedStepLaw::sample_tail(RandomStream& stream, bool& accepted) const {
  // majorant e^delta 2 c^{n-2} e^{-phi n} on n = H + 2k, k >= 1
  const double c = std::cos(std::numbers::pi / static_cast<double>(spacing_));
  const double ratio = c * std::exp(-phi_);
  const double a = ratio * ratio;
  const double k = 1.0 + std::floor(std::log(stream.uniform_positive()) / std::log(a));
  const long h = horizon() - horizon() % 2;
  if (k > 1e12) {
    accepted = false;
    return {0, 0};
  }
  const long n = h + 2 * static_cast<long>(k);
  const double q0 = kernels::q0_series(spacing_, n);
  const double q1 = kernels::q1_series(spacing_, n);
  const double q = q0 + 2.0 * q1;
  const double bound = 2.0 * std::pow(c, static_cast<double>(n - 2));
  const double u = stream.uniform();
  accepted = u * bound < q;
  if (!accepted) return {0, 0};
  const double v = stream.uniform() * q;
  if (v < q0) return {n, 0};
  return {n, v < q0 + q1 ? +1 : -1};
}

Step TiltedStepLaw::sample(RandomStream& stream) const {
  for (;;) {
    const Atom& atom = atoms_[alias_.sample(stream.uniform())];
    if (atom.n != 0) return {atom.n, atom.mark};
    bool accepted = false;
    const Step step = sample_tail(stream, accepted);
    if (accepted) return step;
  }
}

RenewalMass renewal_mass(const TiltedStepLaw& law, long N) {
  if (N < 0) throw std::invalid_argument("renewal mass needs N >= 0");
  RenewalMass out;
  out.u.assign(static_cast<std::size_t>(N) + 1, 0.0);
  out.u[0] = 1.0;
  const auto K = law.totals();
  const long horizon = law.horizon();
  for (long n = 2; n <= N; n += 2) {
    double sum = 0.0;
    const long top = std::min(n, horizon);
    for (long m = 2; m <= top; m += 2) {
      sum += K[static_cast<std::size_t>(m)] * out.u[static_cast<std::size_t>(n - m)];
    }
    out.u[static_cast<std::size_t>(n)] = sum;
  }
  return out;
}

IdentityCheck partition_identity_check(double delta, long T, long N, double phi_shift) {
  if (N < 0 || N % 2 != 0) throw std::invalid_argument("identity check needs even N >= 0");
  const auto law = TiltedStepLaw::build(delta, T);
  const auto mass = renewal_mass(law, N);
  IdentityCheck check{};
  check.lhs = exact_polymer::log_z_constrained_dp(N, delta, InterfaceSpacing::finite(T));
  check.rhs = (law.phi() + phi_shift) * static_cast<double>(N) + std::log(mass.at(N));
  check.gap = std::abs(check.lhs - check.rhs);
  return check;
}

std::vector<IdentityCheck> partition_identity_sweep(double delta, long T, long N_max,
                                                    double phi_shift) {
  if (N_max < 0) throw std::invalid_argument("identity sweep needs N_max >= 0");
  const auto law = TiltedStepLaw::build(delta, T);
  const auto mass = renewal_mass(law, N_max);
  const auto lhs = exact_polymer::log_z_constrained_prefix(N_max, delta, InterfaceSpacing::finite(T));
  std::vector<IdentityCheck> out;
  for (long n = 0; n <= N_max; n += 2) {
    IdentityCheck check{};
    check.lhs = lhs[static_cast<std::size_t>(n)];
    check.rhs = (law.phi() + phi_shift) * static_cast<double>(n) + std::log(mass.at(n));
    check.gap = std::abs(check.lhs - check.rhs);
    out.push_back(check);
  }
  return out;
}

}  // namespace multipin::renewal
