#include "multipin/exact_polymer.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace multipin::exact_polymer {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

long cylinder_width(long N, const InterfaceSpacing& T) {
  if (T.is_finite()) return T.value();
  const long width = N + 1 + (N + 1) % 2;
  return std::max(2L, width);
}

void require_length(long N) {
  if (N < 0) throw std::invalid_argument("polymer length must be >= 0");
}

// Transfer on the cylinder with per-step renormalization; the running log
// scale keeps every delta and N in range.
class CylinderTransfer {
 public:
  CylinderTransfer(long width, double delta)
      : width_(width), pin_(std::exp(delta)), weight_(static_cast<std::size_t>(width), 0.0),
        next_(weight_.size(), 0.0) {
    weight_[0] = 1.0;
  }

  void step() {
    const auto w = static_cast<std::size_t>(width_);
    for (std::size_t s = 0; s < w; ++s) {
      const std::size_t down = (s + w - 1) % w;
      const std::size_t up = (s + 1) % w;
      next_[s] = 0.5 * (weight_[down] + weight_[up]);
    }
    next_[0] *= pin_;
    weight_.swap(next_);
    const double total = std::accumulate(weight_.begin(), weight_.end(), 0.0);
    log_scale_ += std::log(total);
    for (double& x : weight_) x /= total;
  }

  double log_total() const { return log_scale_; }
  double log_at_interface() const {
    return weight_[0] > 0.0 ? log_scale_ + std::log(weight_[0]) : kNegInf;
  }

 private:
  long width_;
  double pin_;
  std::vector<double> weight_;
  std::vector<double> next_;
  double log_scale_ = 0.0;
};

}  // namespace

double log_z_free_dp(long N, double delta, const InterfaceSpacing& T) {
  require_length(N);
  CylinderTransfer transfer(cylinder_width(N, T), delta);
  for (long i = 0; i < N; ++i) transfer.step();
  return transfer.log_total();
}

std::vector<double> log_z_constrained_prefix(long N, double delta, const InterfaceSpacing& T) {
  require_length(N);
  std::vector<double> out(static_cast<std::size_t>(N) + 1, kNegInf);
  out[0] = 0.0;
  // a cylinder wider than 2N keeps the prefix exact for the infinite lattice
  const long width = T.is_finite() ? T.value() : cylinder_width(N, T);
  CylinderTransfer transfer(width, delta);
  for (long n = 1; n <= N; ++n) {
    transfer.step();
    if (n % 2 == 0) out[static_cast<std::size_t>(n)] = transfer.log_at_interface();
  }
  return out;
}

double log_z_constrained_dp(long N, double delta, const InterfaceSpacing& T) {
  if (N < 0 || N % 2 != 0) {
    throw std::invalid_argument("constrained partition function needs even N >= 0, got " +
                                std::to_string(N));
  }
  return log_z_constrained_prefix(N, delta, T).back();
}

double log_z_bruteforce(long N, double delta, const InterfaceSpacing& T, bool constrained) {
  if (N < 0 || N > 20) throw std::invalid_argument("brute force supports 0 <= N <= 20");
  if (constrained && N % 2 != 0) throw std::invalid_argument("constrained needs even N");
  auto on_interface = [&](long s) {
    if (T.is_infinite()) return s == 0;
    const long t = T.value();
    return ((s % t) + t) % t == 0;
  };
  // path counts by number of contacts, then one weighted sum
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(N) + 1, 0);
  const std::uint64_t paths = std::uint64_t{1} << N;
  for (std::uint64_t bits = 0; bits < paths; ++bits) {
    long s = 0;
    long contacts = 0;
    for (long i = 0; i < N; ++i) {
      s += ((bits >> i) & 1U) ? 1 : -1;
      if (on_interface(s)) ++contacts;
    }
    if (constrained && !on_interface(s)) continue;
    ++counts[static_cast<std::size_t>(contacts)];
  }
  double z = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    z += static_cast<double>(counts[k]) * std::exp(delta * static_cast<double>(k));
  }
  return std::log(z) - static_cast<double>(N) * std::log(2.0);
}

Sandwich sandwich_check(long N, double delta, const InterfaceSpacing& T) {
  if (N < 1) throw std::invalid_argument("sandwich check needs N >= 1");
  const auto constrained = log_z_constrained_prefix(2 * N, delta, T);
  Sandwich out{};
  out.log_z = log_z_free_dp(N, delta, T);
  out.log_lower = -std::abs(delta) + constrained[static_cast<std::size_t>(2 * (N / 2))];
  out.log_upper = 0.5 * (std::log(static_cast<double>(N + 1)) + constrained.back());
  // tolerance for rounding in the two independent transfers
  const double slack = 1e-12 * std::max(1.0, std::abs(out.log_z));
  out.lower_holds = out.log_lower <= out.log_z + slack;
  out.upper_holds = out.log_z <= out.log_upper + slack;
  return out;
}

double contact_fraction(long N, double delta, const InterfaceSpacing& T) {
  if (N < 1) throw std::invalid_argument("contact fraction needs N >= 1");
  const auto w = static_cast<std::size_t>(cylinder_width(N, T));
  const double pin = std::exp(delta);
  std::vector<double> mass(w, 0.0);
  std::vector<double> contacts(w, 0.0);  // mass-weighted contact count
  std::vector<double> next_mass(w);
  std::vector<double> next_contacts(w);
  mass[0] = 1.0;
  for (long i = 0; i < N; ++i) {
    for (std::size_t s = 0; s < w; ++s) {
      const std::size_t down = (s + w - 1) % w;
      const std::size_t up = (s + 1) % w;
      next_mass[s] = 0.5 * (mass[down] + mass[up]);
      next_contacts[s] = 0.5 * (contacts[down] + contacts[up]);
    }
    next_contacts[0] = pin * (next_contacts[0] + next_mass[0]);
    next_mass[0] *= pin;
    const double total = std::accumulate(next_mass.begin(), next_mass.end(), 0.0);
    for (std::size_t s = 0; s < w; ++s) {
      mass[s] = next_mass[s] / total;
      contacts[s] = next_contacts[s] / total;
    }
  }
  const double expected = std::accumulate(contacts.begin(), contacts.end(), 0.0);
  return expected / static_cast<double>(N);
}

EndpointLaw endpoint_law_dp(long N, double delta, const InterfaceSpacing& T) {
  require_length(N);
  if (N > kEndpointBudget) {
    throw std::invalid_argument("endpoint law DP limited to N <= " + std::to_string(kEndpointBudget));
  }
  const auto size = static_cast<std::size_t>(2 * N + 1);
  const double pin = std::exp(delta);
  std::vector<double> p(size, 0.0);
  std::vector<double> next(size, 0.0);
  p[static_cast<std::size_t>(N)] = 1.0;
  for (long i = 1; i <= N; ++i) {
    std::fill(next.begin(), next.end(), 0.0);
    // only parity-feasible sites within distance i carry mass
    for (long s = -i; s <= i; s += 2) {
      const auto k = static_cast<std::size_t>(s + N);
      double value = 0.0;
      if (s - 1 >= -(i - 1)) value += 0.5 * p[k - 1];
      if (s + 1 <= i - 1) value += 0.5 * p[k + 1];
      const bool hit = T.is_finite() ? (s % T.value() == 0) : (s == 0);
      next[k] = hit ? pin * value : value;
    }
    double total = 0.0;
    for (double x : next) total += x;
    for (auto& x : next) x /= total;
    p.swap(next);
  }
  // exact symmetry, removing rounding asymmetry
  for (long s = 1; s <= N; ++s) {
    const auto a = static_cast<std::size_t>(N + s);
    const auto b = static_cast<std::size_t>(N - s);
    const double mean = 0.5 * (p[a] + p[b]);
    p[a] = mean;
    p[b] = mean;
  }
  return EndpointLaw{N, std::move(p)};
}

}  // namespace multipin::exact_polymer
