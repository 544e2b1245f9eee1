#include "multipin/alias_table.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace multipin {

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t k = weights.size();
  if (k == 0) throw std::invalid_argument("alias table needs at least one weight");
  if (k > UINT32_MAX) throw std::invalid_argument("alias table too large");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("alias weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("alias weights sum to zero");

  cutoff_.assign(k, 0.0);
  alias_.resize(k);
  std::iota(alias_.begin(), alias_.end(), 0u);

  std::vector<double> scaled(k);
  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  for (std::size_t i = 0; i < k; ++i) {
    scaled[i] = weights[i] * static_cast<double>(k) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    cutoff_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // leftovers are 1 up to rounding
  for (auto i : large) cutoff_[i] = 1.0;
  for (auto i : small) cutoff_[i] = 1.0;
}

double AliasTable::probability(std::size_t i) const {
  const double k = static_cast<double>(cutoff_.size());
  double p = cutoff_.at(i);
  for (std::size_t c = 0; c < cutoff_.size(); ++c) {
    if (alias_[c] == i && c != i) p += 1.0 - cutoff_[c];
  }
  return p / k;
}

}  // namespace multipin
