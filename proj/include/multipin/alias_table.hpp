#ifndef MULTIPIN_ALIAS_TABLE_HPP_
#define MULTIPIN_ALIAS_TABLE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace multipin {

/// Walker/Vose alias table over nonnegative weights (normalized internally).
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const noexcept { return cutoff_.size(); }

  /// Maps one uniform u in [0,1) to an index.
  std::size_t sample(double u) const noexcept {
    const double scaled = u * static_cast<double>(cutoff_.size());
    std::size_t column = static_cast<std::size_t>(scaled);
    if (column >= cutoff_.size()) column = cutoff_.size() - 1;
    const double fraction = scaled - static_cast<double>(column);
    return fraction < cutoff_[column] ? column : alias_[column];
  }

  /// Probability the table assigns to index i (for verification).
  double probability(std::size_t i) const;

 private:
  std::vector<double> cutoff_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace multipin

#endif  // MULTIPIN_ALIAS_TABLE_HPP_
