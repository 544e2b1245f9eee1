#ifndef MULTIPIN_RNG_HPP_
#define MULTIPIN_RNG_HPP_

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace multipin {

/// Independent pseudo-random stream keyed by (master seed, replica index, tag).
/// Replica results never depend on how replicas are scheduled.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t replica, std::uint32_t tag = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(replica),
                      static_cast<std::uint32_t>(replica >> 32), tag};
    engine_.seed(seq);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1], safe for logarithms.
  double uniform_positive() { return 1.0 - uniform(); }

  bool coin() { return (engine_() >> 63) != 0; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Runs fn(replica) for replica in [0, count) on up to `threads` workers.
/// Work is handed out by index, so fn must write only to its own slot.
template <class Fn>
void parallel_replicas(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::size_t next_index = 0;
  std::mutex lock;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      std::size_t index = 0;
      {
        std::lock_guard guard(lock);
        if (next_index >= count || failure) return;
        index = next_index++;
      }
      try {
        fn(index);
      } catch (...) {
        std::lock_guard guard(lock);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace multipin

#endif  // MULTIPIN_RNG_HPP_
