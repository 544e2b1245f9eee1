#ifndef MULTIPIN_PATH_ENGINE_HPP_
#define MULTIPIN_PATH_ENGINE_HPP_

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "multipin/renewal.hpp"
#include "multipin/rng.hpp"

namespace multipin::path_engine {

/// Contact times and interface-change marks of one polymer path, the last
/// contact time and the offset of S_N from the last visited interface.
struct ContactSkeleton {
  long N = 0;
  long T = 2;
  double delta = 0.0;
  std::vector<long> contact_times;
  std::vector<int> marks;
  long mu_N = 0;
  long final_offset = 0;

  long interface_index() const;  // Y at the last contact
  long endpoint() const { return T * interface_index() + final_offset; }
};

struct SkeletonStatistics {
  long S_N = 0;
  std::vector<long> Y;           // Y_i after the i-th contact
  long L = 0;                    // contacts in 1..N
  long L_prime = 0;              // interface changes
  std::vector<long> theta;       // times of interface changes
  long delta_geom = 0;           // index of the first interface change, 0 if none
  long mu_N = 0;
};

SkeletonStatistics skeleton_statistics(const ContactSkeleton& skeleton);

/// Empty string when all invariants hold, otherwise a description.
std::string validate(const ContactSkeleton& skeleton);

/// Text form: a line "N T delta mu_N x" followed by one "t_i eps_i" line per contact.
void write_skeleton(std::ostream& out, const ContactSkeleton& skeleton);
std::vector<ContactSkeleton> read_skeletons(std::istream& in);

/// Walk of length m started on an interface that avoids T Z at times 1..m.
struct NoContactLaw {
  long T = 2;
  long m = 0;
  double survival = 0.0;      // P(tau_1 > m)
  double log_survival = 0.0;
  std::vector<double> probs;  // conditional law of S_m, probs[x + T - 1], x in (-T, T)

  double conditional(long x) const;
  double mass(long x) const { return survival * conditional(x); }
};

NoContactLaw no_contact_endpoint(long T, long m);

/// Sink collecting a full skeleton.
class SkeletonBuilder {
 public:
  explicit SkeletonBuilder(ContactSkeleton& target) : target_(target) {}
  void contact(long t, int mark) {
    target_.contact_times.push_back(t);
    target_.marks.push_back(mark);
  }
  void finish(long mu_N, long x) {
    target_.mu_N = mu_N;
    target_.final_offset = x;
  }

 private:
  ContactSkeleton& target_;
};

/// Sink keeping only the summary statistics used by the experiments.
struct SkeletonSummary {
  long T = 2;
  long L = 0;
  long L_prime = 0;
  long Y = 0;
  long delta_geom = 0;
  long first_jump_gap = 0;
  long first_jump_time = 0;
  long mu_N = 0;
  long x = 0;
  long positive_jumps = 0;
  long previous = 0;

  void contact(long t, int mark) {
    ++L;
    if (mark != 0) {
      ++L_prime;
      Y += mark;
      if (mark > 0) ++positive_jumps;
      if (delta_geom == 0) {
        delta_geom = L;
        first_jump_gap = t - previous;
        first_jump_time = t;
      }
    }
    previous = t;
  }
  void finish(long mu, long offset) {
    mu_N = mu;
    x = offset;
  }
  long endpoint() const { return T * Y + x; }
};

/// Exact sampler of the free polymer's contact skeleton via the suffix
/// weights W(m) = G(m) + sum_n K(n) W(m - n), G(m) = e^{-phi m} P(tau_1 > m).
class FreeSampler {
 public:
  FreeSampler(double delta, long T, long N);

  long length() const noexcept { return N_; }
  const renewal::TiltedStepLaw& law() const noexcept { return law_; }

  /// log W(m); equals log Z_m - phi m.
  double log_suffix_weight(long m) const;

  template <class Sink>
  void sample_into(RandomStream& stream, Sink& sink) const;

  ContactSkeleton sample(RandomStream& stream) const;

 private:
  double terminal(long m) const noexcept {
    return m < static_cast<long>(terminal_.size()) ? terminal_[static_cast<std::size_t>(m)] : 0.0;
  }
  long draw_offset(long m, RandomStream& stream) const;

  long N_;
  renewal::TiltedStepLaw law_;
  std::vector<double> weight_;    // W(m), m = 0..N
  std::vector<double> terminal_;  // G(m) until it underflows
  std::vector<double> offset_cdf_;  // per cached m: cdf over x = 1..T-1
  long cached_offsets_ = 0;
};

/// Exact sampler of the constrained polymer's contact skeleton: the renewal
/// conditioned on N being an epoch.
class ConstrainedSampler {
 public:
  ConstrainedSampler(double delta, long T, long N);

  long length() const noexcept { return N_; }
  const renewal::TiltedStepLaw& law() const noexcept { return law_; }
  const renewal::RenewalMass& mass() const noexcept { return mass_; }

  template <class Sink>
  void sample_into(RandomStream& stream, Sink& sink) const;

  ContactSkeleton sample(RandomStream& stream) const;

 private:
  long N_;
  renewal::TiltedStepLaw law_;
  renewal::RenewalMass mass_;
};

ContactSkeleton sample_free(double delta, long T, long N, RandomStream& stream);
ContactSkeleton sample_constrained(double delta, long T, long N, RandomStream& stream);

namespace detail {

// Picks a gap by sequential inverse CDF over n = 2, 4, ... with piece weights
// K(n) * weight[m - n], after `acc` has been consumed. Returns the gap and the
// mark, reusing the leftover of the uniform for the mark.
template <class Law>
inline void draw_gap(const Law& law, const double* weight, long m, double target, double acc,
                     long& gap, int& mark) {
  const auto totals = law.totals();
  const long top = std::min(m, law.horizon());
  long chosen = 0;
  double piece = 0.0;
  double before = acc;
  for (long n = 2; n <= top; n += 2) {
    const double w = totals[static_cast<std::size_t>(n)] * weight[m - n];
    if (w <= 0.0) continue;
    chosen = n;
    piece = w;
    before = acc;
    acc += w;
    if (target < acc) break;
  }
  gap = chosen;
  double residual = target - before;
  if (residual >= piece) residual = std::nextafter(piece, 0.0);  // rounding at the end of the scan
  if (residual < 0.0) residual = 0.0;
  const double same = law.same(chosen) * weight[m - chosen];
  if (residual < same) {
    mark = 0;
  } else {
    mark = (residual - same) < 0.5 * (piece - same) ? +1 : -1;
  }
}

}  // namespace detail

template <class Sink>
void FreeSampler::sample_into(RandomStream& stream, Sink& sink) const {
  long t = 0;
  long m = N_;
  const double* weight = weight_.data();
  for (;;) {
    if (m == 0) {
      sink.finish(t, 0);
      return;
    }
    const double target = stream.uniform() * weight[m];
    const double stop = terminal(m);
    if (target < stop) {
      sink.finish(t, draw_offset(m, stream));
      return;
    }
    long gap = 0;
    int mark = 0;
    detail::draw_gap(law_, weight, m, target, stop, gap, mark);
    if (gap == 0) {  // only the terminal branch is feasible
      sink.finish(t, draw_offset(m, stream));
      return;
    }
    t += gap;
    m -= gap;
    sink.contact(t, mark);
  }
}

template <class Sink>
void ConstrainedSampler::sample_into(RandomStream& stream, Sink& sink) const {
  long t = 0;
  long m = N_;
  const double* weight = mass_.u.data();
  while (m > 0) {
    const double target = stream.uniform() * weight[m];
    long gap = 0;
    int mark = 0;
    detail::draw_gap(law_, weight, m, target, 0.0, gap, mark);
    t += gap;
    m -= gap;
    sink.contact(t, mark);
  }
  sink.finish(N_, 0);
}

}  // namespace multipin::path_engine

#endif  // MULTIPIN_PATH_ENGINE_HPP_
