#include "multipin/path_engine.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <locale>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace multipin::path_engine {
namespace {

// Positive half of the conditioned no-contact walk. p[x], x = 1..T-1, is the
// law of |S_m| given survival; the sign is an independent fair coin.
class NoContactChain {
 public:
  explicit NoContactChain(long T)
      : T_(T), p_(static_cast<std::size_t>(T) + 1, 0.0), next_(p_.size(), 0.0) {
    p_[1] = 1.0;  // state after the first step, m = 1
  }

  void step() {
    if (dead_) return;
    double total = 0.0;
    for (long x = 1; x < T_; ++x) {
      const auto i = static_cast<std::size_t>(x);
      next_[i] = 0.5 * (p_[i - 1] + p_[i + 1]);
      total += next_[i];
    }
    if (!(total > 0.0)) {
      dead_ = true;
      log_survival_ = -std::numeric_limits<double>::infinity();
      return;
    }
    log_survival_ += std::log(total);
    for (long x = 1; x < T_; ++x) p_[static_cast<std::size_t>(x)] = next_[static_cast<std::size_t>(x)] / total;
  }

  bool dead() const noexcept { return dead_; }
  double log_survival() const noexcept { return log_survival_; }
  double positive(long x) const noexcept { return p_[static_cast<std::size_t>(x)]; }

 private:
  long T_;
  std::vector<double> p_;  // padded with zeros at 0 and T
  std::vector<double> next_;
  double log_survival_ = 0.0;
  bool dead_ = false;
};

constexpr long kOffsetCacheDoubles = 4'000'000;
constexpr double kUnderflowLog = -745.0;

void require_spacing(long T) {
  if (T < 2 || T % 2 != 0) throw std::invalid_argument("path samplers need finite even T >= 2");
}

}  // namespace

long ContactSkeleton::interface_index() const {
  long y = 0;
  for (int mark : marks) y += mark;
  return y;
}

double NoContactLaw::conditional(long x) const {
  if (x <= -T || x >= T) return 0.0;
  return probs[static_cast<std::size_t>(x + T - 1)];
}

NoContactLaw no_contact_endpoint(long T, long m) {
  require_spacing(T);
  if (m < 0) throw std::invalid_argument("no-contact length must be >= 0");
  NoContactLaw law;
  law.T = T;
  law.m = m;
  law.probs.assign(static_cast<std::size_t>(2 * T - 1), 0.0);
  if (m == 0) {
    law.survival = 1.0;
    law.log_survival = 0.0;
    law.probs[static_cast<std::size_t>(T - 1)] = 1.0;
    return law;
  }
  NoContactChain chain(T);
  for (long i = 1; i < m; ++i) chain.step();
  law.log_survival = chain.log_survival();
  law.survival = std::exp(law.log_survival);
  if (chain.dead()) return law;
  for (long x = 1; x < T; ++x) {
    const double half = 0.5 * chain.positive(x);
    law.probs[static_cast<std::size_t>(x + T - 1)] = half;
    law.probs[static_cast<std::size_t>(-x + T - 1)] = half;
  }
  return law;
}

FreeSampler::FreeSampler(double delta, long T, long N)
    : N_(N), law_(renewal::TiltedStepLaw::build(delta, T)) {
  require_spacing(T);
  if (N < 0) throw std::invalid_argument("polymer length must be >= 0");
  const double phi = law_.phi();
  const long row = T - 1;
  const long cache_rows = std::max(2L, kOffsetCacheDoubles / row);

  // terminal weights, kept until two consecutive values underflow
  terminal_.push_back(1.0);
  NoContactChain chain(T);
  long underflows = 0;
  for (long m = 1; m <= N; ++m) {
    if (m > 1) chain.step();
    const double log_g = chain.log_survival() - phi * static_cast<double>(m);
    const double g = chain.dead() || log_g < kUnderflowLog ? 0.0 : std::exp(log_g);
    terminal_.push_back(g);
    if (m < cache_rows) {
      double acc = 0.0;
      for (long x = 1; x < T; ++x) {
        acc += chain.positive(x);
        offset_cdf_.push_back(acc);
      }
      cached_offsets_ = m + 1;
    }
    underflows = g == 0.0 ? underflows + 1 : 0;
    if (underflows >= 2) break;
  }

  const auto totals = law_.totals();
  const long horizon = law_.horizon();
  weight_.assign(static_cast<std::size_t>(N) + 1, 0.0);
  weight_[0] = 1.0;
  for (long m = 1; m <= N; ++m) {
    double w = terminal(m);
    const long top = std::min(m, horizon);
    for (long n = 2; n <= top; n += 2) {
      w += totals[static_cast<std::size_t>(n)] * weight_[static_cast<std::size_t>(m - n)];
    }
    weight_[static_cast<std::size_t>(m)] = w;
  }
}

double FreeSampler::log_suffix_weight(long m) const {
  return std::log(weight_.at(static_cast<std::size_t>(m)));
}

long FreeSampler::draw_offset(long m, RandomStream& stream) const {
  if (m == 0) return 0;
  const long T = law_.spacing();
  const long row = T - 1;
  const double u = stream.uniform();
  long magnitude = row;
  if (m < cached_offsets_) {
    // rows are stored for m = 1..cached_offsets_-1
    const double* cdf = offset_cdf_.data() + (m - 1) * row;
    const double target = u * cdf[row - 1];
    for (long x = 1; x <= row; ++x) {
      if (target < cdf[x - 1]) {
        magnitude = x;
        break;
      }
    }
  } else {
    const NoContactLaw law = no_contact_endpoint(T, m);
    double acc = 0.0;
    for (long x = 1; x <= row; ++x) {
      acc += 2.0 * law.conditional(x);
      if (u < acc) {
        magnitude = x;
        break;
      }
    }
  }
  return stream.coin() ? magnitude : -magnitude;
}

ContactSkeleton FreeSampler::sample(RandomStream& stream) const {
  ContactSkeleton skeleton;
  skeleton.N = N_;
  skeleton.T = law_.spacing();
  skeleton.delta = law_.delta();
  SkeletonBuilder builder(skeleton);
  sample_into(stream, builder);
  return skeleton;
}

ConstrainedSampler::ConstrainedSampler(double delta, long T, long N)
    : N_(N), law_(renewal::TiltedStepLaw::build(delta, T)), mass_(renewal::renewal_mass(law_, N)) {
  require_spacing(T);
  if (N < 0 || N % 2 != 0) throw std::invalid_argument("constrained sampler needs even N >= 0");
}

ContactSkeleton ConstrainedSampler::sample(RandomStream& stream) const {
  ContactSkeleton skeleton;
  skeleton.N = N_;
  skeleton.T = law_.spacing();
  skeleton.delta = law_.delta();
  SkeletonBuilder builder(skeleton);
  sample_into(stream, builder);
  return skeleton;
}

ContactSkeleton sample_free(double delta, long T, long N, RandomStream& stream) {
  return FreeSampler(delta, T, N).sample(stream);
}

ContactSkeleton sample_constrained(double delta, long T, long N, RandomStream& stream) {
  return ConstrainedSampler(delta, T, N).sample(stream);
}

SkeletonStatistics skeleton_statistics(const ContactSkeleton& skeleton) {
  SkeletonStatistics stats;
  long y = 0;
  for (std::size_t i = 0; i < skeleton.marks.size(); ++i) {
    const int mark = skeleton.marks[i];
    y += mark;
    stats.Y.push_back(y);
    if (mark != 0) {
      ++stats.L_prime;
      stats.theta.push_back(skeleton.contact_times[i]);
      if (stats.delta_geom == 0) stats.delta_geom = static_cast<long>(i) + 1;
    }
  }
  stats.L = static_cast<long>(skeleton.marks.size());
  stats.mu_N = skeleton.mu_N;
  stats.S_N = skeleton.T * y + skeleton.final_offset;
  return stats;
}

std::string validate(const ContactSkeleton& s) {
  std::ostringstream err;
  if (s.contact_times.size() != s.marks.size()) return "contact times and marks differ in length";
  long previous = 0;
  for (std::size_t i = 0; i < s.contact_times.size(); ++i) {
    const long t = s.contact_times[i];
    const long gap = t - previous;
    const int mark = s.marks[i];
    if (mark < -1 || mark > 1) {
      err << "mark " << mark << " at contact " << i << " is not in {-1,0,1}";
      return err.str();
    }
    if (gap < 2 || gap % 2 != 0) {
      err << "gap " << gap << " before contact " << i << " is not even and >= 2";
      return err.str();
    }
    if (mark != 0 && gap < s.T) {
      err << "interface change after gap " << gap << " < T at contact " << i;
      return err.str();
    }
    previous = t;
  }
  if (previous > s.N) return "contact beyond N";
  if (s.mu_N != previous) return "mu_N is not the last contact time";
  const long x = s.final_offset;
  if (x <= -s.T || x >= s.T) return "final offset outside (-T, T)";
  if (s.mu_N == s.N && x != 0) return "nonzero final offset with a contact at N";
  if (s.mu_N < s.N && x == 0) return "zero final offset without a contact at N";
  if (((s.N - s.mu_N) - x) % 2 != 0) return "final offset has the wrong parity";
  if ((s.endpoint() - s.N) % 2 != 0) return "S_N parity differs from N";
  return {};
}

void write_skeleton(std::ostream& out, const ContactSkeleton& s) {
  std::ostringstream delta;
  delta.imbue(std::locale::classic());
  delta << std::setprecision(9) << s.delta;
  out << s.N << ' ' << s.T << ' ' << delta.str() << ' ' << s.mu_N << ' ' << s.final_offset << '\n';
  for (std::size_t i = 0; i < s.contact_times.size(); ++i) {
    out << s.contact_times[i] << ' ' << s.marks[i] << '\n';
  }
}

std::vector<ContactSkeleton> read_skeletons(std::istream& in) {
  std::vector<ContactSkeleton> out;
  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream fields(line);
    fields.imbue(std::locale::classic());
    std::vector<std::string> tokens;
    for (std::string token; fields >> token;) tokens.push_back(token);
    if (tokens.empty()) continue;
    try {
      if (tokens.size() == 5) {
        ContactSkeleton s;
        s.N = std::stol(tokens[0]);
        s.T = std::stol(tokens[1]);
        s.delta = std::stod(tokens[2]);
        s.mu_N = std::stol(tokens[3]);
        s.final_offset = std::stol(tokens[4]);
        out.push_back(std::move(s));
      } else if (tokens.size() == 2 && !out.empty()) {
        out.back().contact_times.push_back(std::stol(tokens[0]));
        out.back().marks.push_back(static_cast<int>(std::stol(tokens[1])));
      } else {
        throw std::invalid_argument("unexpected field count");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("skeleton line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace multipin::path_engine
