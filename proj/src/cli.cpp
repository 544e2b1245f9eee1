#include "multipin/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "multipin/exact_polymer.hpp"
#include "multipin/experiments.hpp"
#include "multipin/free_energy.hpp"
#include "multipin/kernels.hpp"
#include "multipin/path_engine.hpp"
#include "multipin/renewal.hpp"
#include "multipin/report.hpp"
#include "multipin/rng.hpp"
#include "multipin/statistics.hpp"

namespace multipin::cli {
namespace {

using report::format_number;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw UsageError("empty entry in list '" + text + "'");
    parts.push_back(item.substr(first, last - first + 1));
  }
  if (parts.empty()) throw UsageError("empty list");
  return parts;
}

double parse_real(const std::string& token) {
  std::istringstream in(token);
  in.imbue(std::locale::classic());
  double value = 0.0;
  in >> value;
  if (in.fail() || !in.eof()) throw UsageError("cannot parse number '" + token + "'");
  return value;
}

struct Options {
  std::string delta = "1";
  std::string spacing = "8";
  std::string lengths;
  std::string replicas;
  std::uint64_t seed = 1;
  double zeta = 0.0;
  std::string out;
  unsigned threads = 1;

  bool csv = false;
  long n_max = 16;
  std::vector<double> lambdas;
  bool check_against_dp = false;
  bool stats_only = false;
  bool constrained = false;
  long max_N = 400;
  bool brute_force = false;
  double perturb_phi = 0.0;
  std::string regime;
};

std::vector<InterfaceSpacing> parse_spacings(const std::string& text) {
  std::vector<InterfaceSpacing> out;
  for (const auto& token : split(text)) {
    try {
      if (token == "inf" || token == "infinity" || token == "+inf" || token == "Inf") {
        out.push_back(InterfaceSpacing::infinite());
      } else {
        const double value = parse_real(token);
        if (value != std::floor(value)) throw UsageError("T must be an integer: " + token);
        out.push_back(InterfaceSpacing::finite(static_cast<long>(value)));
      }
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

std::size_t replicas_or(const Options& o, std::size_t fallback) {
  if (o.replicas.empty()) return fallback;
  const double value = parse_real(o.replicas);
  if (value < 0 || value != std::floor(value)) throw UsageError("--M must be a nonnegative integer");
  return static_cast<std::size_t>(value);
}

std::vector<long> lengths_or(const Options& o, std::vector<long> fallback) {
  return o.lengths.empty() ? fallback : parse_integer_list(o.lengths);
}

std::filesystem::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw UsageError("cannot create output directory '" + dir + "'");
  return dir;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write '" + path.string() + "'");
  file.imbue(std::locale::classic());
  return file;
}

// ---- free-energy ------------------------------------------------------------

int cmd_free_energy(const Options& o, std::ostream& out) {
  const auto deltas = parse_real_list(o.delta);
  const auto spacings = parse_spacings(o.spacing);
  const char* columns[] = {"delta", "T", "phi", "residual", "c_delta", "m", "s_T", "C_delta"};
  const std::string sep = o.csv ? "," : "  ";
  for (std::size_t i = 0; i < std::size(columns); ++i) {
    out << (i ? sep : "") << (o.csv ? std::string(columns[i]) : [&] {
      std::ostringstream cell;
      cell << std::setw(i < 2 ? 6 : 14) << columns[i];
      return cell.str();
    }());
  }
  out << '\n';
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (double delta : deltas) {
    for (const auto& T : spacings) {
      const double phi = free_energy::phi(delta, T);
      double residual = nan;
      if (T.is_finite() || delta >= 0.0) residual = free_energy::root_residual(delta, T);
      double c = nan;
      double C = nan;
      if (delta > 0.0) {
        c = free_energy::c_delta(delta);
        C = free_energy::scaling_constants(delta, 0.0).C_delta;
      }
      double m = nan;
      if (T.is_finite() || delta > 0.0) m = free_energy::step_mean(delta, T);
      const std::vector<std::string> cells = {format_number(delta), T.to_string(), format_number(phi),
                                              format_number(residual), format_number(c), format_number(m),
                                              format_number(1.0 / m), format_number(C)};
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (o.csv) {
          out << (i ? "," : "") << cells[i];
        } else {
          out << (i ? sep : "") << std::setw(i < 2 ? 6 : 14) << cells[i];
        }
      }
      out << '\n';
    }
  }
  return kExitSuccess;
}

// ---- kernels ----------------------------------------------------------------

int cmd_kernels(const Options& o, std::ostream& out) {
  const auto spacings = parse_spacings(o.spacing);
  if (o.n_max < 1) throw UsageError("--n-max must be >= 1");
  for (const auto& T : spacings) {
    if (T.is_infinite()) throw UsageError("kernel tables need a finite T");
    const long t = T.value();
    out << "# T=" << t << " lambda0=" << format_number(kernels::lambda0(t)) << '\n';
    out << "n,q0,q1,q_total\n";
    for (long n = 1; n <= o.n_max; ++n) {
      out << n << ',' << format_number(kernels::q0_series(t, n)) << ','
          << format_number(kernels::q1_series(t, n)) << ',' << format_number(kernels::q_total(t, n)) << '\n';
    }
    if (!o.lambdas.empty()) {
      const auto table = kernels::KernelTable::with_tolerance(t);
      out << "lambda,Q0_closed,Q1_closed,Q_closed,Q0_series,Q1_series,tail_bound\n";
      for (double lambda : o.lambdas) {
        double s0 = 0.0;
        double s1 = 0.0;
        for (long n = 2; n <= table.horizon(); n += 2) {
          const double w = std::exp(-lambda * static_cast<double>(n));
          s0 += table.q0(n) * w;
          s1 += table.q1(n) * w;
        }
        out << format_number(lambda) << ',' << format_number(kernels::Q0_closed(T, lambda)) << ','
            << format_number(kernels::Q1_closed(T, lambda)) << ',' << format_number(kernels::Q_closed(T, lambda))
            << ',' << format_number(s0) << ',' << format_number(s1) << ','
            << format_number(table.tail_mass_bound()) << '\n';
      }
    }
  }
  return kExitSuccess;
}

// ---- validate ---------------------------------------------------------------

class CheckLog {
 public:
  explicit CheckLog(std::ostream& out) : out_(out) {}

  void record(const std::string& name, const std::string& params, double gap, double tolerance) {
    const bool ok = gap <= tolerance;
    failures_ += ok ? 0 : 1;
    ++count_;
    out_ << (ok ? "PASS " : "FAIL ") << name << ' ' << params << " gap=" << format_number(gap)
         << " tol=" << format_number(tolerance) << '\n';
  }

  int exit_code() const {
    out_ << count_ - failures_ << '/' << count_ << " checks passed\n";
    return failures_ == 0 ? kExitSuccess : kExitFailure;
  }

 private:
  std::ostream& out_;
  int count_ = 0;
  int failures_ = 0;
};

// Exhaustive first-passage counts over all 2^n_max paths.
void enumerate_kernels(long T, long n_max, std::vector<double>& q0, std::vector<double>& q1) {
  q0.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  q1.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  const std::uint64_t paths = std::uint64_t{1} << n_max;
  const double weight = 1.0 / static_cast<double>(paths);
  for (std::uint64_t bits = 0; bits < paths; ++bits) {
    long s = 0;
    for (long i = 1; i <= n_max; ++i) {
      s += ((bits >> (i - 1)) & 1U) ? 1 : -1;
      if (s % T == 0) {
        // q1 counts landings on +T only
        if (s >= 0) (s == 0 ? q0 : q1)[static_cast<std::size_t>(i)] += weight;
        break;
      }
    }
  }
}

int cmd_validate(const Options& o, std::ostream& out) {
  if (o.max_N < 2) throw UsageError("--max-N must be >= 2");
  CheckLog log(out);
  const long max_N = o.max_N - o.max_N % 2;

  for (long T : {2L, 4L, 6L, 8L, 16L, 32L, 64L}) {
    const auto table = kernels::KernelTable::with_tolerance(T);
    const auto spacing = InterfaceSpacing::finite(T);
    double mass0 = 0.0;
    double mass1 = 0.0;
    for (long n = 2; n <= table.horizon(); n += 2) {
      mass0 += table.q0(n);
      mass1 += table.q1(n);
    }
    const double Td = static_cast<double>(T);
    log.record("kernel_mass_q0", "T=" + std::to_string(T), std::abs(mass0 - (1.0 - 1.0 / Td)),
               table.tail_mass_bound() + 1e-8);
    log.record("kernel_mass_q1", "T=" + std::to_string(T), std::abs(mass1 - 0.5 / Td),
               table.tail_mass_bound() + 1e-8);
    for (double lambda : {0.0, 0.05, 0.25, 1.0}) {
      double s0 = 0.0;
      double s1 = 0.0;
      for (long n = 2; n <= table.horizon(); n += 2) {
        const double w = std::exp(-lambda * static_cast<double>(n));
        s0 += table.q0(n) * w;
        s1 += table.q1(n) * w;
      }
      const double tol = table.tail_mass_bound() * std::exp(-lambda * static_cast<double>(table.horizon())) + 1e-10;
      const std::string params = "T=" + std::to_string(T) + " lambda=" + format_number(lambda);
      log.record("kernel_series_Q0", params, std::abs(s0 - kernels::Q0_closed(spacing, lambda)), tol);
      log.record("kernel_series_Q1", params, std::abs(s1 - kernels::Q1_closed(spacing, lambda)), tol);
    }
  }

  if (o.brute_force) {
    const long n_max = std::min<long>(16, std::max<long>(2, o.max_N));
    for (long T : {2L, 4L, 6L, 8L}) {
      std::vector<double> e0;
      std::vector<double> e1;
      enumerate_kernels(T, n_max, e0, e1);
      double worst = 0.0;
      for (long n = 1; n <= n_max; ++n) {
        worst = std::max(worst, std::abs(e0[static_cast<std::size_t>(n)] - kernels::q0_series(T, n)));
        worst = std::max(worst, std::abs(e1[static_cast<std::size_t>(n)] - kernels::q1_series(T, n)));
      }
      log.record("kernel_enumeration", "T=" + std::to_string(T) + " n<=" + std::to_string(n_max), worst, 1e-12);
    }
  }

  for (double delta : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
    for (long T : {2L, 4L, 8L, 16L, 32L, 64L}) {
      const auto spacing = InterfaceSpacing::finite(T);
      const double phi = free_energy::phi(delta, spacing) + o.perturb_phi;
      const double residual = std::abs(kernels::Q_closed(spacing, phi) - std::exp(-delta));
      log.record("phi_root_residual", "delta=" + format_number(delta) + " T=" + std::to_string(T), residual, 1e-12);
    }
  }
  for (double delta : {0.5, 1.0, 2.0}) {
    log.record("c_delta_closed_forms", "delta=" + format_number(delta),
               std::abs(free_energy::c_delta(delta) - free_energy::c_delta_via_phi(delta)), 1e-10);
  }

  for (double delta : {-1.0, 0.5, 1.0, 2.0}) {
    for (long T : {2L, 4L, 8L, 16L}) {
      const auto sweep = renewal::partition_identity_sweep(delta, T, max_N, o.perturb_phi);
      double worst = 0.0;
      for (std::size_t i = 1; i < sweep.size(); ++i) worst = std::max(worst, sweep[i].gap);
      log.record("renewal_identity",
                 "delta=" + format_number(delta) + " T=" + std::to_string(T) + " N<=" + std::to_string(max_N),
                 worst, 1e-8);
    }
  }

  const long sandwich_N = std::min<long>(100, o.max_N);
  for (double delta : {-1.0, 1.0}) {
    for (long T : {2L, 4L, 8L}) {
      // for delta < 0 the upper bound needs an extra e^{|delta|/2}: the square of the
      // half-length weight counts the midpoint contact once too often
      const double allowance = delta < 0.0 ? -0.5 * delta : 0.0;
      double worst = 0.0;
      for (long N = 1; N <= sandwich_N; ++N) {
        const auto s = exact_polymer::sandwich_check(N, delta, InterfaceSpacing::finite(T));
        worst = std::max({worst, -s.lower_slack(), -(s.upper_slack() + allowance)});
      }
      log.record(delta < 0.0 ? "sandwich_corrected" : "sandwich",
                 "delta=" + format_number(delta) + " T=" + std::to_string(T) + " N<=" + std::to_string(sandwich_N),
                 std::max(0.0, worst), 1e-12);
    }
  }

  {
    const path_engine::FreeSampler sampler(1.0, 8, max_N);
    const double phi = sampler.law().phi() + o.perturb_phi;
    const double lhs = sampler.log_suffix_weight(max_N);
    const double rhs = exact_polymer::log_z_free_dp(max_N, 1.0, InterfaceSpacing::finite(8)) -
                       phi * static_cast<double>(max_N);
    log.record("suffix_weight_identity", "delta=1 T=8 N=" + std::to_string(max_N), std::abs(lhs - rhs), 1e-8);
  }

  if (o.brute_force) {
    const long n_max = std::min<long>(20, o.max_N);
    for (double delta : {-1.0, 1.0}) {
      for (long T : {2L, 4L, 8L}) {
        const auto spacing = InterfaceSpacing::finite(T);
        double worst = 0.0;
        for (long N = 1; N <= n_max; ++N) {
          worst = std::max(worst, std::abs(exact_polymer::log_z_free_dp(N, delta, spacing) -
                                           exact_polymer::log_z_bruteforce(N, delta, spacing)));
          if (N % 2 == 0) {
            worst = std::max(worst, std::abs(exact_polymer::log_z_constrained_dp(N, delta, spacing) -
                                             exact_polymer::log_z_bruteforce(N, delta, spacing, true)));
          }
        }
        log.record("partition_bruteforce",
                   "delta=" + format_number(delta) + " T=" + std::to_string(T) + " N<=" + std::to_string(n_max),
                   worst, 1e-12);
      }
    }
  }
  return log.exit_code();
}

// ---- sample -----------------------------------------------------------------

int cmd_sample(const Options& o, std::ostream& out) {
  const double delta = parse_real_list(o.delta).front();
  const auto T = parse_spacings(o.spacing).front();
  if (T.is_infinite()) throw UsageError("sample needs a finite T");
  const long N = lengths_or(o, {1000}).front();
  const std::size_t M = replicas_or(o, 1);
  if (o.constrained && N % 2 != 0) throw UsageError("constrained sampling needs even N");
  const bool keep_skeletons = !o.stats_only;

  std::vector<path_engine::ContactSkeleton> skeletons(keep_skeletons ? M : 0);
  std::vector<path_engine::SkeletonSummary> summaries(M);
  auto run = [&](const auto& sampler) {
    parallel_replicas(M, o.threads, [&](std::size_t r) {
      RandomStream stream(o.seed, r, 0);
      path_engine::SkeletonSummary summary;
      summary.T = T.value();
      if (keep_skeletons) {
        auto& s = skeletons[r];
        s.N = N;
        s.T = T.value();
        s.delta = delta;
        path_engine::SkeletonBuilder builder(s);
        struct Both {
          path_engine::SkeletonBuilder& a;
          path_engine::SkeletonSummary& b;
          void contact(long t, int mark) {
            a.contact(t, mark);
            b.contact(t, mark);
          }
          void finish(long mu, long x) {
            a.finish(mu, x);
            b.finish(mu, x);
          }
        } both{builder, summary};
        sampler.sample_into(stream, both);
      } else {
        sampler.sample_into(stream, summary);
      }
      summaries[r] = summary;
    });
  };
  if (o.constrained) {
    run(path_engine::ConstrainedSampler(delta, T.value(), N));
  } else {
    run(path_engine::FreeSampler(delta, T.value(), N));
  }

  auto write_stats = [&](std::ostream& s) {
    s << "replica,S_N,L_N,L_prime_N,mu_N\n";
    for (std::size_t r = 0; r < M; ++r) {
      const auto& x = summaries[r];
      s << r << ',' << x.endpoint() << ',' << x.L << ',' << x.L_prime << ',' << x.mu_N << '\n';
    }
  };
  if (!o.out.empty()) {
    const auto dir = prepare_dir(o.out);
    if (keep_skeletons) {
      auto file = open_output(dir / "skeletons.txt");
      for (const auto& s : skeletons) path_engine::write_skeleton(file, s);
    }
    auto file = open_output(dir / "statistics.csv");
    write_stats(file);
  } else if (keep_skeletons) {
    for (const auto& s : skeletons) path_engine::write_skeleton(out, s);
  } else {
    write_stats(out);
  }

  if (o.check_against_dp) {
    if (o.constrained) throw UsageError("--check-against-dp compares the free endpoint law");
    const auto exact = exact_polymer::endpoint_law_dp(N, delta, T);
    stats::Histogram empirical;
    for (const auto& s : summaries) empirical[s.endpoint()] += 1.0;
    stats::Histogram reference;
    for (long s = -N; s <= N; ++s) {
      if (exact.at(s) > 0.0) reference[s] = exact.at(s);
    }
    const double tv = stats::tv_distance(empirical, reference);
    const bool ok = tv <= 0.01;
    out << (ok ? "PASS" : "FAIL") << " tv_endpoint_dp=" << format_number(tv) << " threshold=0.01 M=" << M
        << " seed=" << o.seed << '\n';
    return ok ? kExitSuccess : kExitFailure;
  }
  return kExitSuccess;
}

// ---- experiment -------------------------------------------------------------

int cmd_experiment(const Options& o, std::ostream& out, std::ostream& err) {
  experiments::ExperimentConfig config;
  config.delta = parse_real_list(o.delta).front();
  config.seed = o.seed;
  config.threads = o.threads;
  config.zeta = o.zeta;

  const bool diagnostics = o.regime == "diagnostics";
  std::string rule_name;
  if (o.regime == "regime-i") rule_name = "half-critical";
  else if (o.regime == "regime-ii") rule_name = "critical";
  else if (o.regime == "regime-iii") rule_name = "double-critical";
  else if (diagnostics) rule_name = "explicit";
  else throw UsageError("unknown regime '" + o.regime + "'");

  // --T may name a rule or give explicit spacings
  const std::string& t = o.spacing;
  if (t == "half-critical" || t == "critical" || t == "double-critical") {
    config.rule = experiments::parse_rule(t);
  } else if (t.empty()) {
    config.rule = experiments::parse_rule(rule_name);
    if (diagnostics) config.spacings = {8};
  } else {
    config.rule = experiments::SpacingRule::explicit_list;
    for (const auto& s : parse_spacings(t)) {
      if (s.is_infinite()) throw UsageError("experiments need finite T");
      config.spacings.push_back(s.value());
    }
  }
  if (o.regime == "regime-iii") {
    config.lengths = lengths_or(o, {10000, 100000, 1000000});
  } else if (diagnostics) {
    config.lengths = lengths_or(o, {10000});
  } else {
    config.lengths = lengths_or(o, {1000000});
  }
  config.replicas = replicas_or(o, diagnostics ? 10000 : 5000);
  if (config.replicas > 0 && config.replicas < 100) throw UsageError("--M must be 0 or at least 100");

  experiments::ExperimentReport result;
  if (o.regime == "regime-i") result = experiments::regime_gaussian(config);
  if (o.regime == "regime-ii") result = experiments::regime_critical(config);
  if (o.regime == "regime-iii") result = experiments::regime_tight(config);
  if (diagnostics) result = experiments::diagnostics_suite(config);

  const auto dir = prepare_dir(o.out.empty() ? std::string("results") : o.out);
  {
    auto file = open_output(dir / (o.regime + ".csv"));
    report::write_csv(file, result);
  }
  {
    auto file = open_output(dir / (o.regime + ".json"));
    file << report::json_summary(result) << '\n';
  }
  if (o.regime == "regime-iii") {
    auto file = open_output(dir / "tail_curve.csv");
    report::write_tail_curve(file, result.tail_curve);
  }
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  for (const auto& row : result.rows) {
    if (!row.pass) continue;
    out << (*row.pass ? "PASS " : "FAIL ") << row.statistic << " N=" << row.N << " T_N=" << row.T_N
        << " value=" << format_number(row.value) << " threshold=" << format_number(row.threshold)
        << " radius=" << format_number(row.radius) << '\n';
  }
  out << result.regime << ": " << result.rows.size() << " rows, M=" << config.replicas
      << ", seed=" << config.seed << ", " << (result.passed() ? "passed" : "failed") << " -> "
      << (dir / (o.regime + ".csv")).string() << '\n';
  return result.passed() ? kExitSuccess : kExitFailure;
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& token : split(text)) out.push_back(parse_real(token));
  return out;
}

std::vector<long> parse_integer_list(const std::string& text) {
  std::vector<long> out;
  for (const auto& token : split(text)) {
    const double value = parse_real(token);
    if (value != std::floor(value) || std::abs(value) > 9e15) {
      throw UsageError("expected an integer, got '" + token + "'");
    }
    out.push_back(static_cast<long>(value));
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-interface polymer pinning: kernels, free energy, exact sampling, regime experiments"};
  app.name("multipin");
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key = value file (flags override it)");

  Options o;
  app.add_option("--delta", o.delta, "Pinning strength, comma-separated list")->capture_default_str();
  auto* t_opt = app.add_option("--T", o.spacing, "Interface spacing: even integers, inf, or a rule name");
  app.add_option("--N", o.lengths, "Polymer length(s), e.g. 1e4,1e5");
  app.add_option("--M", o.replicas, "Monte Carlo replicas");
  app.add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app.add_option("--zeta", o.zeta, "Offset of the critical spacing rule")->capture_default_str();
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--threads", o.threads, "Worker threads (results do not depend on it)")->capture_default_str();

  auto* fe = app.add_subcommand("free-energy", "Free energy and derived constants on a (delta, T) grid");
  fe->add_flag("--csv", o.csv, "CSV output");
  auto* kn = app.add_subcommand("kernels", "First-passage kernels and transforms");
  kn->add_option("--n-max", o.n_max, "Largest n in the kernel dump")->capture_default_str();
  kn->add_option("--lambda", o.lambdas, "Transform arguments to tabulate");
  auto* sm = app.add_subcommand("sample", "Exact contact-skeleton samples");
  sm->add_flag("--check-against-dp", o.check_against_dp, "Compare the endpoint law with the exact DP (TV <= 0.01)");
  sm->add_flag("--stats-only", o.stats_only, "Write only the per-replica statistics");
  sm->add_flag("--constrained", o.constrained, "Condition on a contact at N");
  auto* va = app.add_subcommand("validate", "Deterministic oracle suite");
  va->add_option("--max-N", o.max_N, "Largest N in the identity checks")->capture_default_str();
  va->add_flag("--brute-force", o.brute_force, "Add exhaustive 2^N enumeration checks");
  va->add_option("--perturb-phi", o.perturb_phi, "Shift phi in the checks (sensitivity hook)")->group("");
  auto* ex = app.add_subcommand("experiment", "Monte Carlo regime experiments");
  ex->add_option("regime", o.regime, "regime-i | regime-ii | regime-iii | diagnostics")->required();
  for (auto* sub : {fe, kn, sm, va, ex}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  }
  // subcommands choose their own default spacing when --T is absent
  if (t_opt->count() == 0 && ex->parsed()) o.spacing.clear();

  try {
    if (fe->parsed()) return cmd_free_energy(o, out);
    if (kn->parsed()) return cmd_kernels(o, out);
    if (va->parsed()) return cmd_validate(o, out);
    if (sm->parsed()) return cmd_sample(o, out);
    if (ex->parsed()) return cmd_experiment(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace multipin::cli
