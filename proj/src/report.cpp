#include "multipin/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "json.hpp"

namespace multipin::report {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 9);
  return std::string(buffer, result.ptr);
}

std::string csv_header() {
  return "regime,N,T_N,delta,zeta_realized,statistic_name,value,radius,threshold,pass,M,seed";
}

void write_csv(std::ostream& out, const experiments::ExperimentReport& report, bool header) {
  if (header) out << csv_header() << '\n';
  for (const auto& row : report.rows) {
    out << row.regime << ',' << row.N << ',' << row.T_N << ',' << format_number(row.delta) << ','
        << format_number(row.zeta_realized) << ',' << row.statistic << ',' << format_number(row.value)
        << ',' << format_number(row.radius) << ',' << format_number(row.threshold) << ','
        << (row.pass ? (*row.pass ? "true" : "false") : "info") << ',' << row.M << ',' << row.seed
        << '\n';
  }
}

void write_tail_curve(std::ostream& out, const std::vector<experiments::TailPoint>& curve) {
  out << "N,T_N,level,probability\n";
  for (const auto& p : curve) {
    out << p.N << ',' << p.T_N << ',' << p.level << ',' << format_number(p.probability) << '\n';
  }
}

std::string json_summary(const experiments::ExperimentReport& report) {
  using nlohmann::json;
  auto number = [](double v) -> json {
    if (!std::isfinite(v)) return nullptr;
    return v;
  };
  const auto& c = report.config;
  json j;
  j["regime"] = report.regime;
  j["passed"] = report.passed();
  j["wall_seconds"] = report.wall_seconds;
  j["config"] = {{"delta", c.delta},
                 {"rule", experiments::to_string(c.rule)},
                 {"spacings", c.spacings},
                 {"zeta", c.zeta},
                 {"lengths", c.lengths},
                 {"M", c.replicas},
                 {"seed", c.seed}};
  j["warnings"] = report.warnings;
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r;
    r["N"] = row.N;
    r["T_N"] = row.T_N;
    r["zeta_realized"] = number(row.zeta_realized);
    r["statistic"] = row.statistic;
    r["value"] = number(row.value);
    r["radius"] = number(row.radius);
    r["threshold"] = number(row.threshold);
    r["pass"] = row.pass ? json(*row.pass) : json(nullptr);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2);
}

}  // namespace multipin::report
