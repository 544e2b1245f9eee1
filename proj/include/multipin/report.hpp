#ifndef MULTIPIN_REPORT_HPP_
#define MULTIPIN_REPORT_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "multipin/experiments.hpp"

namespace multipin::report {

/// Locale-independent shortest round-trip form limited to 9 significant digits.
std::string format_number(double value);

std::string csv_header();
void write_csv(std::ostream& out, const experiments::ExperimentReport& report, bool header = true);
void write_tail_curve(std::ostream& out, const std::vector<experiments::TailPoint>& curve);

/// JSON summary: configuration, rows, warnings, overall pass flag and timing.
std::string json_summary(const experiments::ExperimentReport& report);

}  // namespace multipin::report

#endif  // MULTIPIN_REPORT_HPP_
