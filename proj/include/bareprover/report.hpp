#pragma once

// Loop reports as CSV and as an SVG plot of solved problems per loop.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bareprover/harness.hpp"

namespace bare {

inline constexpr std::string_view report_csv_header = "loop,mode,D,T,bits,solved,cumulative,pos,neg,boost,seconds";

std::string report_csv(const LoopReport& report);

class ReportFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inverse of report_csv; newly_solved lists come back empty.
LoopReport parse_report_csv(std::string_view text, std::string label = {});

// One polyline per report, loop on x (baseline at -1), solved on y.
std::string report_svg(const std::vector<LoopReport>& reports);

}  // namespace bare
