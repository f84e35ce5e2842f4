#include "bareprover/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace bare {

namespace {

std::string shortest(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t at = line.find(sep, start);
    out.push_back(line.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) return out;
    start = at + 1;
  }
}

template <typename T>
T number(std::string_view s, int line) {
  T v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ReportFormatError("report line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string report_csv(const LoopReport& report) {
  std::string out(report_csv_header);
  out += '\n';
  for (const LoopRow& r : report.rows) {
    out += std::to_string(r.loop) + ',' + r.mode + ',' + std::to_string(r.depth) + ',' + std::to_string(r.trees) + ',' +
           std::to_string(r.bits) + ',' + std::to_string(r.solved) + ',' + std::to_string(r.cumulative) + ',' +
           std::to_string(r.pos) + ',' + std::to_string(r.neg) + ',' + std::to_string(r.boost) + ',' +
           shortest(r.seconds) + '\n';
  }
  return out;
}

LoopReport parse_report_csv(std::string_view text, std::string label) {
  LoopReport report;
  report.label = std::move(label);
  int line_no = 0;
  bool header = false;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header) {
      if (line != report_csv_header) throw ReportFormatError("unexpected report header");
      header = true;
      continue;
    }
    auto f = split(line, ',');
    if (f.size() != 11) throw ReportFormatError("report line " + std::to_string(line_no) + ": expected 11 fields");
    LoopRow r;
    r.loop = number<int>(f[0], line_no);
    r.mode = std::string(f[1]);
    r.depth = number<int>(f[2], line_no);
    r.trees = number<int>(f[3], line_no);
    r.bits = number<int>(f[4], line_no);
    r.solved = number<std::size_t>(f[5], line_no);
    r.cumulative = number<std::size_t>(f[6], line_no);
    r.pos = number<std::size_t>(f[7], line_no);
    r.neg = number<std::size_t>(f[8], line_no);
    r.boost = number<std::size_t>(f[9], line_no);
    r.seconds = number<double>(f[10], line_no);
    report.rows.push_back(std::move(r));
  }
  if (!header) throw ReportFormatError("empty report");
  return report;
}

std::string report_svg(const std::vector<LoopReport>& reports) {
  constexpr double width = 640, height = 400, margin = 50;
  int min_loop = -1, max_loop = 0;
  std::size_t max_solved = 1;
  for (const LoopReport& rep : reports) {
    for (const LoopRow& r : rep.rows) {
      min_loop = std::min(min_loop, r.loop);
      max_loop = std::max(max_loop, r.loop);
      max_solved = std::max(max_solved, r.solved);
    }
  }
  const double span_x = std::max(1, max_loop - min_loop);
  auto x_of = [&](int loop) { return margin + (width - 2 * margin) * (loop - min_loop) / span_x; };
  auto y_of = [&](std::size_t solved) {
    return height - margin - (height - 2 * margin) * static_cast<double>(solved) / static_cast<double>(max_solved);
  };
  static constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  out += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  out += "<line x1=\"" + shortest(margin) + "\" y1=\"" + shortest(height - margin) + "\" x2=\"" +
         shortest(width - margin) + "\" y2=\"" + shortest(height - margin) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + shortest(margin) + "\" y1=\"" + shortest(margin) + "\" x2=\"" + shortest(margin) +
         "\" y2=\"" + shortest(height - margin) + "\" stroke=\"black\"/>\n";
  out += "<text x=\"320\" y=\"390\" text-anchor=\"middle\" font-size=\"12\">loop</text>\n";
  out += "<text x=\"14\" y=\"200\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 200)\">solved</text>\n";
  for (int loop = min_loop; loop <= max_loop; ++loop) {
    out += "<text x=\"" + shortest(x_of(loop)) + "\" y=\"" + shortest(height - margin + 16) +
           "\" text-anchor=\"middle\" font-size=\"10\">" + (loop < 0 ? std::string("E0") : std::to_string(loop)) +
           "</text>\n";
  }
  out += "<text x=\"" + shortest(margin - 6) + "\" y=\"" + shortest(margin + 4) +
         "\" text-anchor=\"end\" font-size=\"10\">" + std::to_string(max_solved) + "</text>\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const char* color = colors[i % std::size(colors)];
    std::string points;
    for (const LoopRow& r : reports[i].rows) {
      if (!points.empty()) points += ' ';
      points += shortest(x_of(r.loop)) + ',' + shortest(y_of(r.solved));
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" + points +
           "\"/>\n";
    const std::string label = reports[i].label.empty() ? "run " + std::to_string(i + 1) : reports[i].label;
    out += "<text x=\"" + shortest(width - margin + 4) + "\" y=\"" + shortest(margin + 14.0 * static_cast<double>(i)) +
           "\" font-size=\"10\" fill=\"" + color + "\">" + escape_xml(label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace bare
