#pragma once

// CSV tables, JSON reports and a small SVG line plot.

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "willmore/varcheck.hpp"

namespace willmore {

// 17 significant digits, '.' decimal point, nan/inf spelled out.
std::string format_number(double x);

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  std::string to_csv() const;
};

void write_text(const std::string& path, const std::string& text);

// One result line of a JSON report.
struct ResultLine {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool pass = false;
  nlohmann::json detail;  // optional extra fields
};

struct RunReport {
  std::string command;
  nlohmann::json params;
  std::vector<ResultLine> results;
  double seconds = 0;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

nlohmann::json to_json(const CaseReport& c);
nlohmann::json to_json(const ConvergenceReport& r);
nlohmann::json to_json(const IdentityReport& r);
Table to_table(const ConvergenceReport& r);

struct Polyline {
  std::string label;
  std::vector<double> x, y;
};

// Overlay of polylines with axes and a legend.
std::string svg_plot(const std::vector<Polyline>& lines, const std::string& title, const std::string& x_label,
                     const std::string& y_label);

}  // namespace willmore
