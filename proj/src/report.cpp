#include "willmore/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "willmore/errors.hpp"

namespace willmore {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

// JSON has no nan; null keeps the field present.
nlohmann::json number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

nlohmann::json numbers(const std::vector<double>& xs) {
  auto out = nlohmann::json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

}  // namespace

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) out += (k ? "," : "") + cell_text(header[k]);
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw ValidationError("csv row width does not match header");
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + cell_text(row[k]);
    out += '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
  if (!out) throw ValidationError("write failed: " + path);
}

bool RunReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const ResultLine& r) { return r.pass; });
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["params"] = params;
  j["results"] = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json line = {{"name", r.name}, {"value", number(r.value)}, {"tolerance", number(r.tolerance)},
                           {"pass", r.pass}};
    if (!r.detail.is_null()) line["detail"] = r.detail;
    j["results"].push_back(line);
  }
  j["timing"] = {{"seconds", seconds}};
  return j;
}

nlohmann::json to_json(const CaseReport& c) {
  nlohmann::json j = {{"name", c.name},
                      {"form", c.form},
                      {"t_values", numbers(c.t_values)},
                      {"errors", numbers(c.errors)},
                      {"orders", numbers(c.orders)},
                      {"richardson_error", number(c.richardson_error)},
                      {"analytic_scale", number(c.analytic_scale)},
                      {"points", c.points},
                      {"pass", c.pass},
                      {"note", c.note}};
  if (!c.diagnostics.empty()) {
    auto d = nlohmann::json::array();
    for (const auto& s : c.diagnostics) {
      d.push_back({{"node", s.node}, {"numeric", numbers(s.numeric)}, {"analytic", numbers(s.analytic)}});
    }
    j["diagnostics"] = d;
  }
  return j;
}

nlohmann::json to_json(const ConvergenceReport& r) {
  nlohmann::json j = {{"surface", r.surface}, {"all_pass", r.all_pass()}, {"cases", nlohmann::json::array()}};
  for (const auto& c : r.cases) j["cases"].push_back(to_json(c));
  return j;
}

nlohmann::json to_json(const IdentityReport& r) {
  return {{"name", r.name},
          {"lhs", number(r.lhs)},
          {"rhs", number(r.rhs)},
          {"discrepancy", number(r.discrepancy)},
          {"projector_divergence", number(r.projector_divergence)},
          {"applicable", r.applicable},
          {"pass", r.pass}};
}

Table to_table(const ConvergenceReport& r) {
  Table t;
  t.header = {"surface", "case", "form", "t_finest", "error_finest", "order_last", "richardson_error",
              "analytic_scale", "pass"};
  for (const auto& c : r.cases) {
    t.rows.push_back({r.surface, c.name, c.form, c.t_values.back(), c.errors.back(),
                      c.orders.empty() ? std::nan("") : c.orders.back(), c.richardson_error, c.analytic_scale,
                      c.pass ? 1.0 : 0.0});
  }
  return t;
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string tick_label(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 3);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string svg_plot(const std::vector<Polyline>& lines, const std::string& title, const std::string& x_label,
                     const std::string& y_label) {
  constexpr double width = 720, height = 480, left = 70, right = 150, top = 40, bottom = 50;
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& l : lines) {
    if (l.x.size() != l.y.size()) throw ValidationError("polyline x and y differ in length");
    for (std::size_t k = 0; k < l.x.size(); ++k) {
      if (!std::isfinite(l.x[k]) || !std::isfinite(l.y[k])) continue;
      x0 = std::min(x0, l.x[k]), x1 = std::max(x1, l.x[k]);
      y0 = std::min(y0, l.y[k]), y1 = std::max(y1, l.y[k]);
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pw = width - left - right, ph = height - top - bottom;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.setf(std::ios::fixed);
  out.precision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << escape_xml(title) << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = x0 + (x1 - x0) * k / 5, yv = y0 + (y1 - y0) * k / 5;
    out << "<text x=\"" << sx(xv) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
        << tick_label(xv) << "</text>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << tick_label(yv)
        << "</text>\n";
  }
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
      << escape_xml(x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << top + ph / 2 << ")\">" << escape_xml(y_label) << "</text>\n";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const char* color = palette[i % 10];
    out << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" d=\"";
    bool pen = false;
    for (std::size_t k = 0; k < lines[i].x.size(); ++k) {
      const double x = lines[i].x[k], y = lines[i].y[k];
      if (!std::isfinite(x) || !std::isfinite(y)) {
        pen = false;
        continue;
      }
      out << (pen ? "L" : "M") << sx(x) << " " << sy(y) << " ";
      pen = true;
    }
    out << "\"/>\n";
    const double ly = top + 14 + 18 * static_cast<double>(i);
    out << "<line x1=\"" << width - right + 12 << "\" y1=\"" << ly << "\" x2=\"" << width - right + 36
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << width - right + 42 << "\" y=\"" << ly + 4 << "\">" << escape_xml(lines[i].label)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace willmore
