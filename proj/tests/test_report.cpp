#include "doctest.h"

#include <cmath>

#include "willmore/errors.hpp"
#include "willmore/report.hpp"

using namespace willmore;

TEST_CASE("numbers round-trip with 17 significant digits") {
  for (double x : {0.1, 1.0 / 3.0, 12.566370614359172, -2.5e-300, 6.02214076e23}) {
    const auto text = format_number(x);
    CHECK(std::stod(text) == x);
    CHECK(text.find(',') == std::string::npos);
  }
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("csv layout") {
  Table t{{"name", "value"}, {{std::string("a,b"), 1.5}, {std::string("plain"), -2.0}}};
  CHECK(t.to_csv() == "name,value\n\"a,b\",1.5\nplain,-2\n");
  t.rows.push_back({1.0});
  CHECK_THROWS_AS(t.to_csv(), ValidationError);
}

TEST_CASE("json report schema") {
  RunReport r{"eval", {{"n", 2}}, {{"W", 12.5, 1e-8, true, {}}, {"bad", std::nan(""), 0, false, {}}}, 0.25};
  const auto j = r.to_json();
  CHECK(j["command"] == "eval");
  CHECK(j["results"].size() == 2);
  CHECK(j["results"][0]["value"] == 12.5);
  CHECK(j["results"][1]["value"].is_null());
  CHECK(j["timing"]["seconds"] == 0.25);
  CHECK_FALSE(r.all_pass());
}

TEST_CASE("svg has one path per curve") {
  const auto svg = svg_plot({{"a", {0, 1, 2}, {0, 1, 4}}, {"b<c", {0, 1}, {1, NAN}}}, "t", "x", "y");
  std::size_t count = 0;
  for (std::size_t at = svg.find("<path"); at != std::string::npos; at = svg.find("<path", at + 1)) ++count;
  CHECK(count == 2);
  CHECK(svg.find("b&lt;c") != std::string::npos);
  CHECK_THROWS_AS(svg_plot({{"bad", {0, 1}, {0}}}, "", "", ""), ValidationError);
}
