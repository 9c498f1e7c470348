#include <doctest.h>

#include <sstream>
#include <string>

#include "vlp/error.hpp"
#include "vlp/spec_io.hpp"

using namespace vlp;

namespace {

const char* kSpec = R"({
  "dimension": 1,
  "domain": {"lower": [0], "upper": [20]},
  "pieces": [
    {"box": {"lower": [0], "upper": [1]}, "kind": "constant", "value": "inf"},
    {"box": {"lower": [1], "upper": [20]}, "kind": "bumps", "base": 2.0, "height": -0.5,
     "plateau_halfwidth": 0.25, "support_halfwidth": 0.5,
     "centers": {"kind": "power", "rate": 2, "count": 4, "offset": 0.5}}
  ]
})";

}  // namespace

TEST_CASE("exponent spec parses pieces, infinity and signed heights") {
  const ExponentFunction p = parse_exponent_spec(kSpec);
  CHECK(p.dimension() == 1);
  CHECK(p.eval(0.5).is_infinite());
  CHECK(p.eval(4.5).finite() == doctest::Approx(1.5));
  CHECK(p.eval(7.0).finite() == doctest::Approx(2.0));
  CHECK(p.p_minus().finite() == doctest::Approx(1.5));
}

TEST_CASE("exponent spec round trips") {
  const ExponentFunction p = parse_exponent_spec(kSpec);
  const ExponentFunction back = parse_exponent_spec(dump_exponent_spec(p));
  for (double x = 0.05; x < 20.0; x += 0.1) CHECK(back.eval(x) == p.eval(x));
}

TEST_CASE("malformed specs raise parse errors") {
  CHECK_THROWS_AS(parse_exponent_spec("{"), ParseError);
  CHECK_THROWS_AS(parse_exponent_spec(R"({"dimension": 1})"), ParseError);
  CHECK_THROWS_AS(parse_exponent_spec(R"({"dimension": 4, "domain": {"lower": [0], "upper": [1]}, "pieces": []})"),
                  ParseError);
  CHECK_THROWS_AS(parse_exponent_spec(R"({"dimension": 1, "domain": {"lower": [0], "upper": [1]},
    "pieces": [{"box": {"lower": [0], "upper": [1]}, "kind": "constant", "value": 0.5}]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_exponent_spec(R"({"dimension": 1, "domain": {"lower": [0], "upper": [1]},
    "pieces": [{"box": {"lower": [0], "upper": [1]}, "kind": "spline"}]})"),
                  ParseError);
  CHECK_THROWS_AS(load_exponent_spec("/nonexistent/spec.json"), ParseError);
}

TEST_CASE("grid csv round trips in any row order") {
  std::istringstream in("x0,x1,value\n0.75,0.25,4\n0.25,0.25,1\n0.25,0.75,2\n0.75,0.75,3\n");
  const GridFunction f = read_grid_csv(in);
  CHECK(f.domain().dimension() == 2);
  CHECK(f.domain().spacing() == doctest::Approx(0.5));
  CHECK(f[0] == 1.0);
  CHECK(f[1] == 4.0);
  CHECK(f[2] == 2.0);
  CHECK(f[3] == 3.0);
  std::ostringstream out;
  write_grid_csv(out, f);
  std::istringstream again(out.str());
  CHECK(read_grid_csv(again).values() == f.values());
}

TEST_CASE("bad grid csv input") {
  std::istringstream empty("");
  CHECK_THROWS_AS(read_grid_csv(empty), ParseError);
  std::istringstream word("x0,value\n0.5,abc\n1.5,1\n");
  CHECK_THROWS_AS(read_grid_csv(word), ParseError);
  std::istringstream negative("x0,value\n0.5,-1\n1.5,1\n");
  CHECK_THROWS_AS(read_grid_csv(negative), ParseError);
  std::istringstream gap("x0,value\n0.5,1\n1.5,1\n3.5,1\n");
  CHECK_THROWS_AS(read_grid_csv(gap), ParseError);
  std::istringstream repeat("x0,value\n0.5,1\n0.5,2\n1.5,1\n");
  CHECK_THROWS_AS(read_grid_csv(repeat), ParseError);
}

TEST_CASE("numbers print with nine significant digits") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(format_number(2.0) == "2");
}
