#include "vlp/spec_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "vlp/error.hpp"

namespace vlp {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(fmt::format("missing field '{}'", key));
  return j.at(key);
}

double number(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) throw ParseError(fmt::format("field '{}' must be a number", key));
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

std::vector<double> numbers(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array()) throw ParseError(fmt::format("field '{}' must be an array", key));
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) throw ParseError(fmt::format("field '{}' must hold numbers", key));
    out.push_back(e.get<double>());
  }
  return out;
}

Box parse_box(const json& j, std::size_t n) {
  Box b{numbers(j, "lower"), numbers(j, "upper")};
  if (b.lower.size() != n || b.upper.size() != n) throw ParseError("box dimension differs from 'dimension'");
  for (std::size_t a = 0; a < n; ++a) {
    if (!(b.lower[a] < b.upper[a])) throw ParseError("box needs lower < upper on every axis");
  }
  return b;
}

ExtendedReal parse_value(const json& v) {
  if (v.is_string() && (v == "inf" || v == "infinity")) return ExtendedReal::infinity();
  if (!v.is_number()) throw ParseError("constant value must be a number or \"inf\"");
  return ExtendedReal(v.get<double>());
}

CenterSequence parse_centers(const json& j) {
  CenterSequence c;
  const json& kind = field(j, "kind");
  if (kind == "exp") {
    c.kind = CenterSequence::Kind::Exp;
  } else if (kind == "power") {
    c.kind = CenterSequence::Kind::Power;
  } else if (kind == "list") {
    c.kind = CenterSequence::Kind::List;
  } else {
    throw ParseError("centers.kind must be \"exp\", \"power\" or \"list\"");
  }
  c.offset = number_or(j, "offset", 0.0);
  if (c.kind == CenterSequence::Kind::List) {
    c.values = numbers(j, "values");
    c.count = static_cast<double>(c.values.size());
  } else {
    c.rate = number(j, "rate");
    c.count = number(j, "count");
  }
  return c;
}

json dump_box(const Box& b) { return json{{"lower", b.lower}, {"upper", b.upper}}; }

}  // namespace

ExponentFunction parse_exponent_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("exponent spec is not valid JSON: {}", e.what()));
  }
  const double dim = number(doc, "dimension");
  if (!(dim >= 1.0 && dim <= 3.0 && dim == std::floor(dim))) throw ParseError("dimension must be 1, 2 or 3");
  const auto n = static_cast<std::size_t>(dim);
  const Box domain = parse_box(field(doc, "domain"), n);
  const json& pieces = field(doc, "pieces");
  if (!pieces.is_array() || pieces.empty()) throw ParseError("'pieces' must be a non-empty array");

  std::vector<Piece> out;
  for (const json& pj : pieces) {
    const Box box = parse_box(field(pj, "box"), n);
    const json& kind = field(pj, "kind");
    if (kind == "constant") {
      out.push_back(Piece{box, parse_value(field(pj, "value"))});
    } else if (kind == "bumps") {
      BumpSum b;
      b.base = number(pj, "base");
      const double height = number(pj, "height");
      b.sign = height < 0.0 ? -1.0 : 1.0;
      b.bump = PlateauBump{number(pj, "support_halfwidth"), number(pj, "plateau_halfwidth"), std::abs(height)};
      b.centers = parse_centers(field(pj, "centers"));
      out.push_back(Piece{box, b});
    } else {
      throw ParseError("piece kind must be \"constant\" or \"bumps\"");
    }
  }
  try {
    return ExponentFunction(domain, std::move(out));
  } catch (const PreconditionError& e) {
    throw ParseError(fmt::format("invalid exponent spec: {}", e.what()));
  }
}

ExponentFunction load_exponent_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open exponent spec '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_exponent_spec(ss.str());
}

std::string dump_exponent_spec(const ExponentFunction& p) {
  if (!p.transform().is_identity()) throw PreconditionError("only untransformed exponents have a spec");
  json pieces = json::array();
  for (const Piece& piece : p.pieces()) {
    if (const auto* c = std::get_if<ExtendedReal>(&piece.value)) {
      json value = c->is_infinite() ? json("inf") : json(c->finite());
      pieces.push_back({{"box", dump_box(piece.box)}, {"kind", "constant"}, {"value", value}});
      continue;
    }
    const BumpSum& b = std::get<BumpSum>(piece.value);
    json centers;
    switch (b.centers.kind) {
      case CenterSequence::Kind::Exp: centers["kind"] = "exp"; break;
      case CenterSequence::Kind::Power: centers["kind"] = "power"; break;
      case CenterSequence::Kind::List: centers["kind"] = "list"; break;
    }
    if (b.centers.kind == CenterSequence::Kind::List) {
      centers["values"] = b.centers.values;
    } else {
      centers["rate"] = b.centers.rate;
      centers["count"] = b.centers.count;
    }
    centers["offset"] = b.centers.offset;
    pieces.push_back({{"box", dump_box(piece.box)},
                      {"kind", "bumps"},
                      {"base", b.base},
                      {"height", b.sign * b.bump.height},
                      {"plateau_halfwidth", b.bump.plateau_halfwidth},
                      {"support_halfwidth", b.bump.support_halfwidth},
                      {"centers", centers}});
  }
  const json doc{{"dimension", p.dimension()}, {"domain", dump_box(p.domain())}, {"pieces", pieces}};
  return doc.dump(2);
}

std::string format_number(double x) { return fmt::format("{:.9g}", x); }

GridFunction read_grid_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("grid CSV is empty");
  std::size_t columns = std::count(line.begin(), line.end(), ',') + 1;
  if (columns < 2 || columns > 4) throw ParseError("grid CSV needs 1 to 3 coordinate columns and a value column");
  const std::size_t n = columns - 1;

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError(fmt::format("grid CSV line {}: '{}' is not a number", line_no, cell));
      }
    }
    if (row.size() != columns) throw ParseError(fmt::format("grid CSV line {} has {} columns", line_no, row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("grid CSV has no data rows");

  // axis coordinates, then a spacing common to all axes
  std::vector<std::vector<double>> axes(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (const auto& r : rows) axes[a].push_back(r[a]);
    std::sort(axes[a].begin(), axes[a].end());
    axes[a].erase(std::unique(axes[a].begin(), axes[a].end()), axes[a].end());
  }
  double h = 0.0;
  for (const auto& ax : axes) {
    if (ax.size() > 1) h = std::max(h, (ax.back() - ax.front()) / static_cast<double>(ax.size() - 1));
  }
  if (h == 0.0) throw ParseError("grid CSV needs at least two cells along some axis");
  std::vector<double> lower(n);
  std::vector<std::size_t> counts(n);
  for (std::size_t a = 0; a < n; ++a) {
    lower[a] = axes[a].front() - 0.5 * h;
    counts[a] = static_cast<std::size_t>(std::llround((axes[a].back() - axes[a].front()) / h)) + 1;
  }
  const GridDomain grid(lower, h, counts);
  if (rows.size() != grid.size()) throw ParseError("grid CSV rows do not fill a uniform grid");

  std::vector<double> values(grid.size(), 0.0);
  std::vector<bool> seen(grid.size(), false);
  std::vector<std::size_t> multi(n);
  for (const auto& r : rows) {
    for (std::size_t a = 0; a < n; ++a) {
      const double pos = (r[a] - lower[a]) / h - 0.5;
      const double idx = std::round(pos);
      if (std::abs(pos - idx) > 1e-6) throw ParseError("grid CSV coordinates are not uniformly spaced");
      multi[a] = static_cast<std::size_t>(idx);
    }
    const std::size_t i = grid.ravel(multi);
    if (seen[i]) throw ParseError("grid CSV repeats a cell");
    seen[i] = true;
    if (!(r[n] >= 0.0) || !std::isfinite(r[n])) throw ParseError("grid CSV values must be finite and >= 0");
    values[i] = r[n];
  }
  return GridFunction(grid, std::move(values));
}

GridFunction load_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open grid CSV '{}'", path));
  return read_grid_csv(in);
}

void write_grid_csv(std::ostream& out, const GridFunction& f) {
  const GridDomain& g = f.domain();
  for (std::size_t a = 0; a < g.dimension(); ++a) out << 'x' << a << ',';
  out << "value\n";
  std::vector<double> x(g.dimension());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.midpoint(i, x);
    for (double v : x) out << format_number(v) << ',';
    out << format_number(f[i]) << '\n';
  }
}

}  // namespace vlp
