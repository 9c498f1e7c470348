#pragma once

#include <iosfwd>
#include <string>

#include "vlp/exponent.hpp"
#include "vlp/grid.hpp"

namespace vlp {

/// Exponent spec as JSON:
///   {"dimension": n, "domain": {"lower": [...], "upper": [...]},
///    "pieces": [{"box": {...}, "kind": "constant", "value": 2 | "inf"},
///               {"box": {...}, "kind": "bumps", "base": b, "height": h,
///                "plateau_halfwidth": P, "support_halfwidth": S,
///                "centers": {"kind": "exp" | "power" | "list", "rate": r,
///                            "count": c, "offset": o, "values": [...]}}]}
/// A negative height lowers the exponent on each bump. Throws ParseError.
ExponentFunction parse_exponent_spec(const std::string& text);
ExponentFunction load_exponent_spec(const std::string& path);
std::string dump_exponent_spec(const ExponentFunction& p);

/// CSV with a header, coordinates x0..x{n-1} of each cell midpoint then value.
/// Rows may come in any order but must fill a uniform grid.
GridFunction read_grid_csv(std::istream& in);
GridFunction load_grid_csv(const std::string& path);
void write_grid_csv(std::ostream& out, const GridFunction& f);

/// Numbers as written in every CSV: 9 significant digits.
std::string format_number(double x);

}  // namespace vlp
