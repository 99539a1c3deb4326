#pragma once

#include <iosfwd>
#include <string>

#include "lowdim/point_set.hpp"

namespace lowdim {

enum class PointFormat { kCsv, kJson };

// CSV: "# norm=<1|2|inf> scale=<s>" header, then one comma-separated point
// per row. JSON: {"norm": "2", "scale": s, "points": [[...], ...]}.
// Numbers are written with 17 significant digits, so reading back is exact.
void write_points(std::ostream& out, const PointSet& s, PointFormat fmt);
PointSet read_points(std::istream& in, PointFormat fmt);

// Format picked from the extension (".json" -> JSON, anything else CSV).
PointFormat format_for_path(const std::string& path);
void save_points(const std::string& path, const PointSet& s);
PointSet load_points(const std::string& path);

// printf("%.17g") rendering shared by every text writer.
std::string format_double(double v);

}  // namespace lowdim
