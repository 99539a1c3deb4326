#include "lowdim/point_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lowdim/error.hpp"

namespace lowdim {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_points(std::ostream& out, const PointSet& s, PointFormat fmt) {
  if (fmt == PointFormat::kJson) {
    // Hand-rolled so numbers keep 17 digits regardless of the json dumper.
    out << "{\"norm\": \"" << to_string(s.norm) << "\", \"scale\": " << format_double(s.scale)
        << ", \"points\": [";
    for (Index i = 0; i < s.size(); ++i) {
      out << (i ? ",\n  [" : "\n  [");
      for (Index j = 0; j < s.dim(); ++j) out << (j ? ", " : "") << format_double(s.points(i, j));
      out << "]";
    }
    out << "\n]}\n";
    return;
  }
  out << "# norm=" << to_string(s.norm) << " scale=" << format_double(s.scale) << "\n";
  for (Index i = 0; i < s.size(); ++i) {
    for (Index j = 0; j < s.dim(); ++j) out << (j ? "," : "") << format_double(s.points(i, j));
    out << "\n";
  }
}

namespace {

PointSet from_rows(const std::vector<std::vector<double>>& rows, Norm norm, double scale) {
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "no points in input");
  const std::size_t d = rows.front().size();
  Matrix pts(static_cast<Index>(rows.size()), static_cast<Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) throw Error(ErrorCode::kIo, "ragged row " + std::to_string(i));
    for (std::size_t j = 0; j < d; ++j) pts(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  PointSet s(std::move(pts), norm, scale);
  validate(s);
  return s;
}

PointSet read_csv(std::istream& in) {
  Norm norm = Norm::kL2;
  double scale = 1.0;
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string tok;
      while (hs >> tok) {
        if (tok.rfind("norm=", 0) == 0) norm = parse_norm(tok.substr(5));
        if (tok.rfind("scale=", 0) == 0) scale = std::stod(tok.substr(6));
      }
      continue;
    }
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kIo, "bad number '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  return from_rows(rows, norm, scale);
}

PointSet read_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kIo, e.what());
  }
  Norm norm = Norm::kL2;
  if (j.contains("norm")) {
    const auto& nv = j["norm"];
    norm = parse_norm(nv.is_string() ? nv.get<std::string>() : nv.dump());
  }
  const double scale = j.value("scale", 1.0);
  if (!j.contains("points") || !j["points"].is_array()) throw Error(ErrorCode::kIo, "missing points array");
  auto rows = j["points"].get<std::vector<std::vector<double>>>();
  return from_rows(rows, norm, scale);
}

}  // namespace

PointSet read_points(std::istream& in, PointFormat fmt) {
  return fmt == PointFormat::kJson ? read_json(in) : read_csv(in);
}

PointFormat format_for_path(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0 ? PointFormat::kJson
                                                                          : PointFormat::kCsv;
}

void save_points(const std::string& path, const PointSet& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  write_points(out, s, format_for_path(path));
}

PointSet load_points(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  return read_points(in, format_for_path(path));
}

}  // namespace lowdim
