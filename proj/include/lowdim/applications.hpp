#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "lowdim/point_set.hpp"
#include "lowdim/snowflake.hpp"

namespace lowdim {

// Embedding dump: one line of JSON header, a newline, then rows*cols
// little-endian f64 values in row-major order. The header gains a "layout"
// object {rows, cols, dtype: "f64le", order: "row-major"}.
void write_dump(std::ostream& out, const std::string& header_json, const Matrix& images);

struct Dump {
  nlohmann::ordered_json header;
  Matrix images;
};

Dump read_dump(std::istream& in);

// Distance labels.
struct LabelHeader {
  std::uint32_t k = 0;
  double q = 1.0;       // quantization step, snowflaked normalized units
  double alpha = 0.5;
  double M = 1.0;       // divisor the embedding was normalized by
  double scale = 1.0;   // input scale: raw distance = scale * normalized distance

  bool operator==(const LabelHeader&) const = default;
};

struct DistanceLabel {
  std::uint64_t id = 0;
  std::vector<std::int32_t> coords;
};

struct LabelSet {
  LabelHeader header;
  double r_ref = 0.0;  // max coordinate magnitude
  std::vector<DistanceLabel> labels;
};

// Rounds every coordinate to the nearest multiple of q = eps r_ref / (2k).
LabelSet dls_build(const SnowflakeEmbedding& e, double eps);
LabelSet dls_build(const Matrix& images, double alpha, double M, double scale, double eps);

Vector dequantize(const LabelHeader& h, const DistanceLabel& a);

struct DlsEstimate {
  double snowflaked = 0.0;  // normalized units
  double original = 0.0;    // raw units
  double slack = 0.0;       // sqrt(k) q: both labels' rounding, relative to d^alpha >= 1
  double snowflaked_factor = 1.0;  // 1 + 3 eps + slack
  double original_factor = 1.0;    // snowflaked_factor^(1/alpha)
};

// Throws HeaderMismatch when the headers or label lengths differ.
DlsEstimate dls_query(const LabelHeader& ha, const DistanceLabel& a, const LabelHeader& hb, const DistanceLabel& b,
                      double eps);

// k * ceil(log2(levels)), levels = max - min + 1 of the quantized values.
double label_bits(const LabelSet& set);

// Label file: "SNFL", version u16, k u32, q f64, alpha f64, M f64, scale f64,
// then per label id u64 and k i32 values. All little-endian.
void write_labels(std::ostream& out, const LabelSet& set);
LabelSet read_labels(std::istream& in);

// Farthest-first traversal from point 0: a 2-approximation of the k-center
// radius in the metric of `points`.
struct KCenterResult {
  IndexList centers;
  IndexList assignment;  // nearest center (index into centers) per point
  double radius = 0.0;
};

KCenterResult kcenter_greedy(const Matrix& points, Norm norm, Index k);
// Cover radius of `centers` under the distances `d`.
double cover_radius(const DistanceMatrix& d, const IndexList& centers);

}  // namespace lowdim
