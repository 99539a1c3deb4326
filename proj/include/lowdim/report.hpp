#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "lowdim/point_set.hpp"

namespace lowdim {

struct PairViolation {
  Index i = 0, j = 0;
  double source = 0.0;
  double image = 0.0;
  double ratio = 0.0;
};

// Ratio statistics of image distance over a reference function of the
// source distance, over the pairs inside a distance window.
struct DistortionReport {
  std::string reference;  // identity | G_r | L_r | T_r | d^alpha
  double window_lo = 0.0;
  double window_hi = kInf;
  double bound_lo = 0.0;  // declared bounds; violations are pairs outside
  double bound_hi = kInf;
  std::size_t pairs = 0;
  double min = 0.0, max = 0.0, mean = 0.0;
  double q01 = 0.0, q05 = 0.0, q50 = 0.0, q95 = 0.0, q99 = 0.0;
  std::size_t violation_count = 0;
  std::vector<PairViolation> violations;  // first kMaxListed, pair order

  static constexpr std::size_t kMaxListed = 64;

  bool ok() const { return violation_count == 0; }
  double band() const { return min > 0 ? max / min : kInf; }
};

// One audited pair; `image` and `reference` are the two sides of the ratio.
struct PairSample {
  Index i = 0, j = 0;
  double source = 0.0;
  double image = 0.0;
  double reference = 0.0;
};

// Builds the report from samples already restricted to the window (order is
// kept for the violation list). Quantiles use the nearest-rank rule.
DistortionReport summarize(std::string reference, const std::vector<PairSample>& samples, double window_lo,
                           double window_hi, double bound_lo, double bound_hi);

// Summary object: reference, window, bounds, pair count, min/mean/max,
// quantiles and the listed violations.
nlohmann::ordered_json report_json(const DistortionReport& r);

// One row per sample: pair_i,pair_j,source_dist,image_dist,ratio,window_flag.
// window_flag is 1 when source_dist lies in [window_lo, window_hi].
void write_report_csv(std::ostream& out, const std::vector<PairSample>& samples, double window_lo, double window_hi);

}  // namespace lowdim
