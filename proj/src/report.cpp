#include "lowdim/report.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "lowdim/point_io.hpp"

namespace lowdim {

namespace {

double nearest_rank(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

}  // namespace

DistortionReport summarize(std::string reference, const std::vector<PairSample>& samples, double window_lo,
                           double window_hi, double bound_lo, double bound_hi) {
  DistortionReport rep;
  rep.reference = std::move(reference);
  rep.window_lo = window_lo;
  rep.window_hi = window_hi;
  rep.bound_lo = bound_lo;
  rep.bound_hi = bound_hi;
  std::vector<double> ratios;
  ratios.reserve(samples.size());
  double sum = 0.0;
  for (const PairSample& s : samples) {
    if (!(s.reference > 0.0)) continue;
    const double ratio = s.image / s.reference;
    ratios.push_back(ratio);
    sum += ratio;
    if (ratio < bound_lo || ratio > bound_hi) {
      ++rep.violation_count;
      if (rep.violations.size() < DistortionReport::kMaxListed)
        rep.violations.push_back({s.i, s.j, s.source, s.image, ratio});
    }
  }
  rep.pairs = ratios.size();
  if (ratios.empty()) return rep;
  rep.mean = sum / static_cast<double>(ratios.size());
  std::sort(ratios.begin(), ratios.end());
  rep.min = ratios.front();
  rep.max = ratios.back();
  rep.mean = std::clamp(rep.mean, rep.min, rep.max);
  rep.q01 = nearest_rank(ratios, 0.01);
  rep.q05 = nearest_rank(ratios, 0.05);
  rep.q50 = nearest_rank(ratios, 0.50);
  rep.q95 = nearest_rank(ratios, 0.95);
  rep.q99 = nearest_rank(ratios, 0.99);
  return rep;
}

namespace {

nlohmann::ordered_json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nullptr; }

}  // namespace

nlohmann::ordered_json report_json(const DistortionReport& r) {
  nlohmann::ordered_json j;
  j["reference"] = r.reference;
  j["window"] = {finite_or_null(r.window_lo), finite_or_null(r.window_hi)};
  j["bounds"] = {finite_or_null(r.bound_lo), finite_or_null(r.bound_hi)};
  j["pairs"] = r.pairs;
  j["min"] = r.min;
  j["mean"] = r.mean;
  j["max"] = r.max;
  j["band"] = finite_or_null(r.band());
  j["quantiles"] = {{"q01", r.q01}, {"q05", r.q05}, {"q50", r.q50}, {"q95", r.q95}, {"q99", r.q99}};
  j["violation_count"] = r.violation_count;
  nlohmann::ordered_json v = nlohmann::ordered_json::array();
  for (const PairViolation& pv : r.violations)
    v.push_back({{"i", pv.i}, {"j", pv.j}, {"source", pv.source}, {"image", pv.image}, {"ratio", pv.ratio}});
  j["violations"] = std::move(v);
  return j;
}

void write_report_csv(std::ostream& out, const std::vector<PairSample>& samples, double window_lo, double window_hi) {
  out << "pair_i,pair_j,source_dist,image_dist,ratio,window_flag\n";
  for (const PairSample& s : samples) {
    const double ratio = s.reference > 0.0 ? s.image / s.reference : 0.0;
    const bool in = s.source >= window_lo && s.source <= window_hi;
    out << s.i << ',' << s.j << ',' << format_double(s.source) << ',' << format_double(s.image) << ','
        << format_double(ratio) << ',' << (in ? 1 : 0) << '\n';
  }
}

}  // namespace lowdim
