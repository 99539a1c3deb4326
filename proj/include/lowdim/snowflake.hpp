#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lowdim/point_set.hpp"
#include "lowdim/report.hpp"
#include "lowdim/single_scale.hpp"

namespace lowdim {

struct SnowflakeParams {
  double alpha = 0.5;
  double eps = 0.1;
  Norm norm = Norm::kL2;
  Index p = 0;         // number of groups
  Index i_lo = 0;      // scale indices I = [i_lo, i_hi], r_i = (1+eps)^i
  Index i_hi = -1;
  double delta = 0.0;  // per-scale delta = (1+eps)^(-p(1-alpha))
  double diameter = 0.0;
  double dim_hat = 0.0;
  double M = 0.0;           // compute_M(eps, p)
  double M_alpha = 0.0;     // normalizer sum for this alpha and norm
  double gain = 1.0;        // per-scale global rescale folded into the normalizer
  double normalizer = 1.0;  // images are divided by this

  Index scale_count() const { return i_hi >= i_lo ? i_hi - i_lo + 1 : 0; }
};

// p, delta and I for a normalized set. The doubling estimate and diameter
// are filled in too; the normalizer fields need the per-scale gain and are
// set by build_snowflake.
SnowflakeParams scale_plan(const PointSet& s, double alpha, double eps, Norm norm = Norm::kL2);
SnowflakeParams scale_plan(const DistanceMatrix& d, double alpha, double eps, Norm norm = Norm::kL2);
// Same from the two inputs only.
SnowflakeParams scale_plan(double diameter, double dim_hat, double alpha, double eps, Norm norm = Norm::kL2);

// sum over -p/2 < b <= p/2 of ((1+eps)^b G((1+eps)^-b))^2, long double.
long double compute_M(double eps, Index p);

// Normalizer sum for a given alpha and norm, with r_i^alpha in place of r_i:
//   l2:    sum_b ((1+eps)^(b alpha) G((1+eps)^-b))^2   (divide by its root)
//   l1:    sum_b (1+eps)^(b alpha) L((1+eps)^-b)       (divide by it)
//   l_inf: max_b (1+eps)^(b alpha) T((1+eps)^-b) = 1
long double compute_M_alpha(double eps, Index p, double alpha, Norm norm);

struct SnowflakeOptions {
  SingleScaleParams base;  // r, delta, eps, norm, seed and dim_override are overwritten per scale
  bool keep_scales = true; // keep the per-scale embeddings (images only)

  SnowflakeOptions() {
    base.diagnostics = false;
    base.keep_components = false;
  }
};

struct SnowflakeEmbedding {
  SnowflakeParams params;
  std::uint64_t seed = 0;
  std::vector<SingleScaleEmbedding> scales;  // scales[i - i_lo]
  std::vector<Index> scale_dims;             // stored width of each phi_i
  Matrix images;          // n x (p * block), normalized units
  Index block = 0;        // common width of each group
  NominalDimension per_scale;  // k_per_scale from dim_hat only
  double target_dim = 0.0;     // p * per_scale.k
  double target_dim_log2 = 0.0;
  double scale = 1.0;          // input PointSet::scale
  double raw_factor = 1.0;     // scale^alpha: raw image distances = factor * ||Phi(x) - Phi(y)||

  Index size() const { return images.rows(); }
  Index dim() const { return images.cols(); }
};

// Per-scale builds with r = (1+eps)^i, the plan's delta and seed
// derive_seed(seed, {kTagScale, i}); group sums
// Phi_j = sum_{i = j mod p} phi_i / (1+eps)^(i(1-alpha)), then division by
// the normalizer. Single-scale errors are rethrown with the scale index.
SnowflakeEmbedding build_snowflake(const PointSet& s, double alpha, double eps, std::uint64_t seed,
                                   const SnowflakeOptions& opt = {});
SnowflakeEmbedding build_snowflake(const PointSet& s, const DistanceMatrix& d, double alpha, double eps,
                                   std::uint64_t seed, const SnowflakeOptions& opt = {});

struct TailDiagnostics {
  Index tail_checks = 0;  // (pair, i in A) combinations
  Index tail_violations = 0;
  double tail_max = 0.0;  // max tail / (eps (1+eps)^(i(1-alpha)))
  Index dominant_checks = 0;
  Index dominant_violations = 0;
  double dominant_min = kInf;  // min B_i* / (1+eps)^(i*(1-alpha))
  double window_mass_min = 1.0;  // min over pairs of sum_A B_i^2 / sum_I B_i^2
  double tail_slack = 0.1;
  double dominant_bound = 0.45;

  bool ok() const { return tail_violations == 0 && dominant_violations == 0; }
};

struct SnowflakeAudit {
  DistortionReport ratios;  // ||Phi(x)-Phi(y)|| / d^alpha over all pairs
  double band = 0.0;        // max / min
  double c = 0.0;           // band = 1 + c eps
  double band_bound = 0.0;  // 1 + 16 eps
  TailDiagnostics tails;    // present when the scales were kept

  bool ok() const { return band <= band_bound; }
};

// Exhaustive pair scan. For each pair, i* = floor(log_{1+eps} d) and the
// window A = {i* - ceil(p/2) + 1, ..., i* + floor(p/2)}; the tail of each
// residue class outside A is compared with eps (1+eps)^(i(1-alpha)), and
// B_i* is compared with 0.45 (1+eps)^(i*(1-alpha)) when both endpoints were
// decomposed at scale i* (net points for l2), so no extension is involved.
SnowflakeAudit distortion_audit(const SnowflakeEmbedding& e, const PointSet& s);

std::vector<PairSample> snowflake_pairs(const SnowflakeEmbedding& e, const PointSet& s);

// Dump header with the scale manifest (I, p, delta, M, per-scale k).
std::string snowflake_json(const SnowflakeEmbedding& e, const SnowflakeAudit* audit = nullptr);

}  // namespace lowdim
