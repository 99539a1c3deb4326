#pragma once

#include "lowdim/point_set.hpp"

namespace lowdim {

// max ||image_i - image_j|| / ||source_i - source_j|| over all pairs (l2 on
// both sides). 0 for fewer than two rows. Throws DuplicateSources.
double lipschitz_constant(const Matrix& sources, const Matrix& images);

struct ExtensionProblem {
  Matrix anchor_sources;
  Matrix anchor_images;
  double lipschitz_bound = 1.0;
  double tol = 1e-6;
};

struct ExtensionResult {
  Matrix images;             // one row per new point, in input order
  std::vector<int> sweeps;   // projection sweeps spent per new point
  std::vector<char> center_solves;  // 1 where the active-set solve was needed
  double worst_violation = 0.0;  // max over points of the final violation / (L r_min)
};

// Cyclic projection sweeps tried before the active-set solve.
inline constexpr int kWarmSweeps = 32;

// Extends the anchor map to `new_points` one at a time, in the given order.
// Each new image lies (up to tol L r_min) in every ball
// B(image_y, L (1 + tol) ||x - y||) over the current anchors; the point then
// joins the anchors. The search is cyclic projection from the nearest
// anchor's image. When the balls meet in a thin lens (near-isometric maps)
// and kWarmSweeps sweeps do not reach the tolerance, the point is recomputed
// as the minimizer of max_y ||z - image_y||^2 - radius_y^2 by an active-set
// solve over the simplex, then polished by projection. Throws BadParams when
// the bound is below the anchors' own constant, ExtensionDidNotConverge when
// the result still violates the tolerance after max_iter sweeps.
ExtensionResult kirszbraun_extend(const ExtensionProblem& problem, const Matrix& new_points, int max_iter = 10000);

}  // namespace lowdim
