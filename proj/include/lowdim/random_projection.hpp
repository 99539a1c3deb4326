#pragma once

#include <cstdint>

#include "lowdim/point_set.hpp"

namespace lowdim {

struct ProjectionResult {
  Matrix matrix;  // k' x k_C, already divided by max(expansion, 1)
  Matrix coords;  // projected rows, origin row translated to zero
  double achieved_max_expansion = 1.0;
  double achieved_max_contraction = 1.0;  // min ratio after post-scaling
  int tries = 0;                          // 0 when the identity is used
  bool identity = false;
};

// min(source_dim, ceil(c_jl eps^-2 ln max(n, 2))), at least 1; 1 for n <= 1.
Index jl_dimension(Index n_points, double eps, Index source_dim, double c_jl = 8.0);

struct ProjectionOptions {
  double c_jl = 8.0;
  int tries_per_dim = 64;
  int growth_rounds = 4;  // k' grows by 25% per round
  Index origin = 0;
};

// Gaussian projection with exact post-scaling (no pair expands) and
// verify-and-retry on the contraction bound 1/(1+eps) - tol. When k' reaches
// the source dimension the identity is returned. Throws ProjectionFailed.
ProjectionResult jl_project(const Matrix& coords, double eps, double tol, std::uint64_t seed,
                            const ProjectionOptions& opt = {});

}  // namespace lowdim
