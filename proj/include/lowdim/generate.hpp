#pragma once

#include <cstdint>
#include <string_view>

#include "lowdim/point_set.hpp"

namespace lowdim {

// Parameters for the synthetic generators; each kind reads only its own.
struct GenParams {
  Index n = 100;           // line, subspace, ball
  Index side = 8;          // grid
  Index grid_dim = 2;      // grid
  Index intrinsic = 3;     // subspace
  Index ambient = 50;      // subspace, ball
  double noise = 0.05;     // subspace: max |noise| per ambient coordinate
  Index depth = 4;         // ultrametric: 2^depth leaves
  double ratio = 2.0;      // ultrametric: distance growth per level
  bool square = false;     // ultrametric: realize d^2 instead of d
  Norm norm = Norm::kL2;   // tag attached to the output
};

// kind in {line, grid, subspace, ball, ultrametric}. Raw (unnormalized)
// coordinates; deterministic for a fixed seed.
PointSet generate(std::string_view kind, const GenParams& params, std::uint64_t seed);

// Leaf-to-leaf distance of the balanced ultrametric used by the generator.
// Leaves whose lowest common ancestor sits h levels up are ratio^(h-1)
// apart (squared when `square`).
double ultrametric_distance(Index i, Index j, double ratio, bool square);

}  // namespace lowdim
