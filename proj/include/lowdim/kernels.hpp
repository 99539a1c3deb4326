#pragma once

// Data-parallel inner loops shared by the construction and the audits.
// Every kernel has a plain serial reference in `serial::` and an OpenMP
// version in `parallel::`. Scans agree exactly; the Gram update differs only
// by summation order. bench/ compares their speed.

#include <cstddef>
#include <vector>

#include "lowdim/point_set.hpp"

namespace lowdim::kernels {

enum class Exec { kSerial, kParallel };

// Position of pair (i, j), i < j, in a condensed upper-triangular array.
inline std::size_t pair_index(Index i, Index j, Index n) {
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(2 * n - i - 1) / 2 +
         static_cast<std::size_t>(j - i - 1);
}
inline std::size_t pair_count(Index n) { return static_cast<std::size_t>(n) * (n - 1) / 2; }

struct RatioExtremes {
  double min = kInf;
  double max = 0.0;
  Index min_i = -1, min_j = -1;
  Index max_i = -1, max_j = -1;
  std::size_t pairs = 0;
};

namespace serial {
DistanceMatrix pairwise_distances(const Matrix& points, Norm norm);
std::vector<double> condensed_distances(const Matrix& points, Norm norm);
std::vector<double> distance_to_other_clusters(const DistanceMatrix& d, const std::vector<int>& cluster_of);
RatioExtremes ratio_extremes(const std::vector<double>& image, const DistanceMatrix& source);
void accumulate_scaled_gram(Matrix& gram, const Matrix& rows, const Vector& weights, double w);
}  // namespace serial

namespace parallel {
DistanceMatrix pairwise_distances(const Matrix& points, Norm norm);
std::vector<double> condensed_distances(const Matrix& points, Norm norm);
std::vector<double> distance_to_other_clusters(const DistanceMatrix& d, const std::vector<int>& cluster_of);
RatioExtremes ratio_extremes(const std::vector<double>& image, const DistanceMatrix& source);
void accumulate_scaled_gram(Matrix& gram, const Matrix& rows, const Vector& weights, double w);
}  // namespace parallel

// Dispatchers used by library code.
DistanceMatrix pairwise_distances(const Matrix& points, Norm norm, Exec exec = Exec::kParallel);
// Condensed pair distances (pair_index layout) between rows of `points`.
std::vector<double> condensed_distances(const Matrix& points, Norm norm, Exec exec = Exec::kParallel);
// For each point, the distance to the nearest point carrying a different
// cluster label (+inf when there is a single cluster).
std::vector<double> distance_to_other_clusters(const DistanceMatrix& d, const std::vector<int>& cluster_of,
                                               Exec exec = Exec::kParallel);
// Extremes of image[pair] / source(i, j) over all pairs with source > 0.
RatioExtremes ratio_extremes(const std::vector<double>& image, const DistanceMatrix& source,
                             Exec exec = Exec::kParallel);
// gram += w * diag(weights) * rows * rows^T * diag(weights)
void accumulate_scaled_gram(Matrix& gram, const Matrix& rows, const Vector& weights, double w,
                            Exec exec = Exec::kParallel);

}  // namespace lowdim::kernels
