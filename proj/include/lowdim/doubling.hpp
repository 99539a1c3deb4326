#pragma once

#include <string>

#include "lowdim/point_set.hpp"

namespace lowdim {

struct DoublingEstimate {
  double lambda_hat = 1.0;
  double dim_hat = 0.0;  // log2(lambda_hat)
  std::string method;
};

struct DoublingOptions {
  Index max_centers = 200;  // all points when n is at most this, else a stride sample
};

// Max over radii rho = 2^j (j >= 1, in normalized units) and sampled centers
// x of the greedy count of closed rho/2-balls around points of S needed to
// cover B(x, rho).
DoublingEstimate estimate_doubling(const PointSet& s, const DoublingOptions& opt = {});
DoublingEstimate estimate_doubling(const DistanceMatrix& d, const DoublingOptions& opt = {});

}  // namespace lowdim
