#pragma once

#include <cstdint>
#include <vector>

#include "lowdim/point_set.hpp"

namespace lowdim {

enum class TransformKind { kGaussian, kLaplace, kThreshold };

struct Transform {
  TransformKind kind = TransformKind::kGaussian;
  double r = 1.0;
};

// G_r(t) = r sqrt(1 - exp(-t^2/r^2)), L_r(t) = r (1 - exp(-t/r)),
// T_r(t) = min(t, r).
double transform_value(const Transform& t, double x);
// G_r(t)^2 evaluated without cancellation for t << r.
double gaussian_squared(double r, double t);
// The transform that matches a norm: l2 -> G_r, l1 -> L_r, linf -> T_r.
Transform transform_for(Norm norm, double r);

// Image of one cluster. Row k of `coords` belongs to members[k]; the row of
// origin_member (a local row index) is zero.
struct ClusterEmbedding {
  IndexList members;
  Matrix coords;
  Index origin_member = 0;
  double achieved_error = 0.0;
};

enum class GramFactor {
  kEigen,            // double-centered Gram, symmetric eigensolver
  kPivotedCholesky,  // Gram about the origin member, pivoted LDL^T
};

// Realizes the G_r-transformed l2 metric of a cluster as Euclidean
// coordinates. `d` holds the cluster's pairwise l2 distances. Eigenvalues
// (or pivots) in [-tol * max, 0) are clamped to zero; anything below that
// throws NotEuclidean.
ClusterEmbedding gaussian_embed(const DistanceMatrix& d, double r, double tol = 1e-9,
                                GramFactor method = GramFactor::kEigen, Index origin = 0);
ClusterEmbedding gaussian_embed(const PointSet& cluster, double r, double tol = 1e-9,
                                GramFactor method = GramFactor::kEigen);

// Minimum eigenvalue over max eigenvalue of the double-centered Gram matrix.
double gram_min_eigen_ratio(const DistanceMatrix& d, double r);

// Weighted cut: `set` is a bitmask over local cluster indices.
struct Cut {
  std::uint64_t set = 0;
  double weight = 0.0;
};

struct CutDecomposition {
  std::vector<Cut> cuts;
  double residual = 0.0;  // max |reconstructed - dist| over pairs
  Index pivots = 0;
};

// Nonnegative combination of cut metrics reproducing `dist` (an l1-embeddable
// metric on at most `cap` points), via a simplex solve minimizing total slack.
// Throws ClusterTooLarge or Infeasible.
CutDecomposition cut_decomposition_l1(const DistanceMatrix& dist, double tol = 1e-9, Index cap = 14);

// Pairwise distances of a weighted cut list.
DistanceMatrix cut_metric(const std::vector<Cut>& cuts, Index n);

// Sums all cuts that share a trace on the net members into one coordinate.
// `is_net[k]` flags local index k. The origin is the lowest net member (the
// lowest member when the net is empty).
ClusterEmbedding merge_cuts(const std::vector<Cut>& cuts, const std::vector<char>& is_net);

// Threshold Frechet map over the whole cluster followed by the Frechet map
// restricted to the net members: one coordinate per net member. `d` holds
// the cluster's l_inf distances. Throws EmptyNetIntersection.
ClusterEmbedding frechet_embed_linf(const DistanceMatrix& d, const std::vector<char>& is_net, double r);

}  // namespace lowdim
