#include "lowdim/random_projection.hpp"

#include <cmath>

#include "lowdim/error.hpp"
#include "lowdim/kernels.hpp"
#include "lowdim/rng.hpp"

namespace lowdim {

Index jl_dimension(Index n_points, double eps, Index source_dim, double c_jl) {
  if (n_points <= 1) return 1;
  const double want = std::ceil(c_jl / (eps * eps) * std::log(std::max<double>(static_cast<double>(n_points), 2.0)));
  return std::max<Index>(1, std::min<Index>(static_cast<Index>(want), source_dim));
}

namespace {

ProjectionResult identity_result(const Matrix& coords, Index origin) {
  ProjectionResult res;
  res.identity = true;
  res.matrix = Matrix::Identity(coords.cols(), coords.cols());
  res.coords = coords;
  const Eigen::RowVectorXd o = res.coords.row(origin);
  res.coords.rowwise() -= o;
  return res;
}

}  // namespace

ProjectionResult jl_project(const Matrix& coords, double eps, double tol, std::uint64_t seed,
                            const ProjectionOptions& opt) {
  if (!(eps > 0.0)) throw Error(ErrorCode::kBadParams, "eps must be positive");
  const Index n = coords.rows();
  const Index kc = coords.cols();
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "no rows to project");
  if (n == 1) {
    ProjectionResult res;
    res.matrix = Matrix::Zero(1, kc);
    res.coords = Matrix::Zero(1, 1);
    return res;
  }
  Index k = jl_dimension(n, eps, kc, opt.c_jl);
  if (k >= kc) return identity_result(coords, opt.origin);

  const DistanceMatrix source = kernels::pairwise_distances(coords, Norm::kL2);
  const double floor_ratio = 1.0 / (1.0 + eps) - tol;
  int tries = 0;
  double best_contraction = 0.0;
  std::normal_distribution<double> gauss;
  for (int round = 0; round <= opt.growth_rounds; ++round) {
    for (int t = 0; t < opt.tries_per_dim; ++t) {
      ++tries;
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(t)}));
      Matrix g(k, kc);
      for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < kc; ++j) g(i, j) = gauss(rng);
      g /= std::sqrt(static_cast<double>(k));
      Matrix proj = coords * g.transpose();
      const Eigen::RowVectorXd o = proj.row(opt.origin);
      proj.rowwise() -= o;
      auto ext = kernels::ratio_extremes(kernels::condensed_distances(proj, Norm::kL2), source);
      const double expansion = ext.max;
      if (expansion > 1.0) {
        double s = 1.0 / expansion;
        // Shave the last ulps so the bound holds after rounding.
        for (int guard = 0; guard < 8; ++guard) {
          Matrix scaled = proj * s;
          ext = kernels::ratio_extremes(kernels::condensed_distances(scaled, Norm::kL2), source);
          if (ext.max <= 1.0) break;
          s = std::nextafter(s, 0.0) * (1.0 - 1e-15);
        }
        g *= s;
        proj *= s;
      }
      best_contraction = std::max(best_contraction, ext.min);
      if (ext.min >= floor_ratio) {
        ProjectionResult res;
        res.matrix = std::move(g);
        res.coords = std::move(proj);
        res.achieved_max_expansion = expansion;
        res.achieved_max_contraction = ext.min;
        res.tries = tries;
        return res;
      }
    }
    k = static_cast<Index>(std::ceil(static_cast<double>(k) * 1.25));
    if (k >= kc) {
      ProjectionResult res = identity_result(coords, opt.origin);
      res.tries = tries;
      return res;
    }
  }
  throw Error(ErrorCode::kProjectionFailed, "best contraction " + std::to_string(best_contraction) + " < " +
                                                std::to_string(floor_ratio) + " after " + std::to_string(tries) +
                                                " tries, final k' = " + std::to_string(k));
}

}  // namespace lowdim
