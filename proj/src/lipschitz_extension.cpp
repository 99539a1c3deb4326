#include "lowdim/lipschitz_extension.hpp"

#include <algorithm>
#include <cmath>

#include "lowdim/error.hpp"
#include "lowdim/kernels.hpp"

namespace lowdim {

double lipschitz_constant(const Matrix& sources, const Matrix& images) {
  if (sources.rows() != images.rows()) throw Error(ErrorCode::kBadParams, "source/image row mismatch");
  if (sources.rows() < 2) return 0.0;
  const DistanceMatrix src = kernels::pairwise_distances(sources, Norm::kL2);
  if (src.min_offdiagonal() == 0.0) throw Error(ErrorCode::kDuplicateSources, "two sources coincide");
  return kernels::ratio_extremes(kernels::condensed_distances(images, Norm::kL2), src).max;
}

namespace {

// Max over anchors of ||z - img_y|| - radius_y.
double max_violation(const Eigen::RowVectorXd& z, const Matrix& img, const std::vector<double>& radius) {
  double v = -kInf;
  for (std::size_t y = 0; y < radius.size(); ++y)
    v = std::max(v, (z - img.row(static_cast<Index>(y))).norm() - radius[y]);
  return v;
}

// Cyclic projection onto the balls; returns the sweeps spent.
int cyclic_sweeps(Eigen::RowVectorXd& z, const Matrix& img, const std::vector<double>& radius, double stop,
                  int budget) {
  int sweep = 0;
  while (sweep < budget && max_violation(z, img, radius) > stop) {
    ++sweep;
    for (std::size_t y = 0; y < radius.size(); ++y) {
      const Eigen::RowVectorXd diff = z - img.row(static_cast<Index>(y));
      const double gap = diff.norm();
      if (gap > radius[y]) z = img.row(static_cast<Index>(y)) + diff * (radius[y] / gap);
    }
  }
  return sweep;
}

// Primal active-set solve of min over the simplex of mu^T G mu - b^T mu with
// G the Gram of img_y - o and b_y = |img_y - o|^2 - radius_y^2. Its minimizer
// z = sum mu_y (img_y - o) minimizes max_y |z - img_y|^2 - radius_y^2, which
// is <= 0 whenever the balls intersect. Stops early once z is within `stop`
// of every ball.
Eigen::RowVectorXd center_solve(const Matrix& img, const std::vector<double>& radius, Index first, double stop) {
  const Index n = static_cast<Index>(radius.size());
  const Eigen::RowVectorXd o = img.row(first);
  Matrix rel(n, img.cols());
  for (Index y = 0; y < n; ++y) rel.row(y) = img.row(y) - o;
  Vector b(n);
  for (Index y = 0; y < n; ++y) b(y) = rel.row(y).squaredNorm() - radius[y] * radius[y];

  IndexList active{first};
  Vector mu = Vector::Ones(1);
  Eigen::RowVectorXd z = Eigen::RowVectorXd::Zero(img.cols());
  const int max_rounds = static_cast<int>(4 * n + 64);
  for (int round = 0; round < max_rounds; ++round) {
    z.setZero();
    for (std::size_t a = 0; a < active.size(); ++a) z += mu(static_cast<Index>(a)) * rel.row(active[a]);
    if (max_violation(z + o, img, radius) <= stop) break;

    // Most violated constraint outside the active set.
    Index j = -1;
    double worst = -kInf;
    for (Index y = 0; y < n; ++y) {
      if (std::find(active.begin(), active.end(), y) != active.end()) continue;
      const double v = (z - rel.row(y)).squaredNorm() - radius[y] * radius[y];
      if (v > worst) {
        worst = v;
        j = y;
      }
    }
    if (j < 0) break;
    active.push_back(j);
    mu.conservativeResize(static_cast<Index>(active.size()));
    mu(mu.size() - 1) = 0.0;

    // Equality-constrained minimizers on the active set, dropping blocking
    // indices until the solution is nonnegative.
    while (true) {
      const Index k = static_cast<Index>(active.size());
      Matrix h(k, k);
      Vector bk(k);
      double diag = 0.0;
      for (Index a = 0; a < k; ++a) {
        bk(a) = b(active[a]);
        for (Index c = 0; c < k; ++c) h(a, c) = rel.row(active[a]).dot(rel.row(active[c]));
        diag = std::max(diag, h(a, a));
      }
      h.diagonal().array() += 1e-12 * std::max(diag, 1e-300);
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
      const Vector hb = ldlt.solve(bk);
      const Vector h1 = ldlt.solve(Vector::Ones(k));
      const double nu = (hb.sum() - 2.0) / h1.sum();
      const Vector target = 0.5 * (hb - nu * h1);
      if ((target.array() >= 0.0).all()) {
        mu = target;
        break;
      }
      double alpha = 1.0;
      Index block = -1;
      for (Index a = 0; a < k; ++a)
        if (target(a) < 0.0) {
          const double step = mu(a) / (mu(a) - target(a));
          if (step < alpha) {
            alpha = step;
            block = a;
          }
        }
      mu += alpha * (target - mu);
      IndexList keep_idx;
      Vector keep_mu(k);
      Index kept = 0;
      for (Index a = 0; a < k; ++a)
        if (a != block && mu(a) > 0.0) {
          keep_idx.push_back(active[a]);
          keep_mu(kept++) = mu(a);
        }
      if (kept == 0) {
        keep_idx.push_back(active[0]);
        keep_mu(kept++) = 1.0;
      }
      active = std::move(keep_idx);
      mu = keep_mu.head(kept) / keep_mu.head(kept).sum();
    }
  }
  z.setZero();
  for (std::size_t a = 0; a < active.size(); ++a) z += mu(static_cast<Index>(a)) * rel.row(active[a]);
  return z + o;
}

}  // namespace

ExtensionResult kirszbraun_extend(const ExtensionProblem& problem, const Matrix& new_points, int max_iter) {
  const double L = problem.lipschitz_bound;
  const double tol = problem.tol;
  const Index n0 = problem.anchor_sources.rows();
  if (n0 < 1) throw Error(ErrorCode::kEmptyInput, "no anchors");
  if (!(L >= 0.0) || !(tol >= 0.0)) throw Error(ErrorCode::kBadParams, "bound and tol must be nonnegative");
  const double measured = lipschitz_constant(problem.anchor_sources, problem.anchor_images);
  if (measured > L * (1.0 + tol))
    throw Error(ErrorCode::kBadParams, "Lipschitz bound " + std::to_string(L) + " below anchor constant " +
                                           std::to_string(measured));

  const Index extra = new_points.rows();
  Matrix src(n0 + extra, problem.anchor_sources.cols());
  Matrix img(n0 + extra, problem.anchor_images.cols());
  src.topRows(n0) = problem.anchor_sources;
  img.topRows(n0) = problem.anchor_images;

  ExtensionResult out;
  out.images.resize(extra, img.cols());
  out.sweeps.assign(extra, 0);
  out.center_solves.assign(extra, 0);
  std::vector<double> radius;
  for (Index k = 0; k < extra; ++k) {
    const Index have = n0 + k;
    radius.resize(have);
    Index nearest = 0;
    for (Index y = 0; y < have; ++y) {
      radius[y] = (src.row(y) - new_points.row(k)).norm();
      if (radius[y] < radius[nearest]) nearest = y;
    }
    const double r_min = radius[nearest];
    for (double& rad : radius) rad *= L * (1.0 + tol);
    Eigen::RowVectorXd z = img.row(nearest);
    if (r_min > 0.0 && L > 0.0) {
      const Matrix anchors = img.topRows(have);
      const double stop = tol * L * r_min;
      int sweeps = cyclic_sweeps(z, anchors, radius, stop, std::min(max_iter, kWarmSweeps));
      if (max_violation(z, anchors, radius) > stop) {
        z = center_solve(anchors, radius, nearest, stop);
        out.center_solves[k] = 1;
        sweeps += cyclic_sweeps(z, anchors, radius, stop, std::max(0, max_iter - sweeps));
      }
      const double violation = max_violation(z, anchors, radius);
      if (violation > stop)
        throw Error(ErrorCode::kExtensionDidNotConverge,
                    "point " + std::to_string(k) + ": residual " + std::to_string(violation / (L * r_min)) +
                        " (relative) after " + std::to_string(sweeps) + " sweeps");
      out.sweeps[k] = sweeps;
      out.worst_violation = std::max(out.worst_violation, std::max(0.0, violation) / (L * r_min));
    }
    src.row(have) = new_points.row(k);
    img.row(have) = z;
    out.images.row(k) = z;
  }
  return out;
}

}  // namespace lowdim
