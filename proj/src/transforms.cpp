#include "lowdim/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "lowdim/error.hpp"
#include "lowdim/kernels.hpp"

namespace lowdim {

double gaussian_squared(double r, double t) {
  const double u = t / r;
  return r * r * -std::expm1(-u * u);
}

double transform_value(const Transform& t, double x) {
  switch (t.kind) {
    case TransformKind::kGaussian:
      return std::sqrt(gaussian_squared(t.r, x));
    case TransformKind::kLaplace:
      return t.r * -std::expm1(-x / t.r);
    case TransformKind::kThreshold:
      return std::min(x, t.r);
  }
  return 0.0;
}

Transform transform_for(Norm norm, double r) {
  switch (norm) {
    case Norm::kL1:
      return {TransformKind::kLaplace, r};
    case Norm::kL2:
      return {TransformKind::kGaussian, r};
    case Norm::kLinf:
      return {TransformKind::kThreshold, r};
  }
  return {TransformKind::kGaussian, r};
}

namespace {

Matrix squared_transformed(const DistanceMatrix& d, double r) {
  const Index n = d.size();
  Matrix d2(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) d2(i, j) = i == j ? 0.0 : gaussian_squared(r, d(i, j));
  return d2;
}

Eigen::MatrixXd double_centered(const Matrix& d2) {
  const Eigen::VectorXd row_mean = d2.rowwise().mean();
  const double all = row_mean.mean();
  Eigen::MatrixXd b = -0.5 * d2;
  b.colwise() += 0.5 * row_mean;
  b.rowwise() += 0.5 * row_mean.transpose();
  b.array() -= 0.5 * all;
  return 0.5 * (b + b.transpose());
}

double max_relative_error(const Matrix& coords, const DistanceMatrix& d, double r) {
  double worst = 0.0;
  for (Index i = 0; i < d.size(); ++i)
    for (Index j = i + 1; j < d.size(); ++j) {
      const double want = std::sqrt(gaussian_squared(r, d(i, j)));
      const double got = (coords.row(i) - coords.row(j)).norm();
      if (want > 0) worst = std::max(worst, std::abs(got - want) / want);
    }
  return worst;
}

Matrix eigen_factor(const Matrix& d2, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(double_centered(d2));
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const double lmax = lam.maxCoeff();
  std::vector<Index> keep;
  for (Index k = lam.size() - 1; k >= 0; --k) {
    if (lam[k] < -tol * lmax)
      throw Error(ErrorCode::kNotEuclidean,
                  "Gram eigenvalue " + std::to_string(lam[k]) + " below -tol * " + std::to_string(lmax));
    if (lam[k] > 0) keep.push_back(k);
  }
  Matrix coords(d2.rows(), std::max<Index>(1, static_cast<Index>(keep.size())));
  coords.setZero();
  for (std::size_t c = 0; c < keep.size(); ++c)
    coords.col(static_cast<Index>(c)) = eig.eigenvectors().col(keep[c]) * std::sqrt(lam[keep[c]]);
  return coords;
}

Matrix ldlt_factor(const Matrix& d2, Index origin, double tol) {
  const Index n = d2.rows();
  Eigen::MatrixXd b(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) b(i, j) = 0.5 * (d2(i, origin) + d2(j, origin) - d2(i, j));
  Eigen::LDLT<Eigen::MatrixXd> ldlt(b);
  const Eigen::VectorXd piv = ldlt.vectorD();
  const double pmax = std::max(piv.maxCoeff(), 0.0);
  std::vector<Index> keep;
  for (Index k = 0; k < n; ++k) {
    if (piv[k] < -tol * pmax)
      throw Error(ErrorCode::kNotEuclidean,
                  "Gram pivot " + std::to_string(piv[k]) + " below -tol * " + std::to_string(pmax));
    if (piv[k] > 0) keep.push_back(k);
  }
  const Eigen::MatrixXd lower = ldlt.matrixL();
  Eigen::MatrixXd scaled(n, std::max<Index>(1, static_cast<Index>(keep.size())));
  scaled.setZero();
  for (std::size_t c = 0; c < keep.size(); ++c)
    scaled.col(static_cast<Index>(c)) = lower.col(keep[c]) * std::sqrt(piv[keep[c]]);
  Eigen::MatrixXd unpermuted = ldlt.transpositionsP().transpose() * scaled;
  return unpermuted;
}

}  // namespace

ClusterEmbedding gaussian_embed(const DistanceMatrix& d, double r, double tol, GramFactor method, Index origin) {
  if (!(r > 0.0)) throw Error(ErrorCode::kBadParams, "r must be positive");
  const Index n = d.size();
  if (n < 1) throw Error(ErrorCode::kEmptyInput, "empty cluster");
  if (origin < 0 || origin >= n) throw Error(ErrorCode::kIndexOutOfRange, "origin member");
  ClusterEmbedding out;
  out.members.resize(n);
  for (Index i = 0; i < n; ++i) out.members[i] = i;
  out.origin_member = origin;
  if (n == 1) {
    out.coords = Matrix::Zero(1, 1);
    return out;
  }
  const Matrix d2 = squared_transformed(d, r);
  out.coords = method == GramFactor::kEigen ? eigen_factor(d2, tol) : ldlt_factor(d2, origin, tol);
  const Eigen::RowVectorXd o = out.coords.row(origin);
  out.coords.rowwise() -= o;
  out.achieved_error = max_relative_error(out.coords, d, r);
  return out;
}

ClusterEmbedding gaussian_embed(const PointSet& cluster, double r, double tol, GramFactor method) {
  if (cluster.norm != Norm::kL2) throw Error(ErrorCode::kBadParams, "Gaussian embedding needs l2 input");
  return gaussian_embed(kernels::pairwise_distances(cluster.points, cluster.norm), r, tol, method, 0);
}

double gram_min_eigen_ratio(const DistanceMatrix& d, double r) {
  if (d.size() < 2) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(double_centered(squared_transformed(d, r)),
                                                     Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() / eig.eigenvalues().maxCoeff();
}

ClusterEmbedding frechet_embed_linf(const DistanceMatrix& d, const std::vector<char>& is_net, double r) {
  const Index n = d.size();
  IndexList net;
  for (Index k = 0; k < n; ++k)
    if (is_net[k]) net.push_back(k);
  if (net.empty()) throw Error(ErrorCode::kEmptyNetIntersection, "cluster has no net member");

  // g(x)_w = T_r(d(w, x)) over every w in the cluster.
  Matrix g(n, n);
  for (Index x = 0; x < n; ++x)
    for (Index w = 0; w < n; ++w) g(x, w) = std::min(d(w, x), r);

  ClusterEmbedding out;
  out.members.resize(n);
  for (Index i = 0; i < n; ++i) out.members[i] = i;
  out.origin_member = net.front();
  out.coords.resize(n, static_cast<Index>(net.size()));
  for (Index x = 0; x < n; ++x)
    for (std::size_t c = 0; c < net.size(); ++c)
      out.coords(x, static_cast<Index>(c)) = (g.row(x) - g.row(net[c])).lpNorm<Eigen::Infinity>();
  const Eigen::RowVectorXd o = out.coords.row(out.origin_member);
  out.coords.rowwise() -= o;

  for (std::size_t a = 0; a < net.size(); ++a)
    for (std::size_t b = a + 1; b < net.size(); ++b) {
      const double want = std::min(d(net[a], net[b]), r);
      const double got = (out.coords.row(net[a]) - out.coords.row(net[b])).lpNorm<Eigen::Infinity>();
      if (want > 0) out.achieved_error = std::max(out.achieved_error, std::abs(got - want) / want);
    }
  return out;
}

}  // namespace lowdim
