#include "lowdim/generate.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "lowdim/error.hpp"
#include "lowdim/rng.hpp"

namespace lowdim {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kBadParams, what);
}

PointSet make_line(const GenParams& p) {
  require(p.n >= 1, "line needs n >= 1");
  Matrix pts(p.n, 1);
  for (Index i = 0; i < p.n; ++i) pts(i, 0) = static_cast<double>(i);
  return PointSet(std::move(pts), p.norm);
}

PointSet make_grid(const GenParams& p) {
  require(p.side >= 1 && p.grid_dim >= 1 && p.grid_dim <= 6, "grid needs side >= 1 and 1 <= dim <= 6");
  Index total = 1;
  for (Index k = 0; k < p.grid_dim; ++k) total *= p.side;
  Matrix pts(total, p.grid_dim);
  for (Index i = 0; i < total; ++i) {
    Index rest = i;
    for (Index k = p.grid_dim - 1; k >= 0; --k) {
      pts(i, k) = static_cast<double>(rest % p.side);
      rest /= p.side;
    }
  }
  return PointSet(std::move(pts), p.norm);
}

// Points at mutual distance >= 1 inside a cube of a random k-flat, plus
// bounded uniform noise in every ambient coordinate.
PointSet make_subspace(const GenParams& p, Rng& rng) {
  require(p.n >= 1 && p.intrinsic >= 1 && p.ambient >= p.intrinsic, "subspace needs 1 <= intrinsic <= ambient");
  require(p.noise >= 0.0 && p.noise < 0.25, "subspace noise must be in [0, 0.25)");
  std::normal_distribution<double> gauss;
  Matrix g(p.ambient, p.intrinsic);
  for (Index i = 0; i < g.rows(); ++i)
    for (Index j = 0; j < g.cols(); ++j) g(i, j) = gauss(rng);
  const Eigen::MatrixXd basis = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ() *
                                Eigen::MatrixXd::Identity(p.ambient, p.intrinsic);

  const double side = 1.5 * std::pow(static_cast<double>(p.n), 1.0 / static_cast<double>(p.intrinsic)) + 1.0;
  std::uniform_real_distribution<double> unit(0.0, side);
  Eigen::MatrixXd flat(p.n, p.intrinsic);
  Index have = 0;
  for (Index attempt = 0; have < p.n; ++attempt) {
    require(attempt < 1000 * p.n, "subspace rejection sampling did not fill n points");
    Eigen::RowVectorXd c(p.intrinsic);
    for (Index j = 0; j < p.intrinsic; ++j) c(j) = unit(rng);
    bool ok = true;
    for (Index i = 0; i < have && ok; ++i) ok = (flat.row(i) - c).norm() >= 1.0;
    if (ok) flat.row(have++) = c;
  }
  std::uniform_real_distribution<double> jitter(-p.noise, p.noise);
  Matrix pts = flat * basis.transpose();
  for (Index i = 0; i < pts.rows(); ++i)
    for (Index j = 0; j < pts.cols(); ++j) pts(i, j) += jitter(rng);
  return PointSet(std::move(pts), p.norm);
}

PointSet make_ball(const GenParams& p, Rng& rng) {
  require(p.n >= 1 && p.ambient >= 1, "ball needs n >= 1 and ambient >= 1");
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double radius = std::pow(static_cast<double>(p.n), 1.0 / static_cast<double>(p.ambient)) * 2.0;
  Matrix pts(p.n, p.ambient);
  for (Index i = 0; i < p.n; ++i) {
    Eigen::RowVectorXd v(p.ambient);
    for (Index j = 0; j < p.ambient; ++j) v(j) = gauss(rng);
    const double len = v.norm();
    const double rad = radius * std::pow(unit(rng), 1.0 / static_cast<double>(p.ambient));
    pts.row(i) = v * (len > 0 ? rad / len : 0.0);
  }
  return PointSet(std::move(pts), p.norm);
}

double level_distance(Index h, double ratio, bool square) {
  if (h == 0) return 0.0;
  const double d = std::pow(ratio, static_cast<double>(h - 1));
  return square ? d * d : d;
}

// Leaves of a balanced binary tree. Every non-root node owns one axis; the
// edge above a node at height h has length c_{h+1} with
// 2 * sum_{t <= H} c_t^2 = D_H^2, so leaf distances are exactly D_H.
PointSet make_ultrametric(const GenParams& p) {
  require(p.depth >= 1 && p.depth <= 12, "ultrametric depth must be in [1, 12]");
  require(p.ratio > 1.0, "ultrametric ratio must exceed 1");
  const Index leaves = Index{1} << p.depth;
  const Index axes = (Index{1} << (p.depth + 1)) - 2;
  std::vector<double> edge(p.depth + 1, 0.0);
  for (Index h = 1; h <= p.depth; ++h) {
    const double hi = level_distance(h, p.ratio, p.square);
    const double lo = level_distance(h - 1, p.ratio, p.square);
    edge[h] = std::sqrt((hi * hi - lo * lo) / 2.0);
  }
  Matrix pts = Matrix::Zero(leaves, axes);
  for (Index leaf = 0; leaf < leaves; ++leaf) {
    // Node at height t above `leaf` has index leaf >> t within its level;
    // levels are laid out leaves-first.
    Index offset = 0;
    for (Index t = 0; t < p.depth; ++t) {
      const Index level_size = leaves >> t;
      pts(leaf, offset + (leaf >> t)) = edge[t + 1];
      offset += level_size;
    }
  }
  return PointSet(std::move(pts), p.norm);
}

}  // namespace

double ultrametric_distance(Index i, Index j, double ratio, bool square) {
  if (i == j) return 0.0;
  const auto x = static_cast<std::uint64_t>(i ^ j);
  const Index h = static_cast<Index>(std::bit_width(x));
  return level_distance(h, ratio, square);
}

PointSet generate(std::string_view kind, const GenParams& params, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {kTagGenerate}));
  if (kind == "line") return make_line(params);
  if (kind == "grid") return make_grid(params);
  if (kind == "subspace") return make_subspace(params, rng);
  if (kind == "ball") return make_ball(params, rng);
  if (kind == "ultrametric") return make_ultrametric(params);
  throw Error(ErrorCode::kUnknownKind, "generator kind '" + std::string(kind) + "'");
}

}  // namespace lowdim
