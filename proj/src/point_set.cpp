#include "lowdim/point_set.hpp"

#include <cmath>

#include "lowdim/error.hpp"
#include "lowdim/kernels.hpp"

namespace lowdim {

void validate(const PointSet& s) {
  if (s.size() < 1) throw Error(ErrorCode::kEmptyInput, "point set has no points");
  if (s.dim() < 1) throw Error(ErrorCode::kBadParams, "point set has zero ambient dimension");
  if (!s.points.allFinite()) throw Error(ErrorCode::kBadParams, "non-finite coordinate");
  if (!(s.scale > 0.0) || !std::isfinite(s.scale)) throw Error(ErrorCode::kBadParams, "scale must be positive");
}

double distance(const PointSet& s, Index i, Index j) {
  if (i < 0 || j < 0 || i >= s.size() || j >= s.size())
    throw Error(ErrorCode::kIndexOutOfRange,
                "pair (" + std::to_string(i) + ", " + std::to_string(j) + ") with n = " + std::to_string(s.size()));
  if (i == j) return 0.0;
  return norm_distance(s.row(i), s.row(j), s.norm);
}

PointSet normalize(const PointSet& raw) {
  if (raw.size() < 2) throw Error(ErrorCode::kEmptyInput, "normalization needs at least 2 points");
  validate(raw);
  const DistanceMatrix d = kernels::pairwise_distances(raw.points, raw.norm);
  const double dmin = d.min_offdiagonal();
  const double dmax = d.max();
  if (!(dmin >= 1e-12 * dmax) || dmax == 0.0) throw Error(ErrorCode::kDuplicatePoints, "two input points coincide");
  PointSet out(raw.points / dmin, raw.norm, raw.scale * dmin);
  return out;
}

PointSet subset(const PointSet& s, const IndexList& idx) {
  Matrix pts(static_cast<Index>(idx.size()), s.dim());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= s.size()) throw Error(ErrorCode::kIndexOutOfRange, "subset index");
    pts.row(static_cast<Index>(k)) = s.row(idx[k]);
  }
  return PointSet(std::move(pts), s.norm, s.scale);
}

double DistanceMatrix::min_offdiagonal() const {
  double best = kInf;
  for (Index i = 0; i < n_; ++i)
    for (Index j = i + 1; j < n_; ++j) best = std::min(best, d_(i, j));
  return best;
}

double DistanceMatrix::max() const { return n_ == 0 ? 0.0 : d_.maxCoeff(); }

DistanceMatrix DistanceMatrix::restrict_to(const IndexList& idx) const {
  const Index k = static_cast<Index>(idx.size());
  Matrix out(k, k);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < k; ++b) out(a, b) = d_(idx[a], idx[b]);
  return DistanceMatrix(std::move(out));
}

}  // namespace lowdim
