#pragma once

#include <string>

#include "lowdim/types.hpp"

namespace lowdim {

// n points in R^d measured in an l_p norm. `scale` is the factor the raw
// coordinates were divided by during normalization (1 for raw input).
struct PointSet {
  Matrix points;
  Norm norm = Norm::kL2;
  double scale = 1.0;

  PointSet() = default;
  PointSet(Matrix pts, Norm n, double s = 1.0) : points(std::move(pts)), norm(n), scale(s) {}

  Index size() const { return points.rows(); }
  Index dim() const { return points.cols(); }
  auto row(Index i) const { return points.row(i); }
};

// Validates shape and finiteness; throws EmptyInput / BadParams.
void validate(const PointSet& s);

// l_p distance between points i and j; throws IndexOutOfRange.
double distance(const PointSet& s, Index i, Index j);

// Rescales so that the minimum interpoint distance is exactly 1.
// Throws EmptyInput if n < 2, DuplicatePoints if two points coincide
// (distance below 1e-12 of the diameter).
PointSet normalize(const PointSet& raw);

// Rows `idx` of `s`, same norm and scale.
PointSet subset(const PointSet& s, const IndexList& idx);

// Symmetric dense matrix of pairwise distances.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(Index n) : n_(n), d_(Matrix::Zero(n, n)) {}
  explicit DistanceMatrix(Matrix d) : n_(d.rows()), d_(std::move(d)) {}

  Index size() const { return n_; }
  double operator()(Index i, Index j) const { return d_(i, j); }
  double& at(Index i, Index j) { return d_(i, j); }
  const Matrix& matrix() const { return d_; }

  double min_offdiagonal() const;
  double max() const;
  DistanceMatrix restrict_to(const IndexList& idx) const;

 private:
  Index n_ = 0;
  Matrix d_;
};

}  // namespace lowdim
