#include "lowdim/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lowdim::kernels {

namespace {

// Lexicographic pair order breaks ties so serial and parallel scans agree.
bool pair_before(Index i, Index j, Index k, Index l) { return i < k || (i == k && j < l); }

void merge_extremes(RatioExtremes& into, const RatioExtremes& from) {
  if (from.min < into.min || (from.min == into.min && from.min_i >= 0 &&
                              (into.min_i < 0 || pair_before(from.min_i, from.min_j, into.min_i, into.min_j)))) {
    into.min = from.min;
    into.min_i = from.min_i;
    into.min_j = from.min_j;
  }
  if (from.max > into.max || (from.max == into.max && from.max_i >= 0 &&
                              (into.max_i < 0 || pair_before(from.max_i, from.max_j, into.max_i, into.max_j)))) {
    into.max = from.max;
    into.max_i = from.max_i;
    into.max_j = from.max_j;
  }
  into.pairs += from.pairs;
}

void scan_row(const std::vector<double>& image, const DistanceMatrix& source, Index i, RatioExtremes& acc) {
  const Index n = source.size();
  for (Index j = i + 1; j < n; ++j) {
    const double s = source(i, j);
    if (!(s > 0.0)) continue;
    const double r = image[pair_index(i, j, n)] / s;
    ++acc.pairs;
    if (r < acc.min) {
      acc.min = r;
      acc.min_i = i;
      acc.min_j = j;
    }
    if (r > acc.max || acc.max_i < 0) {
      acc.max = r;
      acc.max_i = i;
      acc.max_j = j;
    }
  }
}

}  // namespace

namespace serial {

DistanceMatrix pairwise_distances(const Matrix& points, Norm norm) {
  const Index n = points.rows();
  DistanceMatrix d(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double v = norm_distance(points.row(i), points.row(j), norm);
      d.at(i, j) = v;
      d.at(j, i) = v;
    }
  }
  return d;
}

std::vector<double> condensed_distances(const Matrix& points, Norm norm) {
  const Index n = points.rows();
  std::vector<double> out(pair_count(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) out[pair_index(i, j, n)] = norm_distance(points.row(i), points.row(j), norm);
  return out;
}

std::vector<double> distance_to_other_clusters(const DistanceMatrix& d, const std::vector<int>& cluster_of) {
  const Index n = d.size();
  std::vector<double> h(n, kInf);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (cluster_of[j] != cluster_of[i]) h[i] = std::min(h[i], d(i, j));
  return h;
}

RatioExtremes ratio_extremes(const std::vector<double>& image, const DistanceMatrix& source) {
  RatioExtremes acc;
  for (Index i = 0; i < source.size(); ++i) scan_row(image, source, i, acc);
  return acc;
}

void accumulate_scaled_gram(Matrix& gram, const Matrix& rows, const Vector& weights, double w) {
  const Index n = rows.rows();
  const Index k = rows.cols();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j <= i; ++j) {
      double dot = 0.0;
      for (Index t = 0; t < k; ++t) dot += rows(i, t) * rows(j, t);
      const double v = w * weights[i] * weights[j] * dot;
      gram(i, j) += v;
      if (j != i) gram(j, i) += v;
    }
  }
}

}  // namespace serial

namespace parallel {

DistanceMatrix pairwise_distances(const Matrix& points, Norm norm) {
  const Index n = points.rows();
  DistanceMatrix d(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double v = norm_distance(points.row(i), points.row(j), norm);
      d.at(i, j) = v;
      d.at(j, i) = v;
    }
  }
  return d;
}

std::vector<double> condensed_distances(const Matrix& points, Norm norm) {
  const Index n = points.rows();
  std::vector<double> out(pair_count(n));
#pragma omp parallel for schedule(dynamic, 8)
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) out[pair_index(i, j, n)] = norm_distance(points.row(i), points.row(j), norm);
  return out;
}

std::vector<double> distance_to_other_clusters(const DistanceMatrix& d, const std::vector<int>& cluster_of) {
  const Index n = d.size();
  std::vector<double> h(n, kInf);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    double best = kInf;
    const int ci = cluster_of[i];
    for (Index j = 0; j < n; ++j)
      if (cluster_of[j] != ci) best = std::min(best, d(i, j));
    h[i] = best;
  }
  return h;
}

RatioExtremes ratio_extremes(const std::vector<double>& image, const DistanceMatrix& source) {
  RatioExtremes result;
  const Index n = source.size();
#pragma omp parallel
  {
    RatioExtremes local;
#pragma omp for schedule(dynamic, 8) nowait
    for (Index i = 0; i < n; ++i) scan_row(image, source, i, local);
#pragma omp critical
    merge_extremes(result, local);
  }
  return result;
}

void accumulate_scaled_gram(Matrix& gram, const Matrix& rows, const Vector& weights, double w) {
  // Row-scale first, then one symmetric rank-k update (BLAS-3 path in Eigen).
  Matrix scaled = weights.asDiagonal() * rows;
  Matrix update = Matrix::Zero(rows.rows(), rows.rows());
  update.selfadjointView<Eigen::Lower>().rankUpdate(scaled, w);
  gram += update.selfadjointView<Eigen::Lower>();
}

}  // namespace parallel

DistanceMatrix pairwise_distances(const Matrix& points, Norm norm, Exec exec) {
  return exec == Exec::kSerial ? serial::pairwise_distances(points, norm) : parallel::pairwise_distances(points, norm);
}

std::vector<double> condensed_distances(const Matrix& points, Norm norm, Exec exec) {
  return exec == Exec::kSerial ? serial::condensed_distances(points, norm)
                               : parallel::condensed_distances(points, norm);
}

std::vector<double> distance_to_other_clusters(const DistanceMatrix& d, const std::vector<int>& cluster_of,
                                               Exec exec) {
  return exec == Exec::kSerial ? serial::distance_to_other_clusters(d, cluster_of)
                               : parallel::distance_to_other_clusters(d, cluster_of);
}

RatioExtremes ratio_extremes(const std::vector<double>& image, const DistanceMatrix& source, Exec exec) {
  return exec == Exec::kSerial ? serial::ratio_extremes(image, source) : parallel::ratio_extremes(image, source);
}

void accumulate_scaled_gram(Matrix& gram, const Matrix& rows, const Vector& weights, double w, Exec exec) {
  if (exec == Exec::kSerial)
    serial::accumulate_scaled_gram(gram, rows, weights, w);
  else
    parallel::accumulate_scaled_gram(gram, rows, weights, w);
}

}  // namespace lowdim::kernels
