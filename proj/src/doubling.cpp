#include "lowdim/doubling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "lowdim/kernels.hpp"

namespace lowdim {

namespace {

using Bits = std::vector<std::uint64_t>;

Index greedy_cover(const Bits& target, const std::vector<Bits>& reach, const IndexList& candidates) {
  Bits uncovered = target;
  const std::size_t words = target.size();
  auto count = [&](const Bits& a) {
    Index c = 0;
    for (std::size_t w = 0; w < words; ++w) c += std::popcount(a[w] & uncovered[w]);
    return c;
  };
  Index used = 0;
  while (true) {
    Index left = 0;
    for (std::size_t w = 0; w < words; ++w) left += std::popcount(uncovered[w]);
    if (left == 0) return used;
    Index best = -1, best_gain = 0;
    for (Index c : candidates) {
      const Index g = count(reach[c]);
      if (g > best_gain) {
        best_gain = g;
        best = c;
      }
    }
    if (best < 0) return used;  // unreachable: every point covers itself
    for (std::size_t w = 0; w < words; ++w) uncovered[w] &= ~reach[best][w];
    ++used;
  }
}

}  // namespace

DoublingEstimate estimate_doubling(const DistanceMatrix& d, const DoublingOptions& opt) {
  DoublingEstimate est;
  est.method = "greedy-cover";
  const Index n = d.size();
  if (n < 2) return est;

  IndexList centers;
  if (n <= opt.max_centers) {
    for (Index i = 0; i < n; ++i) centers.push_back(i);
  } else {
    for (Index k = 0; k < opt.max_centers; ++k) centers.push_back(k * n / opt.max_centers);
  }

  const double diam = d.max();
  const std::size_t words = static_cast<std::size_t>((n + 63) / 64);
  Index lambda = 1;
  for (double rho = 2.0;; rho *= 2.0) {
    std::vector<Bits> reach(n, Bits(words, 0));
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (d(i, j) <= rho / 2) reach[i][j / 64] |= std::uint64_t{1} << (j % 64);

    // Once the ball is all of S every center gives the same cover problem.
    const bool whole = rho >= diam;
    const IndexList& used_centers = whole ? IndexList{centers.front()} : centers;
    std::vector<Index> counts(used_centers.size(), 1);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::size_t k = 0; k < used_centers.size(); ++k) {
      const Index x = used_centers[k];
      Bits ball(words, 0);
      IndexList candidates;
      for (Index j = 0; j < n; ++j) {
        if (d(x, j) <= rho) ball[j / 64] |= std::uint64_t{1} << (j % 64);
        if (d(x, j) <= 1.5 * rho) candidates.push_back(j);
      }
      counts[k] = greedy_cover(ball, reach, candidates);
    }
    for (Index c : counts) lambda = std::max(lambda, c);
    if (whole) break;
  }
  est.lambda_hat = static_cast<double>(lambda);
  est.dim_hat = std::log2(est.lambda_hat);
  return est;
}

DoublingEstimate estimate_doubling(const PointSet& s, const DoublingOptions& opt) {
  return estimate_doubling(kernels::pairwise_distances(s.points, s.norm), opt);
}

}  // namespace lowdim
