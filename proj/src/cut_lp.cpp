// Cut decomposition of small l1 metrics by a dense-tableau simplex.
//
// Rows are point pairs, columns are the 2^(n-1) - 1 cuts (subsets avoiding
// the last point) followed by one surplus/deficit pair per row:
//   sum_A gamma_A |1_A(x) - 1_A(y)| + s+_xy - s-_xy = dist(x, y),
// minimizing sum(s+ + s-). The s+ columns form the starting basis.

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "lowdim/error.hpp"
#include "lowdim/kernels.hpp"
#include "lowdim/transforms.hpp"

namespace lowdim {

namespace {

bool separates(std::uint64_t set, Index x, Index y) { return ((set >> x) & 1U) != ((set >> y) & 1U); }

struct Tableau {
  Index rows = 0;
  Index cuts = 0;
  Index cols = 0;
  Eigen::MatrixXd t;   // rows x cols, current B^-1 A
  Eigen::VectorXd rhs;
  Eigen::VectorXd reduced;  // reduced costs
  std::vector<Index> basis;

  double cost(Index j) const { return j < cuts ? 0.0 : 1.0; }

  void pivot(Index row, Index col) {
    const double p = t(row, col);
    t.row(row) /= p;
    rhs[row] /= p;
    for (Index i = 0; i < rows; ++i) {
      if (i == row) continue;
      const double f = t(i, col);
      if (f == 0.0) continue;
      t.row(i) -= f * t.row(row);
      rhs[i] -= f * rhs[row];
      if (rhs[i] < 0.0 && rhs[i] > -1e-13) rhs[i] = 0.0;
    }
    const double f = reduced[col];
    reduced -= f * t.row(row).transpose();
    basis[row] = col;
  }
};

}  // namespace

DistanceMatrix cut_metric(const std::vector<Cut>& cuts, Index n) {
  DistanceMatrix d(n);
  for (Index x = 0; x < n; ++x)
    for (Index y = x + 1; y < n; ++y) {
      double s = 0.0;
      for (const Cut& c : cuts)
        if (separates(c.set, x, y)) s += c.weight;
      d.at(x, y) = s;
      d.at(y, x) = s;
    }
  return d;
}

CutDecomposition cut_decomposition_l1(const DistanceMatrix& dist, double tol, Index cap) {
  const Index n = dist.size();
  if (n > cap || n > 62)
    throw Error(ErrorCode::kClusterTooLarge, "cluster of " + std::to_string(n) + " points exceeds cap " +
                                                 std::to_string(cap));
  CutDecomposition out;
  if (n < 2) return out;

  Tableau tab;
  tab.rows = static_cast<Index>(kernels::pair_count(n));
  tab.cuts = (Index{1} << (n - 1)) - 1;
  tab.cols = tab.cuts + 2 * tab.rows;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(tab.rows, tab.cols);
  Eigen::VectorXd b(tab.rows);
  std::vector<std::pair<Index, Index>> pairs;
  for (Index x = 0; x < n; ++x)
    for (Index y = x + 1; y < n; ++y) {
      const Index row = static_cast<Index>(pairs.size());
      pairs.emplace_back(x, y);
      b[row] = dist(x, y);
      for (Index c = 0; c < tab.cuts; ++c)
        if (separates(static_cast<std::uint64_t>(c + 1), x, y)) a(row, c) = 1.0;
      a(row, tab.cuts + row) = 1.0;
      a(row, tab.cuts + tab.rows + row) = -1.0;
    }
  tab.t = a;
  tab.rhs = b;
  tab.basis.resize(tab.rows);
  for (Index i = 0; i < tab.rows; ++i) tab.basis[i] = tab.cuts + i;
  tab.reduced.resize(tab.cols);
  for (Index j = 0; j < tab.cols; ++j) tab.reduced[j] = tab.cost(j) - a.col(j).sum();

  const double scale = std::max(b.maxCoeff(), 1e-300);
  const double eps = 1e-11;
  Index stall = 0;
  const Index max_pivots = 200 * (tab.rows + tab.cols);
  double last_obj = kInf;
  for (;;) {
    if (out.pivots > max_pivots) throw Error(ErrorCode::kInfeasible, "simplex pivot budget exhausted");
    const bool bland = stall > 50;
    Index enter = -1;
    double best = -eps;
    for (Index j = 0; j < tab.cols; ++j) {
      if (tab.reduced[j] < best) {
        enter = j;
        if (bland) break;
        best = tab.reduced[j];
      }
    }
    if (enter < 0) break;
    Index leave = -1;
    double ratio = kInf;
    for (Index i = 0; i < tab.rows; ++i) {
      const double v = tab.t(i, enter);
      if (v <= 1e-12) continue;
      const double q = tab.rhs[i] / v;
      if (q < ratio - 1e-15 * scale || (q <= ratio + 1e-15 * scale && leave >= 0 && tab.basis[i] < tab.basis[leave])) {
        ratio = q;
        leave = i;
      }
    }
    if (leave < 0) throw Error(ErrorCode::kInfeasible, "simplex unbounded");
    tab.pivot(leave, enter);
    ++out.pivots;
    double obj = 0.0;
    for (Index i = 0; i < tab.rows; ++i) obj += tab.cost(tab.basis[i]) * tab.rhs[i];
    stall = obj < last_obj - 1e-14 * scale ? 0 : stall + 1;
    last_obj = std::min(last_obj, obj);
  }

  // Recover the basic solution from the original columns for accuracy.
  Eigen::MatrixXd basis_cols(tab.rows, tab.rows);
  for (Index i = 0; i < tab.rows; ++i) basis_cols.col(i) = a.col(tab.basis[i]);
  const Eigen::VectorXd xb = basis_cols.fullPivLu().solve(b);
  std::map<std::uint64_t, double> weight;
  for (Index i = 0; i < tab.rows; ++i)
    if (tab.basis[i] < tab.cuts && xb[i] > 0.0) weight[static_cast<std::uint64_t>(tab.basis[i] + 1)] += xb[i];
  for (const auto& [set, w] : weight) out.cuts.push_back({set, w});

  const DistanceMatrix rec = cut_metric(out.cuts, n);
  for (Index x = 0; x < n; ++x)
    for (Index y = x + 1; y < n; ++y) out.residual = std::max(out.residual, std::abs(rec(x, y) - dist(x, y)));
  if (out.residual > tol * scale)
    throw Error(ErrorCode::kInfeasible,
                "cut reconstruction residual " + std::to_string(out.residual) + " exceeds tol * max distance");
  return out;
}

ClusterEmbedding merge_cuts(const std::vector<Cut>& cuts, const std::vector<char>& is_net) {
  const Index n = static_cast<Index>(is_net.size());
  std::uint64_t net_mask = 0;
  Index origin = -1;
  for (Index k = 0; k < n; ++k)
    if (is_net[k]) {
      net_mask |= std::uint64_t{1} << k;
      if (origin < 0) origin = k;
    }
  if (origin < 0) origin = 0;

  std::map<std::uint64_t, std::vector<const Cut*>> by_trace;
  for (const Cut& c : cuts) by_trace[c.set & net_mask].push_back(&c);

  ClusterEmbedding out;
  out.members.resize(n);
  for (Index i = 0; i < n; ++i) out.members[i] = i;
  out.origin_member = origin;
  out.coords = Matrix::Zero(n, std::max<Index>(1, static_cast<Index>(by_trace.size())));
  Index col = 0;
  for (const auto& [trace, group] : by_trace) {
    for (Index x = 0; x < n; ++x)
      for (const Cut* c : group)
        if ((c->set >> x) & 1U) out.coords(x, col) += c->weight;
    ++col;
  }
  const Eigen::RowVectorXd o = out.coords.row(origin);
  out.coords.rowwise() -= o;

  const DistanceMatrix full = cut_metric(cuts, n);
  for (Index x = 0; x < n; ++x)
    for (Index y = x + 1; y < n; ++y) {
      if (!is_net[x] || !is_net[y] || full(x, y) == 0.0) continue;
      const double got = (out.coords.row(x) - out.coords.row(y)).lpNorm<1>();
      out.achieved_error = std::max(out.achieved_error, std::abs(got - full(x, y)) / full(x, y));
    }
  return out;
}

}  // namespace lowdim
