#include "lowdim/net.hpp"

#include "lowdim/error.hpp"
#include "lowdim/kernels.hpp"

namespace lowdim {

Net greedy_net(const DistanceMatrix& d, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::kBadParams, "net radius must be positive");
  const Index n = d.size();
  Net net;
  net.radius = radius;
  std::vector<char> covered(n, 0);
  for (Index i = 0; i < n; ++i) {
    if (covered[i]) continue;
    net.members.push_back(i);
    for (Index j = i; j < n; ++j)
      if (d(i, j) < radius) covered[j] = 1;
  }
  net.assignment.assign(n, -1);
  for (Index i = 0; i < n; ++i) {
    double best = kInf;
    for (Index m : net.members) {
      if (d(i, m) < best) {
        best = d(i, m);
        net.assignment[i] = m;
      }
    }
  }
  return net;
}

Net greedy_net(const PointSet& s, double radius) {
  validate(s);
  return greedy_net(kernels::pairwise_distances(s.points, s.norm), radius);
}

Index net_violations(const DistanceMatrix& d, const Net& net) {
  Index bad = 0;
  for (std::size_t a = 0; a < net.members.size(); ++a)
    for (std::size_t b = a + 1; b < net.members.size(); ++b)
      if (d(net.members[a], net.members[b]) < net.radius) ++bad;
  for (Index i = 0; i < d.size(); ++i)
    if (net.assignment[i] < 0 || !(d(i, net.assignment[i]) < net.radius)) ++bad;
  return bad;
}

}  // namespace lowdim
