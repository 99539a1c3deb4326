#pragma once

#include "lowdim/point_set.hpp"

namespace lowdim {

// Packing/covering subset of a point set.
struct Net {
  double radius = 0.0;
  IndexList members;     // indices into the parent set, ascending
  IndexList assignment;  // parent point -> covering member (parent index)

  Index size() const { return static_cast<Index>(members.size()); }
};

// Scans points in index order and adds every point not yet covered
// (distance < radius to an existing member). Each point is assigned to its
// nearest member, ties to the earlier member.
Net greedy_net(const PointSet& s, double radius);
Net greedy_net(const DistanceMatrix& d, double radius);

// Exhaustive packing and covering check; returns the number of violations.
Index net_violations(const DistanceMatrix& d, const Net& net);

}  // namespace lowdim
