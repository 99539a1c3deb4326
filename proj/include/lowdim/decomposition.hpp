#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lowdim/point_set.hpp"

namespace lowdim {

// A partition of the decomposed point set. Cluster ids are canonical: they
// are numbered in order of each cluster's lowest member, so equal partitions
// compare equal.
struct Partition {
  std::vector<int> cluster_of;
  std::vector<IndexList> clusters;
};

struct DecompositionParams {
  double delta = 0.0;       // cluster diameter bound
  double pad_radius = 0.0;  // ball radius that must stay inside its cluster
  double eps_pad = 0.1;     // tolerated padding failure rate, in (0, 1/4)
  double dim_hat = 0.0;     // doubling estimate of the decomposed set
  double c_m = 4.0;
  double c_0 = 2.0;
  int max_retries = 4;
};

// Multiset of sampled partitions, stored as distinct partitions with
// multiplicities summing to m.
struct PaddedDecomposition {
  double delta = 0.0;
  double pad_radius = 0.0;
  double eps_pad = 0.0;
  Index m = 0;
  int attempts = 0;
  std::vector<Partition> partitions;
  std::vector<Index> multiplicity;
  std::vector<double> padded_fraction;
};

// Sample count before any retry doubling.
Index decomposition_sample_count(Index n, const DecompositionParams& p);

// Shifted ball carving: a uniform permutation of centers and one radius
// uniform in [delta/4, delta/2] per partition; each point joins the first
// center (in permutation order) within that radius. Resamples with doubled m
// and a fresh stream while some point is padded in fewer than 1 - eps_pad of
// the partitions; throws PaddingUnachievable after max_retries.
PaddedDecomposition build_decomposition(const DistanceMatrix& d, const DecompositionParams& p, std::uint64_t seed);
PaddedDecomposition build_decomposition(const PointSet& s, const DecompositionParams& p, std::uint64_t seed);

// True when B(x, pad_radius) lies inside P(x).
std::vector<char> padded_points(const DistanceMatrix& d, const Partition& part, double pad_radius);

struct PaddingAudit {
  std::vector<double> fraction;
  double min = 1.0;
  double mean = 1.0;
  bool matches_stored = true;
};

// Recomputes the padded fractions from scratch by exhaustive ball checks.
PaddingAudit padding_audit(const DistanceMatrix& d, const PaddedDecomposition& dec);

// Count of cover, disjointness and diameter violations in one partition.
Index partition_violations(const DistanceMatrix& d, const Partition& part, double delta);

// JSON dump: delta, pad_radius, eps_pad, m, partitions (cluster_of and
// multiplicity), padded_fraction.
std::string decomposition_json(const PaddedDecomposition& dec);

}  // namespace lowdim
