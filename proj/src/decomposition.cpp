#include "lowdim/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <json.hpp>

#include "lowdim/error.hpp"
#include "lowdim/kernels.hpp"
#include "lowdim/rng.hpp"

namespace lowdim {

namespace {

Partition from_labels(const std::vector<int>& raw) {
  Partition part;
  part.cluster_of.assign(raw.size(), -1);
  std::map<int, int> canon;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, fresh] = canon.emplace(raw[i], static_cast<int>(part.clusters.size()));
    if (fresh) part.clusters.emplace_back();
    part.cluster_of[i] = it->second;
    part.clusters[it->second].push_back(static_cast<Index>(i));
  }
  return part;
}

// Neighbors of each point sorted by distance (ties by index).
std::vector<IndexList> sorted_neighbors(const DistanceMatrix& d) {
  const Index n = d.size();
  std::vector<IndexList> nb(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (Index x = 0; x < n; ++x) {
    IndexList& row = nb[x];
    row.resize(n);
    std::iota(row.begin(), row.end(), Index{0});
    std::stable_sort(row.begin(), row.end(), [&](Index a, Index b) { return d(x, a) < d(x, b); });
  }
  return nb;
}

std::vector<int> carve(const DistanceMatrix& d, const std::vector<IndexList>& nb, double delta, Rng& rng) {
  const Index n = d.size();
  IndexList perm(n);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> radius(delta / 4, delta / 2);
  const double rho = radius(rng);
  std::vector<Index> rank(n);
  for (Index k = 0; k < n; ++k) rank[perm[k]] = k;
  std::vector<int> label(n);
  for (Index x = 0; x < n; ++x) {
    Index best = rank[x];
    for (Index y : nb[x]) {
      if (d(x, y) > rho) break;
      best = std::min(best, rank[y]);
    }
    label[x] = static_cast<int>(perm[best]);
  }
  return label;
}

std::vector<IndexList> pad_balls(const DistanceMatrix& d, double pad_radius) {
  const Index n = d.size();
  std::vector<IndexList> balls(n);
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      if (y != x && d(x, y) <= pad_radius) balls[x].push_back(y);
  return balls;
}

std::vector<double> fractions(const std::vector<IndexList>& balls, const PaddedDecomposition& dec, Index n) {
  std::vector<double> count(n, 0.0);
  for (std::size_t t = 0; t < dec.partitions.size(); ++t) {
    const auto& lab = dec.partitions[t].cluster_of;
    for (Index x = 0; x < n; ++x) {
      bool ok = true;
      for (Index y : balls[x]) ok = ok && lab[y] == lab[x];
      if (ok) count[x] += static_cast<double>(dec.multiplicity[t]);
    }
  }
  for (double& c : count) c /= static_cast<double>(dec.m);
  return count;
}

}  // namespace

Index decomposition_sample_count(Index n, const DecompositionParams& p) {
  const double e = p.eps_pad;
  const double chern = std::ceil(p.c_m / (e * e) * std::log(2.0 * static_cast<double>(std::max<Index>(n, 1))));
  const double dim = std::max(0.0, p.dim_hat);
  const double supp = std::ceil(p.c_0 / e * dim * std::max(1.0, std::log(std::max(dim, 1e-300))));
  return std::max<Index>(1, static_cast<Index>(std::max(chern, supp)));
}

PaddedDecomposition build_decomposition(const DistanceMatrix& d, const DecompositionParams& p, std::uint64_t seed) {
  if (!(p.delta > 0.0) || !(p.pad_radius > 0.0)) throw Error(ErrorCode::kBadParams, "delta and pad_radius must be positive");
  if (p.pad_radius > p.delta / 4 * (1 + 1e-12)) throw Error(ErrorCode::kBadParams, "pad_radius must be at most delta/4");
  if (!(p.eps_pad > 0.0 && p.eps_pad < 0.25)) throw Error(ErrorCode::kBadParams, "eps_pad must be in (0, 1/4)");
  const Index n = d.size();
  if (n < 1) throw Error(ErrorCode::kEmptyInput, "empty net");

  PaddedDecomposition dec;
  dec.delta = p.delta;
  dec.pad_radius = p.pad_radius;
  dec.eps_pad = p.eps_pad;
  const auto balls = pad_balls(d, p.pad_radius);
  Index m = decomposition_sample_count(n, p);

  // Every radius in [delta/4, delta/2] gives the same partition when it is
  // below the closest pair (all singletons) or covers the whole set.
  const double dmin = n > 1 ? d.min_offdiagonal() : kInf;
  const double dmax = d.max();
  if (p.delta / 2 < dmin || p.delta / 4 >= dmax) {
    std::vector<int> lab(n);
    if (p.delta / 2 < dmin) std::iota(lab.begin(), lab.end(), 0);
    dec.m = m;
    dec.attempts = 1;
    dec.partitions = {from_labels(lab)};
    dec.multiplicity = {m};
    dec.padded_fraction = fractions(balls, dec, n);
  } else {
    const auto nb = sorted_neighbors(d);
    for (int attempt = 0; attempt <= p.max_retries; ++attempt, m *= 2) {
      std::vector<std::vector<int>> labels(m);
#pragma omp parallel for schedule(dynamic, 16)
      for (Index t = 0; t < m; ++t) {
        Rng rng(derive_seed(seed, {kTagDecomposition, static_cast<std::uint64_t>(attempt), static_cast<std::uint64_t>(t)}));
        labels[t] = carve(d, nb, p.delta, rng);
      }
      dec.partitions.clear();
      dec.multiplicity.clear();
      std::map<std::vector<int>, std::size_t> seen;
      for (Index t = 0; t < m; ++t) {
        Partition part = from_labels(labels[t]);
        auto [it, fresh] = seen.emplace(part.cluster_of, dec.partitions.size());
        if (fresh) {
          dec.partitions.push_back(std::move(part));
          dec.multiplicity.push_back(0);
        }
        ++dec.multiplicity[it->second];
      }
      dec.m = m;
      dec.attempts = attempt + 1;
      dec.padded_fraction = fractions(balls, dec, n);
      const double worst = *std::min_element(dec.padded_fraction.begin(), dec.padded_fraction.end());
      if (worst >= 1.0 - p.eps_pad) break;
      if (attempt == p.max_retries)
        throw Error(ErrorCode::kPaddingUnachievable,
                    "min padded fraction " + std::to_string(worst) + " < " + std::to_string(1.0 - p.eps_pad) +
                        " after " + std::to_string(attempt + 1) + " attempts (delta/pad_radius = " +
                        std::to_string(p.delta / p.pad_radius) + ")");
    }
  }
  return dec;
}

PaddedDecomposition build_decomposition(const PointSet& s, const DecompositionParams& p, std::uint64_t seed) {
  return build_decomposition(kernels::pairwise_distances(s.points, s.norm), p, seed);
}

std::vector<char> padded_points(const DistanceMatrix& d, const Partition& part, double pad_radius) {
  const Index n = d.size();
  std::vector<char> out(n, 1);
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n && out[x]; ++y)
      if (d(x, y) <= pad_radius && part.cluster_of[y] != part.cluster_of[x]) out[x] = 0;
  return out;
}

PaddingAudit padding_audit(const DistanceMatrix& d, const PaddedDecomposition& dec) {
  PaddingAudit audit;
  const Index n = d.size();
  std::vector<double> count(n, 0.0);
  for (std::size_t t = 0; t < dec.partitions.size(); ++t) {
    const auto pad = padded_points(d, dec.partitions[t], dec.pad_radius);
    for (Index x = 0; x < n; ++x)
      if (pad[x]) count[x] += static_cast<double>(dec.multiplicity[t]);
  }
  for (double& c : count) c /= static_cast<double>(dec.m);
  audit.fraction = count;
  if (n > 0) {
    audit.min = *std::min_element(count.begin(), count.end());
    audit.mean = std::accumulate(count.begin(), count.end(), 0.0) / static_cast<double>(n);
  }
  audit.matches_stored = count == dec.padded_fraction;
  return audit;
}

Index partition_violations(const DistanceMatrix& d, const Partition& part, double delta) {
  const Index n = d.size();
  Index bad = 0;
  std::vector<int> seen(n, 0);
  for (std::size_t c = 0; c < part.clusters.size(); ++c) {
    if (part.clusters[c].empty()) ++bad;
    for (Index x : part.clusters[c]) {
      ++seen[x];
      if (part.cluster_of[x] != static_cast<int>(c)) ++bad;
      for (Index y : part.clusters[c])
        if (d(x, y) > delta) ++bad;
    }
  }
  for (Index x = 0; x < n; ++x)
    if (seen[x] != 1) ++bad;
  return bad;
}

std::string decomposition_json(const PaddedDecomposition& dec) {
  nlohmann::ordered_json j;
  j["delta"] = dec.delta;
  j["pad_radius"] = dec.pad_radius;
  j["eps_pad"] = dec.eps_pad;
  j["m"] = dec.m;
  j["attempts"] = dec.attempts;
  auto parts = nlohmann::ordered_json::array();
  for (std::size_t t = 0; t < dec.partitions.size(); ++t)
    parts.push_back({{"multiplicity", dec.multiplicity[t]}, {"cluster_of", dec.partitions[t].cluster_of}});
  j["partitions"] = std::move(parts);
  j["padded_fraction"] = dec.padded_fraction;
  return j.dump();
}

}  // namespace lowdim
