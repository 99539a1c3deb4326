#include "lowdim/single_scale.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "lowdim/doubling.hpp"
#include "lowdim/error.hpp"
#include "lowdim/kernels.hpp"
#include "lowdim/lipschitz_extension.hpp"
#include "lowdim/random_projection.hpp"
#include "lowdim/rng.hpp"

namespace lowdim {

namespace {

double tau(Norm norm, double r, double t) { return transform_value(transform_for(norm, r), t); }

std::uint64_t members_hash(const IndexList& members) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (Index i : members) h = splitmix64(h ^ static_cast<std::uint64_t>(i));
  return h;
}

double window_hi(const SingleScaleParams& p) {
  return p.norm == Norm::kLinf ? p.r / std::sqrt(p.delta) : p.r / p.delta;
}

std::string scale_context(const SingleScaleParams& p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "scale r=%.17g", p.r);
  return buf;
}

ClusterMap build_cluster_map(const DistanceMatrix& dd, const IndexList& members, const std::vector<char>& domain_is_net,
                             const SingleScaleParams& p) {
  ClusterMap cm;
  cm.members = members;
  const Index k = static_cast<Index>(members.size());
  const DistanceMatrix dc = dd.restrict_to(members);

  if (p.norm == Norm::kL2) {
    ClusterEmbedding ge = gaussian_embed(dc, p.r, p.gram_tol, p.gram, 0);
    cm.origin = ge.origin_member;
    cm.achieved_error = ge.achieved_error;
    if (k > 1) {
      ProjectionOptions opt;
      opt.c_jl = p.c_jl;
      opt.origin = ge.origin_member;
      ProjectionResult pr =
          jl_project(ge.coords, p.eps, p.jl_tol, derive_seed(p.seed, {kTagCluster, members_hash(members)}), opt);
      cm.coords = std::move(pr.coords);
      cm.jl_tries = pr.tries;
      cm.jl_identity = pr.identity;
    } else {
      cm.coords = std::move(ge.coords);
    }
    return cm;
  }

  std::vector<char> is_net(k);
  for (Index a = 0; a < k; ++a) is_net[a] = domain_is_net[members[a]];
  if (std::none_of(is_net.begin(), is_net.end(), [](char c) { return c != 0; })) {
    cm.empty_net = true;
    cm.coords = Matrix::Zero(k, 1);
    return cm;
  }

  if (p.norm == Norm::kL1) {
    if (k == 1) {
      cm.coords = Matrix::Zero(1, 1);
      return cm;
    }
    Matrix ld(k, k);
    for (Index a = 0; a < k; ++a)
      for (Index b = 0; b < k; ++b) ld(a, b) = a == b ? 0.0 : tau(Norm::kL1, p.r, dc(a, b));
    const CutDecomposition cuts = cut_decomposition_l1(DistanceMatrix(std::move(ld)), 1e-9, p.cut_cap);
    ClusterEmbedding me = merge_cuts(cuts.cuts, is_net);
    cm.coords = std::move(me.coords);
    cm.origin = me.origin_member;
    cm.achieved_error = cuts.residual;
    return cm;
  }

  ClusterEmbedding fe = frechet_embed_linf(dc, is_net, p.r);
  cm.coords = std::move(fe.coords);
  cm.origin = fe.origin_member;
  return cm;
}

// Writes coef * phi_t over the domain into columns [col0, col0 + width).
void fill_block(Matrix& out, Index col0, const Partition& part, const std::vector<int>& maps_of,
                const std::vector<ClusterMap>& maps, const std::vector<double>& smooth, double coef) {
  for (std::size_t c = 0; c < part.clusters.size(); ++c) {
    const ClusterMap& cm = maps[maps_of[c]];
    const Index w = cm.coords.cols();
    for (std::size_t a = 0; a < cm.members.size(); ++a) {
      const Index x = cm.members[a];
      out.row(x).segment(col0, w) = (coef * smooth[x]) * cm.coords.row(static_cast<Index>(a));
    }
  }
}

Index block_width(const std::vector<int>& maps_of, const std::vector<ClusterMap>& maps) {
  Index w = 0;
  for (int id : maps_of) w = std::max(w, maps[id].coords.cols());
  return w;
}

struct LemmaSlack {
  double rel;
  double abs;
};

LemmaSlack lemma_slack(Norm norm, double r) {
  switch (norm) {
    case Norm::kL2: return {1e-7, 0.0};
    case Norm::kL1: return {1e-9, 1e-9 * r};
    case Norm::kLinf: return {1e-12, 1e-12 * r};
  }
  return {0.0, 0.0};
}

LemmaDiagnostics run_diagnostics(const SingleScaleEmbedding& e, const DistanceMatrix& dd,
                                 const std::vector<std::vector<double>>& h) {
  const SingleScaleParams& p = e.params;
  const LemmaSlack slack = lemma_slack(p.norm, p.r);
  LemmaDiagnostics lg;
  lg.enabled = true;
  lg.clusters_checked = static_cast<Index>(e.cluster_maps.size());
  lg.partitions_checked = static_cast<Index>(e.decomposition.partitions.size());

  Index v1 = 0, v2 = 0, empty = 0;
  double m1 = 0.0, m2 = 0.0;
  const Index nmaps = static_cast<Index>(e.cluster_maps.size());
#pragma omp parallel for schedule(dynamic) reduction(+ : v1, v2, empty) reduction(max : m1, m2)
  for (Index u = 0; u < nmaps; ++u) {
    const ClusterMap& cm = e.cluster_maps[u];
    if (cm.empty_net) ++empty;
    const Index k = static_cast<Index>(cm.members.size());
    for (Index a = 0; a < k; ++a) {
      const double len = norm_length(cm.coords.row(a), p.norm);
      m1 = std::max(m1, len / p.r);
      if (len > p.r * (1.0 + 1e-9)) ++v1;
      for (Index b = a + 1; b < k; ++b) {
        const double d = dd(cm.members[a], cm.members[b]);
        const double t = tau(p.norm, p.r, d);
        const double img = norm_distance(cm.coords.row(a), cm.coords.row(b), p.norm);
        m2 = std::max(m2, img / t);
        if (img > t * (1.0 + slack.rel) + slack.abs) ++v2;
        if (t > d * (1.0 + 1e-12)) ++v2;
      }
    }
  }
  lg.lemma_i_violations = v1;
  lg.lemma_ii_violations = v2;
  lg.lemma_i_max = m1;
  lg.lemma_ii_max = m2;
  lg.empty_net_clusters = empty;

  Index v3 = 0, vp = 0;
  double mp = 0.0;
  const double product_bound = 1.0 + p.delta + 1e-9;
  const Index nparts = static_cast<Index>(e.decomposition.partitions.size());
  const Index nd = dd.size();
#pragma omp parallel for schedule(dynamic) reduction(+ : v3, vp) reduction(max : mp)
  for (Index t = 0; t < nparts; ++t) {
    const Partition& part = e.decomposition.partitions[t];
    for (Index x = 0; x < nd; ++x)
      for (Index y = 0; y < nd; ++y)
        if (part.cluster_of[x] != part.cluster_of[y] && h[t][x] > dd(x, y)) ++v3;
    const std::vector<double>& s = e.smoothing[t];
    for (std::size_t c = 0; c < part.clusters.size(); ++c) {
      const ClusterMap& cm = e.cluster_maps[e.partition_maps[t][c]];
      const Index k = static_cast<Index>(cm.members.size());
      for (Index a = 0; a < k; ++a) {
        const Index x = cm.members[a];
        for (Index b = a + 1; b < k; ++b) {
          const Index y = cm.members[b];
          const double img = norm_distance(s[x] * cm.coords.row(a), s[y] * cm.coords.row(b), p.norm);
          const double ratio = img / dd(x, y);
          mp = std::max(mp, ratio);
          if (ratio > product_bound) ++vp;
        }
      }
    }
  }
  lg.lemma_iii_violations = v3;
  lg.product_rule_violations = vp;
  lg.product_rule_max = mp;
  return lg;
}

Matrix glue_l2(const SingleScaleEmbedding& e, Index nd) {
  const PaddedDecomposition& dec = e.decomposition;
  const std::size_t T = dec.partitions.size();
  std::vector<Index> widths(T);
  Index total = 0;
  for (std::size_t t = 0; t < T; ++t) total += widths[t] = block_width(e.partition_maps[t], e.cluster_maps);
  const double m = static_cast<double>(dec.m);

  if (total <= nd) {
    Matrix out = Matrix::Zero(nd, total);
    Index col = 0;
    for (std::size_t t = 0; t < T; ++t) {
      fill_block(out, col, dec.partitions[t], e.partition_maps[t], e.cluster_maps, e.smoothing[t],
                 std::sqrt(static_cast<double>(dec.multiplicity[t]) / m));
      col += widths[t];
    }
    return out;
  }

  // Gram of the direct sum, accumulated in column batches, then factored.
  Matrix gram = Matrix::Zero(nd, nd);
  const Index budget = std::max<Index>(4 * nd, *std::max_element(widths.begin(), widths.end()));
  Matrix buf = Matrix::Zero(nd, budget);
  const Vector ones = Vector::Ones(nd);
  Index used = 0;
  auto flush = [&]() {
    if (used == 0) return;
    kernels::accumulate_scaled_gram(gram, used == budget ? buf : Matrix(buf.leftCols(used)), ones, 1.0);
    buf.setZero();
    used = 0;
  };
  for (std::size_t t = 0; t < T; ++t) {
    if (used + widths[t] > budget) flush();
    fill_block(buf, used, dec.partitions[t], e.partition_maps[t], e.cluster_maps, e.smoothing[t],
               std::sqrt(static_cast<double>(dec.multiplicity[t]) / m));
    used += widths[t];
  }
  flush();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(gram.selfadjointView<Eigen::Upper>()));
  const Vector& lambda = es.eigenvalues();
  Index keep = 0;
  while (keep < nd && lambda(nd - 1 - keep) > 0.0) ++keep;
  Matrix out(nd, std::max<Index>(keep, 1));
  out.setZero();
  for (Index j = 0; j < keep; ++j) out.col(j) = es.eigenvectors().col(nd - 1 - j) * std::sqrt(lambda(nd - 1 - j));
  return out;
}

Matrix glue_concat(const SingleScaleEmbedding& e, Index nd, bool weighted) {
  const PaddedDecomposition& dec = e.decomposition;
  const std::size_t T = dec.partitions.size();
  std::vector<Index> widths(T);
  Index total = 0;
  for (std::size_t t = 0; t < T; ++t) total += widths[t] = block_width(e.partition_maps[t], e.cluster_maps);
  Matrix out = Matrix::Zero(nd, total);
  Index col = 0;
  for (std::size_t t = 0; t < T; ++t) {
    const double coef =
        weighted ? static_cast<double>(dec.multiplicity[t]) / static_cast<double>(dec.m) : 1.0;
    fill_block(out, col, dec.partitions[t], e.partition_maps[t], e.cluster_maps, e.smoothing[t], coef);
    col += widths[t];
  }
  return out;
}

}  // namespace

void validate(const SingleScaleParams& p) {
  auto bad = [](const std::string& why) { throw Error(ErrorCode::kBadParams, why); };
  if (!(p.r > 0.0) || !std::isfinite(p.r)) bad("r must be positive and finite");
  if (!(p.delta > 0.0 && p.delta < 0.25)) bad("delta must lie in (0, 1/4)");
  if (!(p.eps > 0.0 && p.eps < 0.25)) bad("eps must lie in (0, 1/4)");
  if (!(p.eps_pad >= 0.0 && p.eps_pad < 0.25)) bad("eps_pad must lie in [0, 1/4)");
  if (!(p.c_pad > 0.0)) bad("c_pad must be positive");
  if (p.max_enlarge < 0) bad("max_enlarge must be nonnegative");
  if (!(p.rescale_c >= 0.0)) bad("rescale_c must be nonnegative");
  if (!(p.ext_tol > 0.0)) bad("ext_tol must be positive");
  if (p.norm == Norm::kLinf && p.delta > p.eps * p.eps / 4.0 * (1.0 + 1e-12))
    bad("l_inf needs delta <= eps^2/4");
}

NominalDimension nominal_dimension(double dim_hat, double eps, double delta, Norm norm, double c_pad, double c_0,
                                   double c_jl) {
  const double D = std::max(1.0, dim_hat);
  NominalDimension out;
  out.m = static_cast<Index>(std::ceil(c_0 / eps * D * std::max(1.0, std::log(D)) - 1e-9));
  const double ln_b = D * std::log(3.0 * c_pad * D / (eps * delta * delta));
  double log2_kp = 0.0;
  switch (norm) {
    case Norm::kL2:
      out.k_prime = std::ceil(c_jl / (eps * eps) * ln_b - 1e-9);
      log2_kp = std::log2(out.k_prime);
      break;
    case Norm::kLinf:
      out.k_prime = std::ceil(std::exp(ln_b) - 1e-9);
      log2_kp = ln_b / std::log(2.0);
      break;
    case Norm::kL1: {
      const double b = std::ceil(std::exp(ln_b) - 1e-9);
      out.k_prime = std::exp2(b);
      log2_kp = b;
      break;
    }
  }
  out.k = static_cast<double>(out.m) * out.k_prime;
  out.log2_k = std::log2(static_cast<double>(out.m)) + log2_kp;
  return out;
}

SingleScaleEmbedding build_single_scale(const PointSet& s, const SingleScaleParams& params) {
  validate(s);
  return build_single_scale(s, kernels::pairwise_distances(s.points, s.norm), params);
}

SingleScaleEmbedding build_single_scale(const PointSet& s, const DistanceMatrix& d, const SingleScaleParams& params) {
  validate(params);
  validate(s);
  if (s.norm != params.norm) throw Error(ErrorCode::kBadParams, "point set norm differs from params.norm");
  if (d.size() != s.size()) throw Error(ErrorCode::kBadParams, "distance matrix size differs from the point set");

  SingleScaleEmbedding e;
  e.params = params;
  const SingleScaleParams& p = e.params;
  SingleScaleDerived& dv = e.derived;
  const Index n = s.size();
  const bool l2 = p.norm == Norm::kL2;

  dv.eps_pad = p.eps_pad > 0.0 ? p.eps_pad : p.eps;
  dv.net_radius = p.eps * p.delta * p.r;
  dv.pad_radius = 3.0 * p.r / p.delta;
  dv.dim_hat = p.dim_override >= 0.0 ? p.dim_override : estimate_doubling(d).dim_hat;

  // Step 1: net.
  e.net = greedy_net(d, dv.net_radius);
  std::vector<char> is_net(n, 0);
  for (Index x : e.net.members) is_net[x] = 1;
  if (l2) {
    e.domain = e.net.members;
  } else {
    e.domain.resize(n);
    std::iota(e.domain.begin(), e.domain.end(), Index{0});
  }
  const DistanceMatrix dd = l2 ? d.restrict_to(e.domain) : d;
  const Index nd = dd.size();
  const std::vector<char> domain_is_net = l2 ? std::vector<char>(nd, 1) : is_net;

  // Step 2: padded decomposition, enlarging Delta when padding fails.
  for (int attempt = 0;; ++attempt) {
    const double c = p.c_pad * std::ldexp(1.0, attempt);
    DecompositionParams dp;
    dp.delta = 3.0 * c * std::max(1.0, dv.dim_hat) * p.r / p.delta;
    dp.pad_radius = dv.pad_radius;
    dp.eps_pad = dv.eps_pad;
    dp.dim_hat = dv.dim_hat;
    try {
      e.decomposition = build_decomposition(dd, dp, derive_seed(p.seed, {kTagDecomposition, 0x100u + attempt}));
      dv.c_pad_used = c;
      dv.diameter_bound = dp.delta;
      break;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kPaddingUnachievable || attempt >= p.max_enlarge)
        throw Error(err.code(), scale_context(p) + ": " + err.message());
    }
  }
  const PaddedDecomposition& dec = e.decomposition;
  dv.m = dec.m;
  const std::size_t T = dec.partitions.size();

  // Steps 3-4: one map per distinct cluster.
  std::map<IndexList, int> ids;
  std::vector<const IndexList*> uniq;
  std::vector<std::pair<std::size_t, std::size_t>> first_site;
  e.partition_maps.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    const Partition& part = dec.partitions[t];
    e.partition_maps[t].resize(part.clusters.size());
    for (std::size_t c = 0; c < part.clusters.size(); ++c) {
      auto [it, inserted] = ids.emplace(part.clusters[c], static_cast<int>(uniq.size()));
      if (inserted) {
        uniq.push_back(&it->first);
        first_site.emplace_back(t, c);
      }
      e.partition_maps[t][c] = it->second;
    }
  }
  const Index nu = static_cast<Index>(uniq.size());
  e.cluster_maps.resize(nu);
  std::vector<std::exception_ptr> errors(nu);
#pragma omp parallel for schedule(dynamic)
  for (Index u = 0; u < nu; ++u) {
    try {
      e.cluster_maps[u] = build_cluster_map(dd, *uniq[u], domain_is_net, p);
    } catch (...) {
      errors[u] = std::current_exception();
    }
  }
  for (Index u = 0; u < nu; ++u) {
    if (!errors[u]) continue;
    try {
      std::rethrow_exception(errors[u]);
    } catch (const Error& err) {
      throw Error(err.code(), scale_context(p) + ", partition " + std::to_string(first_site[u].first) + ", cluster " +
                                  std::to_string(first_site[u].second) + ": " + err.message());
    }
  }
  for (const ClusterMap& cm : e.cluster_maps) dv.k_prime_max = std::max(dv.k_prime_max, cm.coords.cols());

  // Step 5: smoothing.
  std::vector<std::vector<double>> h(T);
  e.smoothing.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    h[t] = kernels::distance_to_other_clusters(dd, dec.partitions[t].cluster_of);
    e.smoothing[t].resize(nd);
    for (Index x = 0; x < nd; ++x) e.smoothing[t][x] = std::min(1.0, p.delta * h[t][x] / p.r);
  }

  if (p.diagnostics) e.lemma = run_diagnostics(e, dd, h);

  // Step 6: direct sum.
  Matrix domain_images;
  switch (p.norm) {
    case Norm::kL2:
      dv.gain = 1.0 / std::sqrt(static_cast<double>(dv.m));
      dv.rescale = 1.0 / (1.0 + p.rescale_c * p.eps);
      domain_images = glue_l2(e, nd);
      break;
    case Norm::kL1:
      dv.gain = 1.0 / static_cast<double>(dv.m);
      dv.rescale = 1.0 / (1.0 + p.rescale_c * p.eps);
      domain_images = glue_concat(e, nd, true);
      break;
    case Norm::kLinf:
      dv.gain = 1.0 / (1.0 + 2.0 * std::sqrt(p.delta));
      dv.rescale = 1.0;
      domain_images = glue_concat(e, nd, false) * dv.gain;
      break;
  }
  e.raw_dim = dv.m * dv.k_prime_max;

  // Step 7: extension to the points outside the net (l2).
  if (l2) {
    const Index dim = s.points.cols();
    Matrix anchors(nd, dim);
    for (Index a = 0; a < nd; ++a) anchors.row(a) = s.points.row(e.domain[a]);
    e.net_lipschitz = lipschitz_constant(anchors, domain_images);
    e.images = Matrix::Zero(n, domain_images.cols());
    for (Index a = 0; a < nd; ++a) e.images.row(e.domain[a]) = domain_images.row(a);

    IndexList rest;
    for (Index x = 0; x < n; ++x)
      if (!is_net[x]) rest.push_back(x);
    std::stable_sort(rest.begin(), rest.end(),
                     [&](Index a, Index b) { return d(a, e.net.assignment[a]) < d(b, e.net.assignment[b]); });
    if (!rest.empty()) {
      ExtensionProblem prob;
      prob.anchor_sources = std::move(anchors);
      prob.anchor_images = domain_images;
      prob.lipschitz_bound = e.net_lipschitz;
      prob.tol = p.ext_tol;
      Matrix fresh(static_cast<Index>(rest.size()), dim);
      for (std::size_t k = 0; k < rest.size(); ++k) fresh.row(static_cast<Index>(k)) = s.points.row(rest[k]);
      ExtensionResult ext;
      try {
        ext = kirszbraun_extend(prob, fresh, p.ext_max_iter);
      } catch (const Error& err) {
        throw Error(err.code(), scale_context(p) + ", extension: " + err.message());
      }
      for (std::size_t k = 0; k < rest.size(); ++k) e.images.row(rest[k]) = ext.images.row(static_cast<Index>(k));
      e.extended_points = static_cast<Index>(rest.size());
      e.max_sweeps = ext.sweeps.empty() ? 0 : *std::max_element(ext.sweeps.begin(), ext.sweeps.end());
      e.extension_violation = ext.worst_violation;
    }
  } else {
    e.images = std::move(domain_images);
  }
  e.images *= dv.rescale;
  e.stored_dim = e.images.cols();

  if (!p.keep_components) {
    e.cluster_maps.clear();
    e.cluster_maps.shrink_to_fit();
    e.partition_maps.clear();
    e.partition_maps.shrink_to_fit();
    e.smoothing.clear();
    e.smoothing.shrink_to_fit();
  }
  return e;
}

Vector evaluate(const SingleScaleEmbedding& e, Index point) {
  if (point < 0 || point >= e.images.rows())
    throw Error(ErrorCode::kIndexOutOfRange, "point " + std::to_string(point) + " of " + std::to_string(e.images.rows()));
  return e.images.row(point).transpose();
}

Vector partition_image(const SingleScaleEmbedding& e, std::size_t t, Index x) {
  if (e.cluster_maps.empty()) throw Error(ErrorCode::kBadParams, "embedding was built without components");
  if (t >= e.decomposition.partitions.size()) throw Error(ErrorCode::kIndexOutOfRange, "partition index");
  const Partition& part = e.decomposition.partitions[t];
  if (x < 0 || x >= static_cast<Index>(part.cluster_of.size()))
    throw Error(ErrorCode::kIndexOutOfRange, "domain index");
  const int c = part.cluster_of[x];
  const ClusterMap& cm = e.cluster_maps[e.partition_maps[t][c]];
  const auto it = std::lower_bound(cm.members.begin(), cm.members.end(), x);
  Vector out = Vector::Zero(block_width(e.partition_maps[t], e.cluster_maps));
  out.head(cm.coords.cols()) = e.smoothing[t][x] * cm.coords.row(it - cm.members.begin()).transpose();
  return out;
}

std::vector<PairSample> audit_pairs(const SingleScaleEmbedding& e, const PointSet& s) {
  const Index n = s.size();
  const std::vector<double> src = kernels::condensed_distances(s.points, s.norm);
  const std::vector<double> img = kernels::condensed_distances(e.images, e.params.norm);
  std::vector<PairSample> out;
  out.reserve(src.size());
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const std::size_t k = kernels::pair_index(i, j, n);
      out.push_back({i, j, src[k], img[k], tau(e.params.norm, e.params.r, src[k])});
    }
  return out;
}

ContractAudit contract_audit(const SingleScaleEmbedding& e, const PointSet& s, const AuditBounds& bounds) {
  const SingleScaleParams& p = e.params;
  const std::vector<PairSample> pairs = audit_pairs(e, s);
  std::vector<PairSample> lip, win, ext;
  lip.reserve(pairs.size());
  const double lo = p.delta * p.r, hi = window_hi(p);
  for (const PairSample& ps : pairs) {
    lip.push_back({ps.i, ps.j, ps.source, ps.image, ps.source});
    if (ps.source >= lo && ps.source <= hi) win.push_back(ps);
    if (ps.source >= 0.5 * p.delta * p.r && ps.source <= 2.0 * p.r / p.delta) ext.push_back(ps);
  }
  ContractAudit a;
  const double top = 1.0 + bounds.lipschitz_slack;
  a.lipschitz = summarize("identity", lip, 0.0, kInf, 0.0, top);
  const char* ref = p.norm == Norm::kL2 ? "G_r" : p.norm == Norm::kL1 ? "L_r" : "T_r";
  const double declared_lo = p.norm == Norm::kLinf ? (1.0 - 1e-12) / ((1.0 + p.eps) * (1.0 + 2.0 * std::sqrt(p.delta)))
                                                   : 1.0 / (1.0 + bounds.c_b_max * p.eps);
  a.window = summarize(ref, win, lo, hi, declared_lo, top);
  a.extended = summarize(ref, ext, 0.5 * lo, 2.0 * p.r / p.delta, 0.0, kInf);
  for (Index x = 0; x < e.images.rows(); ++x) a.max_norm = std::max(a.max_norm, norm_length(e.images.row(x), p.norm));
  a.norm_bound = p.r * (1.0 + p.eps * p.delta) * (1.0 + bounds.norm_slack);
  a.c_b = a.window.pairs > 0 && a.window.min > 0.0 ? std::max(0.0, (1.0 / a.window.min - 1.0) / p.eps) : 0.0;
  a.target_lo = 1.0 / (1.0 + p.eps);
  a.target_hi = 1.0;
  return a;
}

std::string single_scale_json(const SingleScaleEmbedding& e, const ContractAudit* audit) {
  const SingleScaleParams& p = e.params;
  const SingleScaleDerived& dv = e.derived;
  nlohmann::ordered_json j;
  j["kind"] = "single-scale";
  j["params"] = {{"r", p.r},         {"delta", p.delta},         {"eps", p.eps},
                 {"norm", std::string(to_string(p.norm))},         {"seed", p.seed},
                 {"eps_pad", dv.eps_pad}, {"c_pad", p.c_pad},     {"rescale_c", p.rescale_c},
                 {"c_jl", p.c_jl}};
  j["derived"] = {{"net_radius", dv.net_radius},
                  {"pad_radius", dv.pad_radius},
                  {"diameter_bound", dv.diameter_bound},
                  {"c_pad_used", dv.c_pad_used},
                  {"dim_hat", dv.dim_hat},
                  {"m", dv.m},
                  {"distinct_partitions", e.decomposition.partitions.size()},
                  {"k_prime_max", dv.k_prime_max},
                  {"gain", dv.gain},
                  {"rescale", dv.rescale}};
  j["n"] = e.images.rows();
  j["k"] = e.stored_dim;
  j["raw_dim"] = e.raw_dim;
  j["net_size"] = e.net.size();
  j["extension"] = {{"net_lipschitz", e.net_lipschitz},
                    {"extended_points", e.extended_points},
                    {"max_sweeps", e.max_sweeps},
                    {"worst_violation", e.extension_violation}};
  if (e.lemma.enabled) {
    const LemmaDiagnostics& lg = e.lemma;
    j["lemma"] = {{"i_violations", lg.lemma_i_violations},  {"ii_violations", lg.lemma_ii_violations},
                  {"iii_violations", lg.lemma_iii_violations}, {"product_violations", lg.product_rule_violations},
                  {"i_max", lg.lemma_i_max},                 {"ii_max", lg.lemma_ii_max},
                  {"product_max", lg.product_rule_max},      {"empty_net_clusters", lg.empty_net_clusters}};
  }
  if (audit) {
    j["audit"] = {{"lipschitz", report_json(audit->lipschitz)},
                  {"window", report_json(audit->window)},
                  {"extended", report_json(audit->extended)},
                  {"max_norm", audit->max_norm},
                  {"norm_bound", audit->norm_bound},
                  {"c_b", audit->c_b},
                  {"targets", {audit->target_lo, audit->target_hi}}};
  }
  return j.dump();
}

}  // namespace lowdim
