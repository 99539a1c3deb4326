// Acceptance run: one PASS/FAIL line per criterion with the measured values.
// Exit status is 1 when any criterion fails.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lowdim/applications.hpp"
#include "lowdim/doubling.hpp"
#include "lowdim/error.hpp"
#include "lowdim/generate.hpp"
#include "lowdim/kernels.hpp"
#include "lowdim/lipschitz_extension.hpp"
#include "lowdim/report.hpp"
#include "lowdim/single_scale.hpp"
#include "lowdim/snowflake.hpp"
#include "lowdim/transforms.hpp"
#include "oracles.hpp"

using namespace lowdim;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct NamedSet {
  std::string name;
  PointSet set;
};

// a x b integer lattice
PointSet grid(Index a, Index b) {
  Matrix m(a * b, 2);
  for (Index i = 0; i < a; ++i)
    for (Index j = 0; j < b; ++j) {
      m(i * b + j, 0) = static_cast<double>(i);
      m(i * b + j, 1) = static_cast<double>(j);
    }
  return normalize(PointSet(m, Norm::kL2));
}

PointSet subspace(Index n, std::uint64_t seed) {
  GenParams g;
  g.n = n;
  g.intrinsic = 3;
  g.ambient = 50;
  return normalize(generate("subspace", g, seed));
}

PointSet ultrametric(Index depth) {
  GenParams g;
  g.depth = depth;
  return normalize(generate("ultrametric", g, 1));
}

std::vector<NamedSet> corpus() {
  return {{"grid 8x8", grid(8, 8)}, {"subspace 200", subspace(200, 1)}, {"ultrametric 128", ultrametric(7)}};
}

double lp_dist(const Matrix& m, Index i, Index j, Norm norm) {
  std::vector<double> a(m.cols()), b(m.cols());
  for (Index k = 0; k < m.cols(); ++k) {
    a[k] = m(i, k);
    b[k] = m(j, k);
  }
  return oracle::lp(a, b, norm == Norm::kL1 ? 1 : norm == Norm::kL2 ? 2 : 0);
}

double norm_lipschitz(const PointSet& s, const Matrix& img) {
  double best = 0.0;
  for (Index i = 0; i < s.size(); ++i)
    for (Index j = i + 1; j < s.size(); ++j)
      best = std::max(best, lp_dist(img, i, j, s.norm) / lp_dist(s.points, i, j, s.norm));
  return best;
}

// 1. Transform identities on log grids.
Outcome transforms() {
  const int n = 10000;
  const double tol = 1e-9;
  std::size_t bad_min = 0, bad_mono = 0, bad_lap = 0, bad_lemma = 0;
  double lemma_max = 0.0;
  for (double r : {1e-3, 1.0, 1e3}) {
    std::vector<double> t(n);
    for (int k = 0; k < n; ++k) t[k] = r * std::pow(10.0, -6.0 + 12.0 * k / (n - 1));
    const Transform g{TransformKind::kGaussian, r}, l{TransformKind::kLaplace, r};
    double prev = kInf;
    for (int k = 0; k < n; ++k) {
      const double gv = transform_value(g, t[k]);
      if (gv > std::min(t[k], r) * (1 + tol)) ++bad_min;
      const double q = gv / t[k];
      if (q > prev * (1 + tol)) ++bad_mono;
      prev = q;
      const double lv = transform_value(l, t[k]);
      const double via = gaussian_squared(1.0, std::sqrt(t[k] / r)) * r;
      if (std::fabs(lv - via) > tol * lv) ++bad_lap;
      for (double eta : {0.05, 0.1, 0.2, 0.3}) {
        const double ratio = transform_value(g, (1 + eta) * t[k]) / gv;
        lemma_max = std::max(lemma_max, (ratio - 1) / (3 * eta));
        if (ratio > (1 + 3 * eta) * (1 + tol)) ++bad_lemma;
      }
    }
  }
  Outcome o;
  o.pass = bad_min + bad_mono + bad_lap + bad_lemma == 0;
  o.detail = fmt("violations: G<=min(t,r) %zu, G/t monotone %zu, L=rG(sqrt(t/r))^2 %zu, ratio<=1+3eta %zu; "
                 "max (ratio-1)/(3 eta) = %.6f",
                 bad_min, bad_mono, bad_lap, bad_lemma, lemma_max);
  return o;
}

// 2. Gram embeddings of random clusters against the high-precision G_r.
Outcome gram() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<Index> size(2, 40), amb(1, 64);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  double worst = 0.0, eig_min = kInf;
  std::size_t bad = 0, bad_eig = 0;
  for (int c = 0; c < 100; ++c) {
    const Index m = size(rng), dim = amb(rng);
    Matrix pts(m, dim);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < dim; ++j) pts(i, j) = nd(rng);
    const DistanceMatrix d = kernels::pairwise_distances(pts, Norm::kL2);
    const double r = d.max() * std::pow(10.0, u(rng));
    const ClusterEmbedding ce = gaussian_embed(d, r);
    for (Index i = 0; i < m; ++i)
      for (Index j = i + 1; j < m; ++j) {
        const double want = static_cast<double>(oracle::gaussian(r, d(i, j)));
        const double rel = std::fabs(lp_dist(ce.coords, i, j, Norm::kL2) - want) / want;
        worst = std::max(worst, rel);
        if (rel > 1e-7) ++bad;
      }
    const double er = gram_min_eigen_ratio(d, r);
    eig_min = std::min(eig_min, er);
    if (er < -1e-9) ++bad_eig;
  }
  Outcome o;
  o.pass = bad == 0 && bad_eig == 0;
  o.detail = fmt("100 clusters: max relative distance error %.3e (bound 1e-7, %zu over), min eigenvalue ratio "
                 "%.3e (bound -1e-9, %zu under)",
                 worst, bad, eig_min, bad_eig);
  return o;
}

// Shared state of criteria 3-5.
struct ScaleTally {
  std::size_t builds = 0, failed_contracts = 0, lemma_bad = 0, ext_bad = 0, ext_checked = 0;
  double lip_max = 0.0, norm_max = 0.0, cb_max = 0.0, win_min = kInf, ext_ratio_max = 0.0;
  double slowest_set = 0.0;
  std::string slowest_name;
  std::vector<std::string> errors;
};

ScaleTally run_single_scale_corpus() {
  ScaleTally t;
  for (const NamedSet& ns : corpus()) {
    const auto t0 = std::chrono::steady_clock::now();
    const DistanceMatrix d = kernels::pairwise_distances(ns.set.points, ns.set.norm);
    for (std::uint64_t seed : {1, 2, 3})
      for (double r : {0.01, 0.1, 1.0, 10.0, 100.0}) {
        SingleScaleParams p;
        p.r = r;
        p.eps = 0.1;
        p.delta = 0.1;
        p.seed = seed;
        try {
          const SingleScaleEmbedding e = build_single_scale(ns.set, d, p);
          ++t.builds;
          const ContractAudit a = contract_audit(e, ns.set);
          if (!a.ok()) ++t.failed_contracts;
          t.lip_max = std::max(t.lip_max, a.lipschitz.max);
          t.norm_max = std::max(t.norm_max, a.max_norm / r);
          if (a.window.pairs > 0) {
            t.cb_max = std::max(t.cb_max, a.c_b);
            t.win_min = std::min(t.win_min, a.window.min);
          }
          if (!e.lemma.enabled || !e.lemma.ok()) ++t.lemma_bad;
          if (e.extended_points > 0) {
            ++t.ext_checked;
            const double full = lipschitz_constant(ns.set.points, e.images) / e.derived.rescale;
            const double ratio = e.net_lipschitz > 0 ? full / e.net_lipschitz : (full > 0 ? kInf : 1.0);
            t.ext_ratio_max = std::max(t.ext_ratio_max, ratio);
            if (full > e.net_lipschitz * (1 + 2 * p.ext_tol)) ++t.ext_bad;
          }
        } catch (const Error& err) {
          t.errors.push_back(ns.name + fmt(" seed %d r %g: ", static_cast<int>(seed), r) + err.what());
        }
      }
    const double secs = seconds_since(t0);
    if (secs > t.slowest_set) {
      t.slowest_set = secs;
      t.slowest_name = ns.name;
    }
  }
  return t;
}

Outcome contracts(const ScaleTally& t) {
  Outcome o;
  o.pass = t.errors.empty() && t.failed_contracts == 0 && t.slowest_set < 300.0;
  o.detail = fmt("%zu builds, %zu failing; max pair ratio %.12f (bound 1+1e-9), max norm/r %.12f (bound "
                 "%.6f), min window ratio %.6f (bound %.6f), max c_b %.3f; slowest set %s %.1f s (limit 300)",
                 t.builds, t.failed_contracts, t.lip_max, t.norm_max, 1 + 0.1 * 0.1, t.win_min, 1 / (1 + 45 * 0.1),
                 t.cb_max, t.slowest_name.c_str(), t.slowest_set);
  for (const std::string& e : t.errors) o.detail += "; error: " + e;
  return o;
}

Outcome lemma(const ScaleTally& t) {
  Outcome o;
  o.pass = t.errors.empty() && t.lemma_bad == 0 && t.builds > 0;
  o.detail = fmt("%zu builds with diagnostics, %zu with violations of (i)-(iii) or the product rule", t.builds,
                 t.lemma_bad);
  return o;
}

Outcome extension(const ScaleTally& t) {
  Outcome o;
  o.pass = t.errors.empty() && t.ext_bad == 0;
  o.detail = fmt("%zu builds with extended points, %zu over L(1+2e-6); max global/net Lipschitz ratio %.9f",
                 t.ext_checked, t.ext_bad, t.ext_ratio_max);
  return o;
}

// Snowflake builds shared by criteria 6, 7 and 10.
struct FlakeRun {
  std::string name;
  double alpha = 0.5;
  const PointSet* set = nullptr;
  SnowflakeEmbedding e;
  SnowflakeAudit audit;
  double secs = 0.0;
  std::string error;
};

std::vector<FlakeRun> run_snowflakes(const std::vector<NamedSet>& sets) {
  std::vector<FlakeRun> runs;
  for (double alpha : {0.5, 0.7})
    for (const NamedSet& ns : sets) {
      FlakeRun run;
      run.name = ns.name;
      run.alpha = alpha;
      run.set = &ns.set;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        run.e = build_snowflake(ns.set, alpha, 0.1, 1);
        run.audit = distortion_audit(run.e, ns.set);
      } catch (const Error& err) {
        run.error = err.what();
      }
      run.secs = seconds_since(t0);
      std::printf("  snowflake %s alpha %.1f: %.1f s\n", ns.name.c_str(), alpha, run.secs);
      std::fflush(stdout);
      runs.push_back(std::move(run));
    }
  return runs;
}

NominalDimension nominal_for(const PointSet& s, double alpha) {
  const SnowflakeParams plan = scale_plan(s, alpha, 0.1);
  return nominal_dimension(plan.dim_hat, plan.eps, plan.delta, plan.norm);
}

Outcome snowflake_band(const std::vector<FlakeRun>& runs) {
  Outcome o;
  std::string parts;
  for (const FlakeRun& r : runs) {
    if (!r.error.empty()) {
      o.pass = false;
      parts += fmt("%s a=%.1f error %s; ", r.name.c_str(), r.alpha, r.error.c_str());
      continue;
    }
    const double want = static_cast<double>(r.e.params.p) * r.e.per_scale.k;
    const bool dim_ok = r.e.target_dim == want;
    const bool ok = r.audit.band <= 2.6 && dim_ok && r.secs < 1800.0;
    o.pass = o.pass && ok;
    parts += fmt("%s a=%.1f band %.5f k %.4g (2^%.1f) %.0f s%s; ", r.name.c_str(), r.alpha, r.audit.band,
                 r.e.target_dim, r.e.target_dim_log2, r.secs, ok ? "" : " FAIL");
  }
  // Doubled n at fixed structure: equal dim_hat, equal target dimension.
  struct Pair {
    const char* name;
    PointSet a, b;
    bool counted;
  };
  const std::vector<Pair> pairs = {{"grid 8x8 / 8x16", grid(8, 8), grid(8, 16), true},
                                   {"ultrametric 128 / 256", ultrametric(7), ultrametric(8), true},
                                   {"subspace 200 / 400", subspace(200, 1), subspace(400, 1), false}};
  for (const Pair& pr : pairs)
    for (double alpha : {0.5, 0.7}) {
      const SnowflakeParams pa = scale_plan(pr.a, alpha, 0.1), pb = scale_plan(pr.b, alpha, 0.1);
      const double ka = pa.p * nominal_for(pr.a, alpha).k, kb = pb.p * nominal_for(pr.b, alpha).k;
      const bool same_hat = pa.dim_hat == pb.dim_hat;
      if (pr.counted) {
        const bool ok = same_hat && ka == kb;
        o.pass = o.pass && ok;
        parts += fmt("%s a=%.1f dim_hat %.3f/%.3f k %.4g/%.4g%s; ", pr.name, alpha, pa.dim_hat, pb.dim_hat, ka, kb,
                     ok ? "" : " FAIL");
      } else {
        parts += fmt("%s a=%.1f (informational) dim_hat %.3f/%.3f k %.4g/%.4g; ", pr.name, alpha, pa.dim_hat,
                     pb.dim_hat, ka, kb);
      }
    }
  o.detail = "band bound 2.6, target dim = p k_per_scale; " + parts;
  return o;
}

Outcome tails(const std::vector<FlakeRun>& runs) {
  Outcome o;
  std::string parts;
  for (const FlakeRun& r : runs) {
    if (!r.error.empty()) {
      o.pass = false;
      continue;
    }
    const TailDiagnostics& t = r.audit.tails;
    o.pass = o.pass && t.ok() && t.tail_checks > 0;
    const double dmin = t.dominant_checks > 0 ? t.dominant_min : 0.0;
    parts += fmt("%s a=%.1f tail %td/%td over (max %.3f of eps(1+eps)^(i(1-a))), dominant %td/%td under 0.45 "
                 "(min %.3f, without the per-scale rescale %.3f); ",
                 r.name.c_str(), r.alpha, t.tail_violations, t.tail_checks, t.tail_max, t.dominant_violations,
                 t.dominant_checks, dmin, dmin / r.e.params.gain);
  }
  o.detail = parts;
  return o;
}

// 8. l_inf single scale over a geometric r-grid.
Outcome linf() {
  std::vector<NamedSet> sets;
  for (std::uint64_t seed : {4, 5}) {
    GenParams g;
    g.n = 100;
    g.intrinsic = 2;
    g.ambient = 10;
    g.norm = Norm::kLinf;
    sets.push_back({fmt("subspace100 seed %d", static_cast<int>(seed)), normalize(generate("subspace", g, seed))});
  }
  {
    GenParams g;
    g.side = 10;
    g.norm = Norm::kLinf;
    sets.push_back({"grid 10x10", normalize(generate("grid", g, 1))});
  }
  const double eps = 0.1, delta = eps * eps / 4;
  std::size_t builds = 0, frechet_bad = 0, lip_bad = 0, band_bad = 0, band_builds = 0;
  double frechet_err = 0.0, lip_max = 0.0, win_min = kInf, win_max = 0.0, target = 0.0;
  std::string failing;
  for (const NamedSet& ns : sets) {
    const DistanceMatrix d = kernels::pairwise_distances(ns.set.points, ns.set.norm);
    const double lo = d.min_offdiagonal() * std::sqrt(delta), hi = d.max() / delta;
    for (double r = lo; r <= hi * (1 + 1e-12); r *= 2.0) {
      SingleScaleParams p;
      p.norm = Norm::kLinf;
      p.r = r;
      p.eps = eps;
      p.delta = delta;
      p.seed = 1;
      SingleScaleEmbedding e;
      try {
        e = build_single_scale(ns.set, d, p);
      } catch (const Error& err) {
        failing += ns.name + fmt(" r %.4g error %s; ", r, err.what());
        ++band_bad;
        continue;
      }
      ++builds;
      std::vector<char> is_net(ns.set.size(), 0);
      for (Index x : e.net.members) is_net[x] = 1;
      for (const ClusterMap& cm : e.cluster_maps)
        for (std::size_t a = 0; a < cm.members.size(); ++a)
          for (std::size_t b = a + 1; b < cm.members.size(); ++b) {
            const Index x = e.domain[cm.members[a]], y = e.domain[cm.members[b]];
            const double t = std::min(d(x, y), r);
            const double got = lp_dist(cm.coords, static_cast<Index>(a), static_cast<Index>(b), Norm::kLinf);
            if (got > t * (1 + 1e-12)) ++frechet_bad;
            if (is_net[x] && is_net[y]) {
              frechet_err = std::max(frechet_err, std::fabs(got - t) / t);
              if (std::fabs(got - t) > 1e-12 * t) ++frechet_bad;
            }
          }
      const double lip = norm_lipschitz(ns.set, e.images);
      lip_max = std::max(lip_max, lip);
      if (lip > 1 + 1e-12) ++lip_bad;
      const ContractAudit a = contract_audit(e, ns.set);
      target = a.window.bound_lo;
      if (a.window.pairs > 0) {
        ++band_builds;
        win_min = std::min(win_min, a.window.min);
        win_max = std::max(win_max, a.window.max);
        if (a.window.violation_count > 0) {
          ++band_bad;
          failing += ns.name + fmt(" r %.4g min %.4f (%zu pairs); ", r, a.window.min, a.window.violation_count);
        }
      }
    }
  }
  Outcome o;
  o.pass = frechet_bad == 0 && lip_bad == 0 && band_bad == 0;
  o.detail = fmt("%zu builds, delta = eps^2/4; Frechet violations %zu (max net-pair error %.2e), max Lipschitz "
                 "%.15f; window ratio range [%.4f, %.4f] over %zu builds, declared [%.4f, 1], %zu builds out of band",
                 builds, frechet_bad, frechet_err, lip_max, win_min, win_max, band_builds, target, band_bad);
  if (!failing.empty()) o.detail += "; " + failing;
  return o;
}

// 9. l1 single scale with clusters capped at 12 points.
Outcome l1() {
  std::size_t builds = 0, lp_bad = 0, iso_bad = 0, lip_bad = 0;
  double lp_max = 0.0, iso_max = 0.0, lip_max = 0.0;
  std::string errors;
  for (std::uint64_t seed : {1, 2, 3}) {
    GenParams g;
    g.n = 12;
    g.intrinsic = 2;
    g.ambient = 6;
    g.norm = Norm::kL1;
    const PointSet s = normalize(generate("subspace", g, seed));
    const DistanceMatrix d = kernels::pairwise_distances(s.points, s.norm);
    for (double r : {0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0}) {
      SingleScaleParams p;
      p.norm = Norm::kL1;
      p.r = r;
      p.cut_cap = 12;
      p.seed = seed;
      SingleScaleEmbedding e;
      try {
        e = build_single_scale(s, d, p);
      } catch (const Error& err) {
        errors += fmt("seed %d r %g: %s; ", static_cast<int>(seed), r, err.what());
        continue;
      }
      ++builds;
      std::vector<char> is_net(s.size(), 0);
      for (Index x : e.net.members) is_net[x] = 1;
      for (const ClusterMap& cm : e.cluster_maps) {
        lp_max = std::max(lp_max, cm.achieved_error);
        if (cm.achieved_error > 1e-6) ++lp_bad;
        for (std::size_t a = 0; a < cm.members.size(); ++a)
          for (std::size_t b = a + 1; b < cm.members.size(); ++b) {
            const Index x = e.domain[cm.members[a]], y = e.domain[cm.members[b]];
            const double want = static_cast<double>(oracle::laplace(r, d(x, y)));
            const double got = lp_dist(cm.coords, static_cast<Index>(a), static_cast<Index>(b), Norm::kL1);
            if (got > want * (1 + 1e-9) + 1e-12) ++lip_bad;
            if (is_net[x] && is_net[y]) {
              iso_max = std::max(iso_max, std::fabs(got - want) / want);
              if (std::fabs(got - want) > 1e-6 * want) ++iso_bad;
            }
          }
      }
      const double lip = norm_lipschitz(s, e.images);
      lip_max = std::max(lip_max, lip);
      if (lip > 1 + 1e-9) ++lip_bad;
    }
  }
  Outcome o;
  o.pass = errors.empty() && lp_bad == 0 && iso_bad == 0 && lip_bad == 0;
  o.detail = fmt("%zu builds, cap 12; max cut-LP residual %.2e (bound 1e-6), max net-pair relative error %.2e, "
                 "max Lipschitz %.12f; violations %zu/%zu/%zu",
                 builds, lp_max, iso_max, lip_max, lp_bad, iso_bad, lip_bad);
  if (!errors.empty()) o.detail += "; " + errors;
  return o;
}

// 10. Distance labels from the alpha = 1/2 snowflakes.
Outcome dls(const std::vector<FlakeRun>& runs) {
  Outcome o;
  const double eps = 0.1;
  std::string parts;
  for (const FlakeRun& r : runs) {
    if (r.alpha != 0.5) continue;
    if (!r.error.empty()) {
      o.pass = false;
      continue;
    }
    const LabelSet set = dls_build(r.e, eps);
    const DistanceMatrix d = kernels::pairwise_distances(r.set->points, r.set->norm);
    double worst = 0.0, bound = 0.0;
    std::size_t bad = 0;
    for (Index i = 0; i < d.size(); ++i)
      for (Index j = i + 1; j < d.size(); ++j) {
        const DlsEstimate est = dls_query(set.header, set.labels[i], set.header, set.labels[j], eps);
        const double root = std::sqrt(d(i, j));
        const double f = std::max(est.snowflaked / root, root / est.snowflaked);
        const double allowed = (1 + 3 * eps) * (1 + est.slack);
        worst = std::max(worst, f);
        bound = allowed;
        if (!(f <= allowed)) ++bad;
      }
    const double k = set.header.k;
    const double ref = k * std::log2(d.max() / (eps / (2 * k)));
    const double bits = label_bits(set);
    const bool ok = bad == 0 && bits <= 2 * ref && bits >= ref / 2;
    o.pass = o.pass && ok;
    parts += fmt("%s: worst factor %.5f (bound %.5f, %zu over), bits %.0f vs k log2(R/(eps/2k)) %.0f (ratio %.3f); ",
                 r.name.c_str(), worst, bound, bad, bits, ref, bits / ref);
  }
  o.detail = parts;
  return o;
}

// 11. Reruns with the same seed produce the same bytes.
Outcome determinism() {
  std::map<std::string, std::function<std::string()>> pipelines;
  const PointSet g8 = grid(8, 8), u = ultrametric(5);
  pipelines["single-scale l2 dump"] = [&] {
    SingleScaleParams p;
    p.r = 5.0;
    p.seed = 9;
    const SingleScaleEmbedding e = build_single_scale(g8, p);
    const ContractAudit a = contract_audit(e, g8);
    std::ostringstream out;
    write_dump(out, single_scale_json(e, &a), e.images);
    return out.str();
  };
  pipelines["single-scale report"] = [&] {
    SingleScaleParams p;
    p.r = 5.0;
    p.seed = 9;
    const SingleScaleEmbedding e = build_single_scale(g8, p);
    const ContractAudit a = contract_audit(e, g8);
    std::ostringstream out;
    write_report_csv(out, audit_pairs(e, g8), a.window.window_lo, a.window.window_hi);
    out << report_json(a.window).dump() << report_json(a.lipschitz).dump();
    return out.str();
  };
  pipelines["snowflake dump and labels"] = [&] {
    const SnowflakeEmbedding e = build_snowflake(u, 0.5, 0.1, 9);
    const SnowflakeAudit a = distortion_audit(e, u);
    std::ostringstream out;
    write_dump(out, snowflake_json(e, &a), e.images);
    write_labels(out, dls_build(e, 0.1));
    return out.str();
  };
  pipelines["l_inf and l1 dumps"] = [&] {
    GenParams gp;
    gp.n = 40;
    gp.intrinsic = 2;
    gp.ambient = 6;
    std::ostringstream out;
    for (Norm norm : {Norm::kLinf, Norm::kL1}) {
      gp.norm = norm;
      gp.n = norm == Norm::kL1 ? 12 : 40;
      const PointSet s = normalize(generate("subspace", gp, 3));
      SingleScaleParams p;
      p.norm = norm;
      p.r = 1.0;
      p.delta = norm == Norm::kLinf ? 0.0025 : 0.1;
      p.cut_cap = 12;
      p.seed = 9;
      const SingleScaleEmbedding e = build_single_scale(s, p);
      write_dump(out, single_scale_json(e), e.images);
    }
    return out.str();
  };
  Outcome o;
  std::string parts;
  for (const auto& [name, run] : pipelines) {
    const std::string a = run(), b = run();
    const bool same = a == b;
    o.pass = o.pass && same;
    parts += fmt("%s %zu bytes %s; ", name.c_str(), a.size(), same ? "identical" : "DIFFERENT");
  }
  o.detail = parts;
  return o;
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* title, const std::function<Outcome()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail = std::string("exception: ") + ex.what();
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %s  %s [%.1f s]\n    %s\n", id, o.pass ? "PASS" : "FAIL", title, seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "transform identities", transforms);
  report(2, "Gaussian Gram embedding", gram);

  const auto t0 = std::chrono::steady_clock::now();
  const ScaleTally tally = run_single_scale_corpus();
  std::printf("  single-scale corpus builds: %.1f s\n", seconds_since(t0));
  report(3, "single-scale l2 contracts", [&] { return contracts(tally); });
  report(4, "cluster map sub-checks", [&] { return lemma(tally); });
  report(5, "Lipschitz extension", [&] { return extension(tally); });

  const std::vector<NamedSet> sets = corpus();
  const std::vector<FlakeRun> runs = run_snowflakes(sets);
  report(6, "snowflake distortion band and target dimension", [&] { return snowflake_band(runs); });
  report(7, "snowflake tail diagnostics", [&] { return tails(runs); });
  report(8, "l_inf single scale", linf);
  report(9, "l1 single scale", l1);
  report(10, "distance labels", [&] { return dls(runs); });
  report(11, "determinism", determinism);

  std::printf("%d of 11 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
