#include "lowdim/snowflake.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include <json.hpp>

#include "lowdim/decomposition.hpp"
#include "lowdim/doubling.hpp"
#include "lowdim/error.hpp"
#include "lowdim/kernels.hpp"
#include "lowdim/rng.hpp"

namespace lowdim {

namespace {

// Bounds of b with -p/2 < b <= p/2.
Index b_min(Index p) { return -((p - 1) / 2); }
Index b_max(Index p) { return p / 2; }

Index residue(Index i, Index p) { return ((i % p) + p) % p; }

double pow1p(double eps, double x) { return std::exp(x * std::log1p(eps)); }

// Per-scale global factor of the single-scale construction.
double scale_gain(const SnowflakeParams& plan, const SingleScaleParams& base) {
  return plan.norm == Norm::kLinf ? 1.0 / (1.0 + 2.0 * std::sqrt(plan.delta)) : 1.0 / (1.0 + base.rescale_c * plan.eps);
}

}  // namespace

SnowflakeParams scale_plan(double diameter, double dim_hat, double alpha, double eps, Norm norm) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::kBadParams, "alpha must lie in (0, 1)");
  if (!(eps > 0.0 && eps < 0.25)) throw Error(ErrorCode::kBadParams, "eps must lie in (0, 1/4)");
  if (!(diameter > 0.0) || !std::isfinite(diameter)) throw Error(ErrorCode::kBadParams, "diameter must be positive");
  SnowflakeParams sp;
  sp.alpha = alpha;
  sp.eps = eps;
  sp.norm = norm;
  sp.diameter = diameter;
  sp.dim_hat = dim_hat;
  const double l = std::log1p(eps);
  const double q = std::ceil(std::log(1.0 / eps) / l - 1e-9);
  sp.p = static_cast<Index>(std::ceil(3.0 / (1.0 - alpha) * q - 1e-9));
  sp.delta = pow1p(eps, -static_cast<double>(sp.p) * (1.0 - alpha));
  // Theta(eps^3): p (1 - alpha) lies in [3q, 3q + 1 - alpha).
  if (!(sp.delta <= eps * eps * eps * (1.0 + 1e-9) && sp.delta >= eps * eps * eps / std::pow(1.0 + eps, 4.0)))
    throw Error(ErrorCode::kBadParams, "per-scale delta is not of order eps^3");
  sp.i_lo = static_cast<Index>(std::ceil(5.0 * std::log(eps) / l - 1e-9));
  sp.i_hi = static_cast<Index>(std::floor((std::log(diameter) - 5.0 * std::log(eps)) / l + 1e-9));
  sp.M = static_cast<double>(compute_M(eps, sp.p));
  sp.M_alpha = static_cast<double>(compute_M_alpha(eps, sp.p, alpha, norm));
  return sp;
}

SnowflakeParams scale_plan(const DistanceMatrix& d, double alpha, double eps, Norm norm) {
  if (d.size() < 2) throw Error(ErrorCode::kEmptyInput, "snowflake needs at least two points");
  return scale_plan(d.max(), estimate_doubling(d).dim_hat, alpha, eps, norm);
}

SnowflakeParams scale_plan(const PointSet& s, double alpha, double eps, Norm norm) {
  validate(s);
  return scale_plan(kernels::pairwise_distances(s.points, s.norm), alpha, eps, norm);
}

long double compute_M(double eps, Index p) {
  if (p <= 0) throw Error(ErrorCode::kBadParams, "p must be positive");
  const long double base = 1.0L + static_cast<long double>(eps);
  long double m = 0.0L;
  for (Index b = b_min(p); b <= b_max(p); ++b) {
    const long double t = std::pow(base, -static_cast<long double>(b));
    // ((1+eps)^b G(t))^2 = (1+eps)^(2b) (1 - exp(-t^2))
    m += std::pow(base, 2.0L * b) * -std::expm1(-t * t);
  }
  return m;
}

long double compute_M_alpha(double eps, Index p, double alpha, Norm norm) {
  if (p <= 0) throw Error(ErrorCode::kBadParams, "p must be positive");
  const long double base = 1.0L + static_cast<long double>(eps);
  const long double a = alpha;
  long double m = 0.0L;
  for (Index b = b_min(p); b <= b_max(p); ++b) {
    const long double t = std::pow(base, -static_cast<long double>(b));
    const long double w = std::pow(base, a * b);
    switch (norm) {
      case Norm::kL2:
        m += w * w * -std::expm1(-t * t);
        break;
      case Norm::kL1:
        m += w * -std::expm1(-t);
        break;
      case Norm::kLinf:
        m = std::max(m, w * std::min(t, 1.0L));
        break;
    }
  }
  return m;
}

SnowflakeEmbedding build_snowflake(const PointSet& s, double alpha, double eps, std::uint64_t seed,
                                   const SnowflakeOptions& opt) {
  validate(s);
  return build_snowflake(s, kernels::pairwise_distances(s.points, s.norm), alpha, eps, seed, opt);
}

SnowflakeEmbedding build_snowflake(const PointSet& s, const DistanceMatrix& d, double alpha, double eps,
                                   std::uint64_t seed, const SnowflakeOptions& opt) {
  validate(s);
  if (d.size() != s.size()) throw Error(ErrorCode::kBadParams, "distance matrix size differs from the point set");
  SnowflakeEmbedding e;
  e.seed = seed;
  e.params = scale_plan(d, alpha, eps, s.norm);
  SnowflakeParams& plan = e.params;
  plan.gain = scale_gain(plan, opt.base);
  plan.normalizer = plan.norm == Norm::kL2 ? std::sqrt(plan.M_alpha) * plan.gain : plan.M_alpha * plan.gain;

  const Index count = plan.scale_count();
  const Index n = s.size();
  e.scales.resize(count);
  std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic)
  for (Index u = 0; u < count; ++u) {
    const Index i = plan.i_lo + u;
    SingleScaleParams sp = opt.base;
    sp.r = pow1p(eps, static_cast<double>(i));
    sp.delta = plan.delta;
    sp.eps = eps;
    sp.norm = plan.norm;
    sp.seed = derive_seed(seed, {kTagScale, static_cast<std::uint64_t>(i)});
    sp.dim_override = plan.dim_hat;
    try {
      SingleScaleEmbedding one = build_single_scale(s, d, sp);
      one.decomposition.partitions.clear();
      one.decomposition.partitions.shrink_to_fit();
      e.scales[u] = std::move(one);
    } catch (...) {
      errors[u] = std::current_exception();
    }
  }
  for (Index u = 0; u < count; ++u) {
    if (!errors[u]) continue;
    try {
      std::rethrow_exception(errors[u]);
    } catch (const Error& err) {
      throw Error(err.code(), "snowflake scale i=" + std::to_string(plan.i_lo + u) + ": " + err.message());
    }
  }

  e.scale_dims.resize(count);
  for (Index u = 0; u < count; ++u) {
    e.scale_dims[u] = e.scales[u].dim();
    e.block = std::max(e.block, e.scale_dims[u]);
  }
  e.images = Matrix::Zero(n, plan.p * e.block);
  for (Index u = 0; u < count; ++u) {
    const Index i = plan.i_lo + u;
    const double w = pow1p(eps, -static_cast<double>(i) * (1.0 - alpha)) / plan.normalizer;
    e.images.middleCols(residue(i, plan.p) * e.block, e.scale_dims[u]) += w * e.scales[u].images;
  }
  if (!opt.keep_scales) {
    e.scales.clear();
    e.scales.shrink_to_fit();
  }

  DecompositionParams dp;
  e.per_scale = nominal_dimension(plan.dim_hat, eps, plan.delta, plan.norm, opt.base.c_pad, dp.c_0, opt.base.c_jl);
  e.target_dim = static_cast<double>(plan.p) * e.per_scale.k;
  e.target_dim_log2 = std::log2(static_cast<double>(plan.p)) + e.per_scale.log2_k;
  e.scale = s.scale;
  e.raw_factor = std::pow(s.scale, alpha);
  return e;
}

std::vector<PairSample> snowflake_pairs(const SnowflakeEmbedding& e, const PointSet& s) {
  const Index n = s.size();
  if (e.images.rows() != n) throw Error(ErrorCode::kBadParams, "embedding and point set sizes differ");
  const std::vector<double> src = kernels::condensed_distances(s.points, s.norm);
  const std::vector<double> img = kernels::condensed_distances(e.images, e.params.norm);
  std::vector<PairSample> out;
  out.reserve(src.size());
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const std::size_t k = kernels::pair_index(i, j, n);
      out.push_back({i, j, src[k], img[k], std::pow(src[k], e.params.alpha)});
    }
  return out;
}

namespace {

TailDiagnostics tail_diagnostics(const SnowflakeEmbedding& e, const PointSet& s) {
  const SnowflakeParams& plan = e.params;
  const Index n = s.size();
  const Index count = plan.scale_count();
  const Index p = plan.p;
  const double l = std::log1p(plan.eps);

  std::vector<double> divisor(count);
  std::vector<std::vector<char>> in_domain(count, std::vector<char>(n, 0));
  for (Index u = 0; u < count; ++u) {
    divisor[u] = pow1p(plan.eps, static_cast<double>(plan.i_lo + u) * (1.0 - plan.alpha));
    for (Index x : e.scales[u].domain) in_domain[u][x] = 1;
  }

  TailDiagnostics t;
  Index checks = 0, viol = 0, dchecks = 0, dviol = 0;
  double tmax = 0.0, dmin = kInf, wmin = 1.0;
#pragma omp parallel for schedule(dynamic) reduction(+ : checks, viol, dchecks, dviol) reduction(max : tmax) \
    reduction(min : dmin, wmin)
  for (Index x = 0; x < n; ++x) {
    std::vector<double> b(count), tail(p);
    for (Index y = x + 1; y < n; ++y) {
      const double d = norm_distance(s.row(x), s.row(y), s.norm);
      const Index star = static_cast<Index>(std::floor(std::log(d) / l + 1e-12));
      const Index a_lo = star + b_min(p), a_hi = star + b_max(p);
      std::fill(tail.begin(), tail.end(), 0.0);
      double all = 0.0, window = 0.0;
      for (Index u = 0; u < count; ++u) {
        const Index i = plan.i_lo + u;
        const Matrix& im = e.scales[u].images;
        b[u] = im.cols() > 0 ? norm_distance(im.row(x), im.row(y), plan.norm) / divisor[u] : 0.0;
        all += b[u] * b[u];
        if (i < a_lo || i > a_hi)
          tail[residue(i, p)] += b[u];
        else
          window += b[u] * b[u];
      }
      if (all > 0.0) wmin = std::min(wmin, window / all);
      for (Index i = std::max(a_lo, plan.i_lo); i <= std::min(a_hi, plan.i_hi); ++i) {
        const double ratio = tail[residue(i, p)] / (plan.eps * divisor[i - plan.i_lo]);
        ++checks;
        tmax = std::max(tmax, ratio);
        if (ratio > 1.0 + t.tail_slack) ++viol;
      }
      if (star >= plan.i_lo && star <= plan.i_hi) {
        const Index u = star - plan.i_lo;
        if (in_domain[u][x] && in_domain[u][y]) {
          const double ratio = b[u] / divisor[u];
          ++dchecks;
          dmin = std::min(dmin, ratio);
          if (ratio < t.dominant_bound) ++dviol;
        }
      }
    }
  }
  t.tail_checks = checks;
  t.tail_violations = viol;
  t.tail_max = tmax;
  t.dominant_checks = dchecks;
  t.dominant_violations = dviol;
  t.dominant_min = dmin;
  t.window_mass_min = wmin;
  return t;
}

}  // namespace

SnowflakeAudit distortion_audit(const SnowflakeEmbedding& e, const PointSet& s) {
  SnowflakeAudit a;
  const std::vector<PairSample> pairs = snowflake_pairs(e, s);
  a.ratios = summarize("d^alpha", pairs, 0.0, kInf, 0.0, kInf);
  a.band = a.ratios.pairs > 0 ? a.ratios.band() : 1.0;
  a.c = (a.band - 1.0) / e.params.eps;
  a.band_bound = 1.0 + 16.0 * e.params.eps;
  if (!e.scales.empty()) a.tails = tail_diagnostics(e, s);
  return a;
}

std::string snowflake_json(const SnowflakeEmbedding& e, const SnowflakeAudit* audit) {
  const SnowflakeParams& p = e.params;
  nlohmann::ordered_json j;
  j["kind"] = "snowflake";
  j["params"] = {{"alpha", p.alpha}, {"eps", p.eps}, {"norm", std::string(to_string(p.norm))}, {"seed", e.seed}};
  j["plan"] = {{"p", p.p},
               {"I", {p.i_lo, p.i_hi}},
               {"delta", p.delta},
               {"diameter", p.diameter},
               {"dim_hat", p.dim_hat},
               {"M", p.M},
               {"M_alpha", p.M_alpha},
               {"gain", p.gain},
               {"normalizer", p.normalizer}};
  j["n"] = e.images.rows();
  j["k"] = e.images.cols();
  j["block"] = e.block;
  j["target_dim"] = std::isfinite(e.target_dim) ? nlohmann::ordered_json(e.target_dim) : nullptr;
  j["target_dim_log2"] = e.target_dim_log2;
  j["k_per_scale"] = {{"m", e.per_scale.m},
                      {"k_prime", std::isfinite(e.per_scale.k_prime) ? nlohmann::ordered_json(e.per_scale.k_prime)
                                                                      : nullptr},
                      {"log2_k", e.per_scale.log2_k}};
  j["raw_factor"] = e.raw_factor;
  nlohmann::ordered_json manifest = nlohmann::ordered_json::array();
  for (std::size_t u = 0; u < e.scale_dims.size(); ++u) {
    nlohmann::ordered_json sc;
    sc["i"] = p.i_lo + static_cast<Index>(u);
    sc["k"] = e.scale_dims[u];
    if (u < e.scales.size()) {
      const SingleScaleEmbedding& one = e.scales[u];
      sc["r"] = one.params.r;
      sc["net_size"] = one.net.size();
      sc["m"] = one.derived.m;
      sc["c_pad_used"] = one.derived.c_pad_used;
      sc["extended_points"] = one.extended_points;
    }
    manifest.push_back(std::move(sc));
  }
  j["scales"] = std::move(manifest);
  if (audit) {
    const TailDiagnostics& t = audit->tails;
    j["audit"] = {{"ratios", report_json(audit->ratios)},
                  {"band", audit->band},
                  {"c", audit->c},
                  {"band_bound", audit->band_bound},
                  {"tails",
                   {{"checks", t.tail_checks},
                    {"violations", t.tail_violations},
                    {"max", t.tail_max},
                    {"dominant_checks", t.dominant_checks},
                    {"dominant_violations", t.dominant_violations},
                    {"dominant_min", std::isfinite(t.dominant_min) ? nlohmann::ordered_json(t.dominant_min) : nullptr},
                    {"window_mass_min", t.window_mass_min}}}};
  }
  return j.dump();
}

}  // namespace lowdim
