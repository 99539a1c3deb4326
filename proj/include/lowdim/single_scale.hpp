#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lowdim/decomposition.hpp"
#include "lowdim/net.hpp"
#include "lowdim/point_set.hpp"
#include "lowdim/report.hpp"
#include "lowdim/transforms.hpp"

namespace lowdim {

struct SingleScaleParams {
  double r = 1.0;
  double delta = 0.1;  // in (0, 1/4); l_inf also needs delta <= eps^2/4
  double eps = 0.1;    // in (0, 1/4)
  Norm norm = Norm::kL2;
  std::uint64_t seed = 0;

  double eps_pad = 0.0;       // padding failure rate; 0 means eps
  double c_pad = 4.0;         // Delta = 3 c_pad max(1, dim) r / delta
  int max_enlarge = 3;        // c_pad doublings tried on PaddingUnachievable
  double rescale_c = 40.0;    // global 1/(1 + C eps) (l2 and l1)
  double c_jl = 8.0;
  double jl_tol = 1e-12;
  double gram_tol = 1e-9;
  GramFactor gram = GramFactor::kEigen;
  double ext_tol = 1e-6;
  int ext_max_iter = 10000;
  Index cut_cap = 14;
  double dim_override = -1.0;  // negative: use estimate_doubling
  bool diagnostics = true;     // Lemma and product-rule checks during build
  bool keep_components = true; // keep cluster maps and smoothing after build
};

// Quantities fixed by the parameters and the input.
struct SingleScaleDerived {
  double net_radius = 0.0;
  double pad_radius = 0.0;
  double diameter_bound = 0.0;  // Delta actually used
  double c_pad_used = 0.0;
  double dim_hat = 0.0;
  double eps_pad = 0.0;
  Index m = 0;
  Index k_prime_max = 0;
  double gain = 1.0;     // m^-1/2 (l2), m^-1 (l1), 1/(1+2 sqrt(delta)) (l_inf)
  double rescale = 1.0;  // global factor applied last
};

// Per-cluster map f_C, shared by every partition that contains the cluster.
struct ClusterMap {
  IndexList members;  // domain-local indices, ascending
  Matrix coords;      // one row per member
  Index origin = 0;   // local row mapped to zero
  double achieved_error = 0.0;
  bool empty_net = false;  // l1/l_inf: no net member, contributes zeros
  int jl_tries = 0;
  bool jl_identity = true;
};

struct LemmaDiagnostics {
  bool enabled = false;
  Index clusters_checked = 0;
  Index partitions_checked = 0;
  Index lemma_i_violations = 0;    // ||f_C(x)|| > r
  Index lemma_ii_violations = 0;   // ||f_C(x)-f_C(y)|| > transform(d) or transform(d) > d
  Index lemma_iii_violations = 0;  // split pair with h(x) > d(x, y)
  Index product_rule_violations = 0;
  double lemma_i_max = 0.0;        // max ||f_C(x)|| / r
  double lemma_ii_max = 0.0;       // max ||f_C(x)-f_C(y)|| / transform(d)
  double product_rule_max = 0.0;   // max Lipschitz constant of phi_i on a cluster
  Index empty_net_clusters = 0;

  bool ok() const {
    return lemma_i_violations == 0 && lemma_ii_violations == 0 && lemma_iii_violations == 0 &&
           product_rule_violations == 0;
  }
};

struct SingleScaleEmbedding {
  SingleScaleParams params;
  SingleScaleDerived derived;
  Net net;
  IndexList domain;  // decomposed points (net members for l2, all of S otherwise)
  PaddedDecomposition decomposition;

  // Components, present when params.keep_components.
  std::vector<ClusterMap> cluster_maps;
  std::vector<std::vector<int>> partition_maps;   // [t][cluster id] -> cluster_maps index
  std::vector<std::vector<double>> smoothing;     // [t][domain-local] min(1, delta h / r)

  Matrix images;  // one row per point of S, final (after rescale)
  Index raw_dim = 0;     // columns of the literal direct sum
  Index stored_dim = 0;  // columns of `images`

  double net_lipschitz = 0.0;  // measured on net images before extension (l2)
  Index extended_points = 0;
  int max_sweeps = 0;
  double extension_violation = 0.0;
  LemmaDiagnostics lemma;

  Index size() const { return images.rows(); }
  Index dim() const { return images.cols(); }
};

// Steps: net, padded decomposition (of the net for l2, of S for l1/l_inf),
// per-cluster transform maps, smoothing, direct sum, extension (l2 only) and
// the global rescale. On PaddingUnachievable the diameter bound is enlarged
// by doubling c_pad up to max_enlarge times.
SingleScaleEmbedding build_single_scale(const PointSet& s, const SingleScaleParams& params);
// Same, reusing the pairwise distances of s.
SingleScaleEmbedding build_single_scale(const PointSet& s, const DistanceMatrix& d, const SingleScaleParams& params);

// Throws BadParams with the reason when the parameters are invalid.
void validate(const SingleScaleParams& params);

Vector evaluate(const SingleScaleEmbedding& e, Index point);

// phi_t(x) for a domain point before gluing and rescale, from the stored
// components: f_{P_t(x)}(x) * min(1, delta h / r), in the shared coordinates
// of partition t. Requires keep_components.
Vector partition_image(const SingleScaleEmbedding& e, std::size_t t, Index domain_local);

// Dimension bound of one scale as a function of the doubling estimate only:
// m = ceil(c_0 / eps * D * max(1, ln D)) partitions (D = max(1, dim)) times
// k' coordinates per partition, where clusters hold at most
// B = (3 c_pad D / (eps delta^2))^D net points and k' is
// ceil(c_jl eps^-2 ln B) (l2), B (l_inf) or 2^B (l1).
struct NominalDimension {
  Index m = 0;
  double k_prime = 0.0;
  double k = 0.0;       // m k'; may overflow to inf for l1
  double log2_k = 0.0;  // always finite
};

NominalDimension nominal_dimension(double dim_hat, double eps, double delta, Norm norm, double c_pad = 4.0,
                                   double c_0 = 2.0, double c_jl = 8.0);

struct ContractAudit {
  DistortionReport lipschitz;  // image / source over all pairs, bound [0, 1 + 1e-9]
  DistortionReport window;     // image / transform(source) over the stated window
  DistortionReport extended;   // same over [delta r / 2, 2 r / delta], no bound
  double max_norm = 0.0;
  double norm_bound = 0.0;     // r (1 + eps delta)
  double c_b = 0.0;            // measured: min window ratio = 1/(1 + c_b eps)
  double target_lo = 0.0;      // nominal targets for the window ratio
  double target_hi = 1.0;

  bool ok() const { return lipschitz.ok() && window.ok() && max_norm <= norm_bound; }
};

struct AuditBounds {
  double lipschitz_slack = 1e-9;
  double norm_slack = 1e-9;
  double c_b_max = 45.0;  // declared window lower bound 1/(1 + c_b_max eps) for l2/l1
};

// Exhaustive pair scan of the three contracts. The window is
// [delta r, r/delta] (l2, l1) or [delta r, r/sqrt(delta)] (l_inf). The l_inf
// declared band is [1/((1+eps)(1+2 sqrt(delta))), 1].
ContractAudit contract_audit(const SingleScaleEmbedding& e, const PointSet& s, const AuditBounds& bounds = {});

// Audited pairs for report emission: every pair with its source distance,
// image distance and transform value.
std::vector<PairSample> audit_pairs(const SingleScaleEmbedding& e, const PointSet& s);

// JSON header of the embedding dump: params, derived values, dimensions,
// lemma diagnostics and (when given) the audit constants.
std::string single_scale_json(const SingleScaleEmbedding& e, const ContractAudit* audit = nullptr);

}  // namespace lowdim
