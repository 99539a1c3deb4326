// lowdim command-line interface.
//
// Exit codes: 0 success, 2 audit violation beyond the declared bounds,
// 1 usage or runtime error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lowdim/applications.hpp"
#include "lowdim/doubling.hpp"
#include "lowdim/error.hpp"
#include "lowdim/generate.hpp"
#include "lowdim/kernels.hpp"
#include "lowdim/point_io.hpp"
#include "lowdim/report.hpp"
#include "lowdim/single_scale.hpp"
#include "lowdim/snowflake.hpp"

using namespace lowdim;
using json = nlohmann::ordered_json;

namespace {

constexpr int kAuditViolation = 2;

struct Globals {
  std::uint64_t seed = 0;
  double eps = 0.1;
  double delta = 0.1;
  double alpha = 0.5;
  std::string norm;  // empty: keep the input's tag
  std::string out;
  std::string format = "json";
};

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path, bool binary = false) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, binary ? std::ios::binary : std::ios::out);
    if (!*file_) throw Error(ErrorCode::kIo, "cannot open " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

PointSet load_input(const std::string& path, const Globals& g) {
  PointSet s = load_points(path);
  if (!g.norm.empty()) s.norm = parse_norm(g.norm);
  return normalize(s);
}

void write_binary(const std::string& path, const std::string& header, const Matrix& images) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path);
  write_dump(f, header, images);
}

int run_gen(const std::string& kind, const GenParams& params, const Globals& g) {
  GenParams p = params;
  if (!g.norm.empty()) p.norm = parse_norm(g.norm);
  const PointSet s = generate(kind, p, g.seed);
  if (g.out.empty()) {
    write_points(std::cout, s, g.format == "json" ? PointFormat::kJson : PointFormat::kCsv);
  } else {
    save_points(g.out, s);
  }
  return 0;
}

int run_stats(const std::string& path, const Globals& g) {
  const PointSet s = load_input(path, g);
  const DistanceMatrix d = kernels::pairwise_distances(s.points, s.norm);
  const DoublingEstimate est = estimate_doubling(d);
  json j;
  j["n"] = s.size();
  j["ambient"] = s.dim();
  j["norm"] = std::string(to_string(s.norm));
  j["scale"] = s.scale;
  j["diameter"] = d.max();
  j["aspect_ratio"] = d.max() / d.min_offdiagonal();
  j["lambda_hat"] = est.lambda_hat;
  j["dim_hat"] = est.dim_hat;
  Sink sink(g.out);
  if (g.format == "csv") {
    sink.stream() << "n,ambient,norm,scale,diameter,aspect_ratio,lambda_hat,dim_hat\n"
                  << s.size() << ',' << s.dim() << ',' << to_string(s.norm) << ',' << format_double(s.scale) << ','
                  << format_double(d.max()) << ',' << format_double(d.max() / d.min_offdiagonal()) << ','
                  << format_double(est.lambda_hat) << ',' << format_double(est.dim_hat) << '\n';
  } else {
    sink.stream() << j.dump(2) << '\n';
  }
  return 0;
}

struct ScaleOpts {
  double r = 1.0;
  Index cut_cap = 14;
  double dim = -1.0;
  std::string dump;
};

SingleScaleParams scale_params(const ScaleOpts& o, const Globals& g, Norm norm) {
  SingleScaleParams p;
  p.r = o.r;
  p.delta = g.delta;
  p.eps = g.eps;
  p.norm = norm;
  p.seed = g.seed;
  p.cut_cap = o.cut_cap;
  p.dim_override = o.dim;
  return p;
}

int run_embed_scale(const std::string& path, const ScaleOpts& o, const Globals& g) {
  const PointSet s = load_input(path, g);
  const SingleScaleEmbedding e = build_single_scale(s, scale_params(o, g, s.norm));
  const ContractAudit a = contract_audit(e, s);
  const std::string header = single_scale_json(e, &a);
  if (!o.dump.empty()) write_binary(o.dump, header, e.images);
  Sink sink(g.out);
  if (g.format == "csv")
    write_report_csv(sink.stream(), audit_pairs(e, s), a.window.window_lo, a.window.window_hi);
  else
    sink.stream() << json::parse(header).dump(2) << '\n';
  return a.ok() ? 0 : kAuditViolation;
}

struct SnowOpts {
  Index cut_cap = 14;
  std::string dump;
};

SnowflakeEmbedding snowflake_for(const PointSet& s, const SnowOpts& o, const Globals& g) {
  SnowflakeOptions opt;
  opt.base.cut_cap = o.cut_cap;
  return build_snowflake(s, g.alpha, g.eps, g.seed, opt);
}

int run_embed_snowflake(const std::string& path, const SnowOpts& o, const Globals& g) {
  const PointSet s = load_input(path, g);
  const SnowflakeEmbedding e = snowflake_for(s, o, g);
  const SnowflakeAudit a = distortion_audit(e, s);
  const std::string header = snowflake_json(e, &a);
  if (!o.dump.empty()) write_binary(o.dump, header, e.images);
  Sink sink(g.out);
  if (g.format == "csv")
    write_report_csv(sink.stream(), snowflake_pairs(e, s), 0.0, kInf);
  else
    sink.stream() << json::parse(header).dump(2) << '\n';
  return a.ok() ? 0 : kAuditViolation;
}

int run_audit_report(const std::string& path, const std::string& mode, const ScaleOpts& so, const Globals& g) {
  const PointSet s = load_input(path, g);
  std::vector<PairSample> pairs;
  json summary;
  double lo = 0.0, hi = kInf;
  bool ok = true;
  if (mode == "scale") {
    const SingleScaleEmbedding e = build_single_scale(s, scale_params(so, g, s.norm));
    const ContractAudit a = contract_audit(e, s);
    pairs = audit_pairs(e, s);
    lo = a.window.window_lo;
    hi = a.window.window_hi;
    summary = {{"kind", "single-scale"},
               {"lipschitz", report_json(a.lipschitz)},
               {"window", report_json(a.window)},
               {"extended", report_json(a.extended)},
               {"max_norm", a.max_norm},
               {"norm_bound", a.norm_bound},
               {"c_b", a.c_b}};
    ok = a.ok();
  } else {
    SnowOpts o;
    o.cut_cap = so.cut_cap;
    const SnowflakeEmbedding e = snowflake_for(s, o, g);
    const SnowflakeAudit a = distortion_audit(e, s);
    pairs = snowflake_pairs(e, s);
    summary = {{"kind", "snowflake"},
               {"ratios", report_json(a.ratios)},
               {"band", a.band},
               {"c", a.c},
               {"band_bound", a.band_bound}};
    ok = a.ok();
  }
  if (g.format == "csv") {
    Sink sink(g.out);
    write_report_csv(sink.stream(), pairs, lo, hi);
    // JSON summary alongside the CSV
    if (!g.out.empty() && g.out != "-") {
      std::string side = g.out;
      const auto dot = side.rfind('.');
      side = (dot == std::string::npos ? side : side.substr(0, dot)) + ".json";
      std::ofstream f(side);
      if (!f) throw Error(ErrorCode::kIo, "cannot open " + side);
      f << summary.dump(2) << '\n';
    }
  } else {
    Sink sink(g.out);
    sink.stream() << summary.dump(2) << '\n';
  }
  return ok ? 0 : kAuditViolation;
}

int run_dls_build(const std::string& path, const SnowOpts& o, const Globals& g) {
  if (g.out.empty()) throw Error(ErrorCode::kBadParams, "dls build needs --out");
  const PointSet s = load_input(path, g);
  const SnowflakeEmbedding e = snowflake_for(s, o, g);
  const LabelSet set = dls_build(e, g.eps);
  {
    Sink sink(g.out, true);
    write_labels(sink.stream(), set);
  }
  const DistanceMatrix d = kernels::pairwise_distances(s.points, s.norm);
  const double bits = label_bits(set);
  const double ref = set.header.k * std::log2(d.max() / (g.eps / (2.0 * set.header.k)));
  json j = {{"labels", set.labels.size()}, {"k", set.header.k},   {"q", set.header.q},
            {"r_ref", set.r_ref},          {"label_bits", bits},  {"reference_bits", ref},
            {"bits_ratio", bits / ref}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

int run_dls_query(const std::string& path, Index i, Index j, const Globals& g) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path);
  const LabelSet set = read_labels(f);
  const auto n = static_cast<Index>(set.labels.size());
  if (i < 0 || j < 0 || i >= n || j >= n) throw Error(ErrorCode::kIndexOutOfRange, "label index out of range");
  const DlsEstimate est = dls_query(set.header, set.labels[i], set.header, set.labels[j], g.eps);
  json out = {{"i", i},
              {"j", j},
              {"snowflaked", est.snowflaked},
              {"original", est.original},
              {"slack", est.slack},
              {"snowflaked_factor", est.snowflaked_factor},
              {"original_factor", est.original_factor}};
  Sink sink(g.out);
  sink.stream() << out.dump(2) << '\n';
  return 0;
}

int run_cluster_demo(const std::string& path, Index k, const SnowOpts& o, const Globals& g) {
  const PointSet s = load_input(path, g);
  const SnowflakeEmbedding e = snowflake_for(s, o, g);
  const DistanceMatrix d = kernels::pairwise_distances(s.points, s.norm);
  DistanceMatrix da(s.size());
  for (Index x = 0; x < s.size(); ++x)
    for (Index y = 0; y < s.size(); ++y) da.at(x, y) = std::pow(d(x, y), g.alpha);
  const KCenterResult emb = kcenter_greedy(e.images, e.params.norm, k);
  const KCenterResult direct = kcenter_greedy(s.points, s.norm, k);
  const double via = cover_radius(da, emb.centers);
  const double dir = cover_radius(da, direct.centers);
  json j = {{"k", k},
            {"centers", emb.centers},
            {"radius_embedded", emb.radius},
            {"radius_snowflaked", via},
            {"radius_direct_snowflaked", dir},
            {"ratio", dir > 0.0 ? via / dir : 1.0}};
  Sink sink(g.out);
  sink.stream() << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-distortion dimension reduction for doubling point sets"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  auto open_unit = [](double lo, double hi, const char* name) {
    return CLI::Validator(
        [=](std::string& v) -> std::string {
          double x = 0.0;
          try {
            x = std::stod(v);
          } catch (const std::exception&) {
            return std::string(name) + " expects a number";
          }
          if (!(x > lo && x < hi)) return std::string(name) + " must lie in the open interval (" +
                                          std::to_string(lo) + ", " + std::to_string(hi) + ")";
          return {};
        },
        "OPEN-INTERVAL");
  };
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--eps", g.eps, "Accuracy, 0 < eps < 1/4")->check(open_unit(0.0, 0.25, "--eps"));
  app.add_option("--delta", g.delta, "Single-scale range, 0 < delta < 1/4")->check(open_unit(0.0, 0.25, "--delta"));
  app.add_option("--alpha", g.alpha, "Snowflake exponent, 0 < alpha < 1")->check(open_unit(0.0, 1.0, "--alpha"));
  app.add_option("--norm", g.norm, "l1, l2 or linf")->check(CLI::IsMember({"l1", "l2", "linf"}));
  app.add_option("--out", g.out, "Output path (stdout when omitted)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::function<int()> action;

  // gen
  auto* gen = app.add_subcommand("gen", "Write a synthetic point set");
  std::string kind;
  GenParams gp;
  gen->add_option("kind", kind, "line, grid, subspace, ball or ultrametric")
      ->required()
      ->check(CLI::IsMember({"line", "grid", "subspace", "ball", "ultrametric"}));
  gen->add_option("--n", gp.n, "Points (line, subspace, ball)");
  gen->add_option("--side", gp.side, "Grid side");
  gen->add_option("--grid-dim", gp.grid_dim, "Grid dimension");
  gen->add_option("--intrinsic", gp.intrinsic, "Subspace dimension");
  gen->add_option("--ambient", gp.ambient, "Ambient dimension");
  gen->add_option("--noise", gp.noise, "Subspace noise");
  gen->add_option("--depth", gp.depth, "Ultrametric depth");
  gen->add_option("--ratio", gp.ratio, "Ultrametric level ratio");
  gen->add_flag("--square", gp.square, "Ultrametric: realize squared distances");
  gen->callback([&] { action = [&] { return run_gen(kind, gp, g); }; });

  std::string input;

  auto* stats = app.add_subcommand("stats", "Doubling estimate and diameter");
  stats->add_option("input", input, "Point file")->required();
  stats->callback([&] { action = [&] { return run_stats(input, g); }; });

  ScaleOpts so;
  auto* es = app.add_subcommand("embed-scale", "Single-scale embedding with its contract audit");
  es->add_option("input", input, "Point file")->required();
  es->add_option("--r", so.r, "Scale r > 0 (normalized units)")->check(CLI::PositiveNumber);
  es->add_option("--cut-cap", so.cut_cap, "Largest l1 cluster for the cut LP");
  es->add_option("--dim", so.dim, "Doubling dimension to use instead of the estimate");
  es->add_option("--dump", so.dump, "Write the embedding dump here");
  es->callback([&] { action = [&] { return run_embed_scale(input, so, g); }; });

  SnowOpts sn;
  auto* esf = app.add_subcommand("embed-snowflake", "Snowflake embedding with its distortion audit");
  esf->add_option("input", input, "Point file")->required();
  esf->add_option("--cut-cap", sn.cut_cap, "Largest l1 cluster for the cut LP");
  esf->add_option("--dump", sn.dump, "Write the embedding dump here");
  esf->callback([&] { action = [&] { return run_embed_snowflake(input, sn, g); }; });

  auto* dls = app.add_subcommand("dls", "Distance labels");
  dls->require_subcommand(1);
  auto* dls_b = dls->add_subcommand("build", "Build a label file from a point set");
  dls_b->add_option("input", input, "Point file")->required();
  dls_b->callback([&] { action = [&] { return run_dls_build(input, sn, g); }; });
  auto* dls_q = dls->add_subcommand("query", "Estimate a distance from two labels");
  Index qi = 0, qj = 0;
  dls_q->add_option("labels", input, "Label file")->required();
  dls_q->add_option("i", qi, "First label")->required();
  dls_q->add_option("j", qj, "Second label")->required();
  dls_q->callback([&] { action = [&] { return run_dls_query(input, qi, qj, g); }; });

  auto* ar = app.add_subcommand("audit-report", "Per-pair audit report (CSV) with a JSON summary");
  std::string mode = "snowflake";
  ar->add_option("input", input, "Point file")->required();
  ar->add_option("--mode", mode, "scale or snowflake")->check(CLI::IsMember({"scale", "snowflake"}));
  ar->add_option("--r", so.r, "Scale r for --mode scale")->check(CLI::PositiveNumber);
  ar->add_option("--cut-cap", so.cut_cap, "Largest l1 cluster for the cut LP");
  ar->callback([&] { action = [&] { return run_audit_report(input, mode, so, g); }; });

  auto* cd = app.add_subcommand("cluster-demo", "Greedy k-center on the snowflake images");
  Index kc = 4;
  cd->add_option("input", input, "Point file")->required();
  cd->add_option("--k", kc, "Number of centers")->check(CLI::PositiveNumber);
  cd->callback([&] { action = [&] { return run_cluster_demo(input, kc, sn, g); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    return action ? action() : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
