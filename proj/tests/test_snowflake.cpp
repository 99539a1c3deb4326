#include <doctest.h>

#include <cmath>

#include "lowdim/error.hpp"
#include "lowdim/generate.hpp"
#include "lowdim/kernels.hpp"
#include "lowdim/snowflake.hpp"
#include "oracles.hpp"

using namespace lowdim;

namespace {

PointSet small_set(Norm norm, Index n, std::uint64_t seed) {
  GenParams g;
  g.n = n;
  g.norm = norm;
  g.intrinsic = 2;
  g.ambient = 6;
  return generate("subspace", g, seed);
}

oracle::HP hp_M(double eps, long p, double alpha, int norm) {
  using boost::multiprecision::exp;
  using boost::multiprecision::pow;
  const oracle::HP base = 1 + oracle::HP(eps);
  oracle::HP sum = 0;
  for (long b = -p; b <= p; ++b) {
    if (!(2 * b > -p && 2 * b <= p)) continue;
    const oracle::HP t = pow(base, -b);
    const oracle::HP w = pow(base, oracle::HP(alpha) * b);
    if (norm == 2) {
      const oracle::HP g = oracle::gaussian(oracle::HP(1), t);
      sum += w * w * g * g;
    } else {
      sum += w * oracle::laplace(oracle::HP(1), t);
    }
  }
  return sum;
}

double brute_band(const Matrix& im, const PointSet& s, double alpha, Norm norm) {
  const int pn = norm == Norm::kL1 ? 1 : norm == Norm::kL2 ? 2 : 0;
  double lo = kInf, hi = 0.0;
  for (Index i = 0; i < s.size(); ++i)
    for (Index j = i + 1; j < s.size(); ++j) {
      std::vector<double> a(im.row(i).begin(), im.row(i).end()), b(im.row(j).begin(), im.row(j).end());
      std::vector<double> x(s.row(i).begin(), s.row(i).end()), y(s.row(j).begin(), s.row(j).end());
      const double r = oracle::lp(a, b, pn) / std::pow(oracle::lp(x, y, pn), alpha);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  return hi / lo;
}

}  // namespace

TEST_SUITE("snowflake") {
  TEST_CASE("scale plan: group count, delta and scale range") {
    const double l = std::log(1.1);
    const long q = static_cast<long>(std::ceil(std::log(10.0) / l));
    CHECK(q == 25);

    const SnowflakeParams half = scale_plan(1.0, 2.0, 0.5, 0.1);
    CHECK(half.p == 150);
    CHECK(half.delta == doctest::Approx(std::pow(1.1, -75.0)).epsilon(1e-12));
    CHECK(half.delta <= 1e-3);
    CHECK(half.delta >= 1e-3 / std::pow(1.1, 4.0));
    CHECK(half.i_lo == static_cast<Index>(std::ceil(std::log(1e-5) / l)));
    CHECK(half.i_hi == static_cast<Index>(std::floor(std::log(1e5) / l)));
    CHECK(half.i_lo == -120);
    CHECK(half.i_hi == 120);
    CHECK(half.scale_count() == 241);

    CHECK(scale_plan(1.0, 2.0, 0.7, 0.1).p == 250);
    CHECK(scale_plan(1.0, 2.0, 0.9, 0.1).p == 750);
    const SnowflakeParams wide = scale_plan(1000.0, 2.0, 0.5, 0.1);
    CHECK(wide.i_hi == static_cast<Index>(std::floor(std::log(1e8) / l)));

    CHECK_THROWS_AS(scale_plan(1.0, 2.0, 1.0, 0.1), Error);
    CHECK_THROWS_AS(scale_plan(1.0, 2.0, 0.5, 0.3), Error);
    CHECK_THROWS_AS(scale_plan(0.0, 2.0, 0.5, 0.1), Error);
  }

  TEST_CASE("normalizer sums against a high-precision oracle") {
    // p = 2 expands to b in {0, 1}.
    const double g1 = std::sqrt(1.0 - std::exp(-1.0));
    for (double eps : {0.05, 0.1, 0.2}) {
      const double gtt = std::sqrt(1.0 - std::exp(-1.0 / ((1 + eps) * (1 + eps))));
      const double expect = g1 * g1 + (1 + eps) * (1 + eps) * gtt * gtt;
      CHECK(static_cast<double>(compute_M(eps, 2)) == doctest::Approx(expect).epsilon(1e-14));
    }

    for (long p : {1L, 2L, 3L, 150L, 250L}) {
      const long double m = compute_M(0.1, p);
      CHECK(m > 0.0L);
      const oracle::HP ref = hp_M(0.1, p, 1.0, 2);
      CHECK(std::fabs(static_cast<double>((oracle::HP(m) - ref) / ref)) <= 1e-12);
      // alpha = 1 reproduces the literal sum
      CHECK(std::fabs(static_cast<double>(compute_M_alpha(0.1, p, 1.0, Norm::kL2) / m - 1.0L)) <= 1e-15);
    }
    for (double alpha : {0.5, 0.7}) {
      const long p = scale_plan(1.0, 1.0, alpha, 0.1).p;
      const oracle::HP r2 = hp_M(0.1, p, alpha, 2);
      const oracle::HP r1 = hp_M(0.1, p, alpha, 1);
      CHECK(std::fabs(static_cast<double>((oracle::HP(compute_M_alpha(0.1, p, alpha, Norm::kL2)) - r2) / r2)) <= 1e-12);
      CHECK(std::fabs(static_cast<double>((oracle::HP(compute_M_alpha(0.1, p, alpha, Norm::kL1)) - r1) / r1)) <= 1e-12);
      CHECK(static_cast<double>(compute_M_alpha(0.1, p, alpha, Norm::kLinf)) == 1.0);
    }
  }

  TEST_CASE("two points at distance one") {
    Matrix pts(2, 3);
    pts << 0, 0, 0, 1, 0, 0;
    const PointSet s = normalize(PointSet(pts, Norm::kL2));
    const SnowflakeEmbedding e = build_snowflake(s, 0.5, 0.1, 3);
    const double d = (e.images.row(0) - e.images.row(1)).norm();
    CHECK(std::fabs(d - 1.0) <= 16 * 0.1);
    CHECK(std::fabs(d - 1.0) <= 0.02);
  }

  TEST_CASE("group sums match the per-scale maps") {
    const PointSet s = normalize(small_set(Norm::kL2, 14, 5));
    const double alpha = 0.5, eps = 0.1;
    const SnowflakeEmbedding e = build_snowflake(s, alpha, eps, 11);
    const SnowflakeParams& p = e.params;
    REQUIRE(static_cast<Index>(e.scales.size()) == p.scale_count());
    REQUIRE(e.dim() == p.p * e.block);

    Matrix expect = Matrix::Zero(s.size(), e.dim());
    Index widest = 0;
    for (Index u = 0; u < p.scale_count(); ++u) {
      const Index i = p.i_lo + u;
      const SingleScaleEmbedding& one = e.scales[u];
      CHECK(one.params.r == doctest::Approx(std::pow(1.1, static_cast<double>(i))).epsilon(1e-12));
      CHECK(one.params.delta == p.delta);
      widest = std::max(widest, one.dim());
      const long j = ((i % p.p) + p.p) % p.p;
      const double w = 1.0 / std::pow(1.1, i * (1.0 - alpha));
      for (Index x = 0; x < s.size(); ++x)
        for (Index c = 0; c < one.dim(); ++c) expect(x, j * e.block + c) += w * one.images(x, c);
    }
    CHECK(widest == e.block);
    const double g = 1.0 / (1.0 + 40 * eps);
    const double norm = std::sqrt(static_cast<double>(compute_M_alpha(eps, p.p, alpha, Norm::kL2))) * g;
    CHECK(p.normalizer == doctest::Approx(norm).epsilon(1e-14));
    expect /= norm;
    CHECK((expect - e.images).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + expect.cwiseAbs().maxCoeff()));

    // nominal target dimension depends on dim_hat only
    const NominalDimension nd = nominal_dimension(p.dim_hat, eps, p.delta, Norm::kL2);
    CHECK(e.per_scale.k == nd.k);
    CHECK(e.target_dim == static_cast<double>(p.p) * nd.k);
  }

  TEST_CASE("distortion band and audit agree with a brute scan") {
    const PointSet s = normalize(small_set(Norm::kL2, 16, 2));
    for (double alpha : {0.5, 0.7}) {
      const SnowflakeEmbedding e = build_snowflake(s, alpha, 0.1, 1);
      const SnowflakeAudit a = distortion_audit(e, s);
      CHECK(a.ratios.pairs == 16 * 15 / 2);
      CHECK(a.band == doctest::Approx(brute_band(e.images, s, alpha, Norm::kL2)).epsilon(1e-12));
      CHECK(a.band <= 1.0 + 16 * 0.1);
      CHECK(a.ok());
      CHECK(a.tails.tail_checks > 0);
      CHECK(a.tails.window_mass_min > 0.9);
      CHECK(a.tails.window_mass_min <= 1.0);
    }
  }

  TEST_CASE("doubling the coordinates scales image distances by 2^alpha") {
    const PointSet raw = small_set(Norm::kL2, 12, 9);
    PointSet twice = raw;
    twice.points *= 2.0;
    const double alpha = 0.7;
    const PointSet a = normalize(raw), b = normalize(twice);
    const SnowflakeEmbedding ea = build_snowflake(a, alpha, 0.1, 4);
    const SnowflakeEmbedding eb = build_snowflake(b, alpha, 0.1, 4);
    const double band = distortion_audit(ea, a).band;
    for (Index i = 0; i < a.size(); ++i)
      for (Index j = i + 1; j < a.size(); ++j) {
        const double da = ea.raw_factor * (ea.images.row(i) - ea.images.row(j)).norm();
        const double db = eb.raw_factor * (eb.images.row(i) - eb.images.row(j)).norm();
        const double ratio = db / (da * std::pow(2.0, alpha));
        CHECK(ratio <= band * (1 + 1e-9));
        CHECK(ratio >= 1.0 / band / (1 + 1e-9));
      }
  }

  TEST_CASE("ultrametric through the squared distances") {
    GenParams g;
    g.depth = 4;
    g.square = true;
    const PointSet s = normalize(generate("ultrametric", g, 1));
    const SnowflakeEmbedding e = build_snowflake(s, 0.5, 0.1, 2);
    double lo = kInf, hi = 0.0;
    for (Index i = 0; i < s.size(); ++i)
      for (Index j = i + 1; j < s.size(); ++j) {
        const double r = (e.images.row(i) - e.images.row(j)).norm() / ultrametric_distance(i, j, g.ratio, false);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    CHECK(hi / lo <= 1.0 + 16 * 0.1);
  }

  TEST_CASE("l1 and l_inf snowflakes") {
    {
      const PointSet s = normalize(small_set(Norm::kL1, 9, 3));
      SnowflakeOptions opt;
      opt.base.cut_cap = 12;
      const SnowflakeEmbedding e = build_snowflake(s, 0.5, 0.1, 5, opt);
      CHECK(e.params.normalizer ==
            doctest::Approx(static_cast<double>(compute_M_alpha(0.1, e.params.p, 0.5, Norm::kL1)) / 5.0)
                .epsilon(1e-14));
      const SnowflakeAudit a = distortion_audit(e, s);
      CHECK(a.band == doctest::Approx(brute_band(e.images, s, 0.5, Norm::kL1)).epsilon(1e-12));
      CHECK(a.band <= 1.0 + 16 * 0.1);
    }
    {
      const PointSet s = normalize(small_set(Norm::kLinf, 24, 4));
      const SnowflakeEmbedding e = build_snowflake(s, 0.5, 0.1, 6);
      CHECK(e.params.normalizer == doctest::Approx(1.0 / (1.0 + 2.0 * std::sqrt(e.params.delta))).epsilon(1e-14));
      const SnowflakeAudit a = distortion_audit(e, s);
      CHECK(a.band == doctest::Approx(brute_band(e.images, s, 0.5, Norm::kLinf)).epsilon(1e-12));
      CHECK(a.band <= 1.0 + 16 * 0.1);
    }
  }

  TEST_CASE("scale errors carry the scale index") {
    const PointSet s = normalize(small_set(Norm::kL1, 20, 3));
    SnowflakeOptions opt;
    opt.base.cut_cap = 4;
    try {
      build_snowflake(s, 0.5, 0.1, 1, opt);
      FAIL("expected ClusterTooLarge");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::kClusterTooLarge);
      CHECK(std::string(err.what()).find("snowflake scale i=") != std::string::npos);
    }
  }

  TEST_CASE("determinism and manifest") {
    const PointSet s = normalize(small_set(Norm::kL2, 10, 8));
    const SnowflakeEmbedding a = build_snowflake(s, 0.5, 0.1, 42);
    const SnowflakeEmbedding b = build_snowflake(s, 0.5, 0.1, 42);
    CHECK(a.images == b.images);
    const SnowflakeAudit aa = distortion_audit(a, s), ab = distortion_audit(b, s);
    CHECK(snowflake_json(a, &aa) == snowflake_json(b, &ab));
    SnowflakeOptions lean;
    lean.keep_scales = false;
    const SnowflakeEmbedding c = build_snowflake(s, 0.5, 0.1, 42, lean);
    CHECK(c.images == a.images);
    CHECK(c.scales.empty());
    const std::string js = snowflake_json(a);
    CHECK(js.find("\"kind\":\"snowflake\"") != std::string::npos);
    CHECK(js.find("\"p\":150") != std::string::npos);
    CHECK(js.find("\"scales\":[") != std::string::npos);
  }
}
