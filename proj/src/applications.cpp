#include "lowdim/applications.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>

#include "lowdim/error.hpp"

namespace lowdim {

static_assert(std::endian::native == std::endian::little, "dump and label formats assume a little-endian host");

namespace {

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error(ErrorCode::kIo, "truncated label file");
  return v;
}

constexpr char kMagic[4] = {'S', 'N', 'F', 'L'};
constexpr std::uint16_t kVersion = 1;

}  // namespace

void write_dump(std::ostream& out, const std::string& header_json, const Matrix& images) {
  nlohmann::ordered_json h = nlohmann::ordered_json::parse(header_json);
  h["layout"] = {{"rows", images.rows()}, {"cols", images.cols()}, {"dtype", "f64le"}, {"order", "row-major"}};
  out << h.dump() << '\n';
  out.write(reinterpret_cast<const char*>(images.data()),
            static_cast<std::streamsize>(images.size() * static_cast<Index>(sizeof(double))));
  if (!out) throw Error(ErrorCode::kIo, "dump write failed");
}

Dump read_dump(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kIo, "missing dump header");
  Dump d;
  try {
    d.header = nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kIo, std::string("bad dump header: ") + ex.what());
  }
  const auto& lay = d.header.at("layout");
  const Index rows = lay.at("rows").get<Index>(), cols = lay.at("cols").get<Index>();
  d.images.resize(rows, cols);
  const auto bytes = static_cast<std::streamsize>(rows * cols * static_cast<Index>(sizeof(double)));
  if (!in.read(reinterpret_cast<char*>(d.images.data()), bytes)) throw Error(ErrorCode::kIo, "truncated dump");
  return d;
}

LabelSet dls_build(const SnowflakeEmbedding& e, double eps) {
  return dls_build(e.images, e.params.alpha, e.params.normalizer, e.scale, eps);
}

LabelSet dls_build(const Matrix& images, double alpha, double M, double scale, double eps) {
  if (!(eps > 0.0 && eps < 0.25)) throw Error(ErrorCode::kBadParams, "eps must lie in (0, 1/4)");
  const Index k = images.cols();
  if (k > std::numeric_limits<std::uint32_t>::max()) throw Error(ErrorCode::kBadParams, "label dimension too large");
  LabelSet set;
  set.header.k = static_cast<std::uint32_t>(k);
  set.header.alpha = alpha;
  set.header.M = M;
  set.header.scale = scale;
  set.r_ref = images.size() > 0 ? images.cwiseAbs().maxCoeff() : 0.0;
  set.header.q = set.r_ref > 0.0 && k > 0 ? eps * set.r_ref / (2.0 * static_cast<double>(k)) : 1.0;
  // |v| / q <= 2k / eps must fit an i32.
  if (2.0 * static_cast<double>(k) / eps >= 2147483647.0)
    throw Error(ErrorCode::kBadParams, "label dimension too large for 32-bit coordinates");
  set.labels.resize(images.rows());
  for (Index x = 0; x < images.rows(); ++x) {
    DistanceLabel& l = set.labels[x];
    l.id = static_cast<std::uint64_t>(x);
    l.coords.resize(k);
    for (Index c = 0; c < k; ++c) l.coords[c] = static_cast<std::int32_t>(std::llround(images(x, c) / set.header.q));
  }
  return set;
}

Vector dequantize(const LabelHeader& h, const DistanceLabel& a) {
  Vector v(static_cast<Index>(a.coords.size()));
  for (std::size_t c = 0; c < a.coords.size(); ++c) v[static_cast<Index>(c)] = h.q * a.coords[c];
  return v;
}

DlsEstimate dls_query(const LabelHeader& ha, const DistanceLabel& a, const LabelHeader& hb, const DistanceLabel& b,
                      double eps) {
  if (!(ha == hb)) throw Error(ErrorCode::kHeaderMismatch, "labels come from different label sets");
  if (a.coords.size() != ha.k || b.coords.size() != ha.k)
    throw Error(ErrorCode::kHeaderMismatch, "label length differs from the header's k");
  double acc = 0.0;
  for (std::size_t c = 0; c < a.coords.size(); ++c) {
    const double diff = ha.q * (static_cast<double>(a.coords[c]) - static_cast<double>(b.coords[c]));
    acc += diff * diff;
  }
  DlsEstimate est;
  est.snowflaked = std::sqrt(acc);
  est.original = std::pow(est.snowflaked, 1.0 / ha.alpha) * ha.scale;
  est.slack = std::sqrt(static_cast<double>(ha.k)) * ha.q;
  est.snowflaked_factor = 1.0 + 3.0 * eps + est.slack;
  est.original_factor = std::pow(est.snowflaked_factor, 1.0 / ha.alpha);
  return est;
}

double label_bits(const LabelSet& set) {
  std::int64_t lo = 0, hi = 0;
  for (const DistanceLabel& l : set.labels)
    for (std::int32_t v : l.coords) {
      lo = std::min<std::int64_t>(lo, v);
      hi = std::max<std::int64_t>(hi, v);
    }
  const double levels = static_cast<double>(hi - lo + 1);
  return static_cast<double>(set.header.k) * std::ceil(std::log2(levels));
}

void write_labels(std::ostream& out, const LabelSet& set) {
  out.write(kMagic, 4);
  put(out, kVersion);
  put(out, set.header.k);
  put(out, set.header.q);
  put(out, set.header.alpha);
  put(out, set.header.M);
  put(out, set.header.scale);
  for (const DistanceLabel& l : set.labels) {
    if (l.coords.size() != set.header.k) throw Error(ErrorCode::kHeaderMismatch, "label length differs from k");
    put(out, l.id);
    out.write(reinterpret_cast<const char*>(l.coords.data()),
              static_cast<std::streamsize>(l.coords.size() * sizeof(std::int32_t)));
  }
  if (!out) throw Error(ErrorCode::kIo, "label write failed");
}

LabelSet read_labels(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw Error(ErrorCode::kIo, "not a label file");
  if (get<std::uint16_t>(in) != kVersion) throw Error(ErrorCode::kHeaderMismatch, "unsupported label version");
  LabelSet set;
  set.header.k = get<std::uint32_t>(in);
  set.header.q = get<double>(in);
  set.header.alpha = get<double>(in);
  set.header.M = get<double>(in);
  set.header.scale = get<double>(in);
  while (in.peek() != std::char_traits<char>::eof()) {
    DistanceLabel l;
    l.id = get<std::uint64_t>(in);
    l.coords.resize(set.header.k);
    const auto bytes = static_cast<std::streamsize>(set.header.k * sizeof(std::int32_t));
    if (!in.read(reinterpret_cast<char*>(l.coords.data()), bytes)) throw Error(ErrorCode::kIo, "truncated label");
    set.labels.push_back(std::move(l));
  }
  for (const DistanceLabel& l : set.labels)
    for (std::int32_t v : l.coords) set.r_ref = std::max(set.r_ref, std::fabs(set.header.q * v));
  return set;
}

KCenterResult kcenter_greedy(const Matrix& points, Norm norm, Index k) {
  const Index n = points.rows();
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "k-center on an empty set");
  if (k < 1) throw Error(ErrorCode::kBadParams, "k must be positive");
  KCenterResult out;
  out.assignment.assign(n, 0);
  std::vector<double> dist(n, kInf);
  Index next = 0;
  for (Index c = 0; c < std::min(k, n); ++c) {
    out.centers.push_back(next);
    for (Index x = 0; x < n; ++x) {
      const double dx = norm_distance(points.row(x), points.row(next), norm);
      if (dx < dist[x]) {
        dist[x] = dx;
        out.assignment[x] = c;
      }
    }
    next = static_cast<Index>(std::max_element(dist.begin(), dist.end()) - dist.begin());
  }
  out.radius = *std::max_element(dist.begin(), dist.end());
  return out;
}

double cover_radius(const DistanceMatrix& d, const IndexList& centers) {
  double r = 0.0;
  for (Index x = 0; x < d.size(); ++x) {
    double best = kInf;
    for (Index c : centers) best = std::min(best, d(x, c));
    r = std::max(r, best);
  }
  return r;
}

}  // namespace lowdim
