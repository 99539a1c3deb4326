// Serial reference vs OpenMP kernels on synthetic sets.
// Usage: bench_kernels [n] [ambient] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>

#include "lowdim/kernels.hpp"

using namespace lowdim;
namespace k = lowdim::kernels;

namespace {

double best_of(int repeats, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-28s %12.6f %12.6f %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const Index n = argc > 1 ? std::atol(argv[1]) : 1500;
  const Index dim = argc > 2 ? std::atol(argv[2]) : 50;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 3;

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Matrix pts(n, dim);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < dim; ++j) pts(i, j) = g(rng);
  std::vector<int> labels(n);
  for (Index i = 0; i < n; ++i) labels[i] = static_cast<int>(i % 17);
  Vector weights = Vector::Ones(n);
  for (Index i = 0; i < n; ++i) weights[i] = 0.5 + 0.5 * static_cast<double>(i % 7) / 7.0;

  std::printf("n=%ld ambient=%ld threads=%d best of %d\n", static_cast<long>(n), static_cast<long>(dim),
              omp_get_max_threads(), repeats);
  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial [s]", "parallel [s]", "speedup");

  DistanceMatrix d;
  for (Norm norm : {Norm::kL1, Norm::kL2, Norm::kLinf}) {
    const std::string label = "pairwise_distances " + std::string(to_string(norm));
    row(label.c_str(), best_of(repeats, [&] { d = k::serial::pairwise_distances(pts, norm); }),
        best_of(repeats, [&] { d = k::parallel::pairwise_distances(pts, norm); }));
  }
  d = k::parallel::pairwise_distances(pts, Norm::kL2);
  std::vector<double> cond;
  row("condensed_distances l2", best_of(repeats, [&] { cond = k::serial::condensed_distances(pts, Norm::kL2); }),
      best_of(repeats, [&] { cond = k::parallel::condensed_distances(pts, Norm::kL2); }));
  std::vector<double> h;
  row("distance_to_other_clusters", best_of(repeats, [&] { h = k::serial::distance_to_other_clusters(d, labels); }),
      best_of(repeats, [&] { h = k::parallel::distance_to_other_clusters(d, labels); }));
  k::RatioExtremes ext;
  row("ratio_extremes", best_of(repeats, [&] { ext = k::serial::ratio_extremes(cond, d); }),
      best_of(repeats, [&] { ext = k::parallel::ratio_extremes(cond, d); }));
  Matrix gram = Matrix::Zero(n, n);
  row("accumulate_scaled_gram", best_of(repeats, [&] { k::serial::accumulate_scaled_gram(gram, pts, weights, 0.5); }),
      best_of(repeats, [&] { k::parallel::accumulate_scaled_gram(gram, pts, weights, 0.5); }));
  std::printf("checksum %.6g %.6g %.6g\n", h[0], ext.max, gram(0, 0));
  return 0;
}
