#pragma once

// Independent reference computations used by the tests. These deliberately
// avoid the library's own helpers.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <vector>

namespace oracle {

using HP = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<80>>;  // ~256 bits

inline HP gaussian(const HP& r, const HP& t) {
  using boost::multiprecision::exp;
  using boost::multiprecision::sqrt;
  return r * sqrt(1 - exp(-(t * t) / (r * r)));
}

inline HP laplace(const HP& r, const HP& t) {
  using boost::multiprecision::exp;
  return r * (1 - exp(-t / r));
}

// Brute-force pairwise l_p distance of two coordinate vectors.
inline double lp(const std::vector<double>& a, const std::vector<double>& b, int p) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = std::fabs(a[k] - b[k]);
    if (p == 1) acc += d;
    else if (p == 2) acc += d * d;
    else acc = std::max(acc, d);
  }
  return p == 2 ? std::sqrt(acc) : acc;
}

}  // namespace oracle
