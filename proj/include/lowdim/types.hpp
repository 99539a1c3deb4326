#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace lowdim {

using Index = std::ptrdiff_t;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using IndexList = std::vector<Index>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Which l_p norm a point set (or an embedding target) is measured in.
enum class Norm { kL1, kL2, kLinf };

std::string_view to_string(Norm norm);
// Accepts "1", "l1", "2", "l2", "inf", "linf".
Norm parse_norm(std::string_view text);

// l_p distance between two equally sized rows.
template <typename A, typename B>
double norm_distance(const A& a, const B& b, Norm norm) {
  switch (norm) {
    case Norm::kL1:
      return (a - b).template lpNorm<1>();
    case Norm::kL2:
      return (a - b).norm();
    case Norm::kLinf:
      return (a - b).template lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

template <typename A>
double norm_length(const A& a, Norm norm) {
  switch (norm) {
    case Norm::kL1:
      return a.template lpNorm<1>();
    case Norm::kL2:
      return a.norm();
    case Norm::kLinf:
      return a.template lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

}  // namespace lowdim
