#pragma once

#include <Eigen/Dense>

namespace levygrad {

// State dimension is bounded so vectors and matrices live on the stack; the
// flow hot loop performs no heap allocation.
inline constexpr int kMaxDim = 8;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                          kMaxDim, kMaxDim>;

inline Vec unit_vector(int dim, int k) {
  Vec e = Vec::Zero(dim);
  e(k) = 1.0;
  return e;
}

}  // namespace levygrad
