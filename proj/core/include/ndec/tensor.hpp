#pragma once

#include <Eigen/Core>

namespace ndec {

/// Batch-major dense matrix: one example per row.
using Tensor2 = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;

}  // namespace ndec
