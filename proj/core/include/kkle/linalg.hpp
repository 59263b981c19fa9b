#pragma once

#include <Eigen/Core>

namespace kkle {

using Index = Eigen::Index;

/// Row-major so that a sample (one row) is contiguous in memory.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Single-precision storage for large random-feature matrices.
using FloatMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// n x D matrix of i.i.d. samples, one sample per row.
using SampleSet = Matrix;

}  // namespace kkle
