#pragma once

#include <Eigen/Core>

namespace swarm_lssvm {

/// Row-major so that each sample is a contiguous span.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

} // namespace swarm_lssvm
