#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace rtsa {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using StepIndex = std::uint64_t;

}  // namespace rtsa
