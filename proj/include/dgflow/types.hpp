#pragma once

#include <Eigen/Dense>

namespace dgflow {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace dgflow
