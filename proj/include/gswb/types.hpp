#pragma once

#include <Eigen/Dense>

namespace gswb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace gswb
