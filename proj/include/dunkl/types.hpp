#pragma once

#include <Eigen/Dense>

namespace dunkl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

}  // namespace dunkl
