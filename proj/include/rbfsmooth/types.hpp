#pragma once

#include <Eigen/Dense>

namespace rbfs {

// Point sets are stored one point per row: N x d.
using PointSet = Eigen::MatrixXd;
using Point = Eigen::VectorXd;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// A single point: a row of a PointSet or any vector of length d.
using PointRef = Eigen::Ref<const Eigen::RowVectorXd, 0, Eigen::InnerStride<>>;

inline constexpr double kPi = 3.14159265358979323846;

// (2 pi)^{d/2}
double two_pi_pow_half_d(int d);

}  // namespace rbfs
