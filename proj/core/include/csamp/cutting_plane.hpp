#pragma once

#include <Eigen/Core>
#include <vector>

#include "csamp/bodies.hpp"

namespace csamp {

/// Localization ellipsoid {x : (x - center)^T shape^{-1} (x - center) <= 1}.
struct EllipsoidState {
  Eigen::VectorXd center;
  Eigen::MatrixXd shape;  // symmetric positive definite
};

/// Minimum-volume ellipsoid containing the half-ellipsoid
/// {x in E : <cut_normal, x - center> <= 0}. Volume shrinks by a factor of
/// at most exp(-1/(2(d+1))). Throws NumericalError when g^T P g <= 0.
EllipsoidState ellipsoid_step(const EllipsoidState& state, const Eigen::VectorXd& cut_normal);

struct CuttingPlaneResult {
  Eigen::VectorXd xhat;       // feasible approximate minimizer
  double certified_gap = 0.0; // upper bound on f(xhat) - min_K f
  long long separation_calls = 0;
  long long total_iterations = 0;
  std::vector<double> gap_trace;  // per-iteration certificate, when recorded
};

/// Minimizes f(x) = ||x - y||^2 / (2 eta) over the body using only its
/// separation oracle, returning a feasible point whose certified optimality
/// gap is at most gap_target. With gap_target = 1/d this is the
/// (1/d)-solution the separation-path RGO needs, and the returned point
/// satisfies ||xhat - proj_K(y)|| <= sqrt(2 eta / d).
CuttingPlaneResult minimize_quadratic(const ConvexBody& body, const Eigen::VectorXd& y,
                                      double eta, double gap_target,
                                      bool record_trace = false);

}  // namespace csamp
