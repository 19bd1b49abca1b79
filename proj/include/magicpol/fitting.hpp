#pragma once

#include <Eigen/Dense>

#include <functional>

namespace magicpol {

/// y(x; p) and optionally its gradient in p.
struct CurveModel {
  std::function<double(double x, const Eigen::VectorXd& p)> value;
  /// Fills grad (size p) at x. Central differences are used when empty.
  std::function<void(double x, const Eigen::VectorXd& p, Eigen::Ref<Eigen::VectorXd> grad)> gradient;
};

struct CurveFit {
  Eigen::VectorXd params;
  Eigen::MatrixXd covariance;  // (J^T W J)^-1, not rescaled by chi2
  double chi2 = 0.0;
  double gradient_norm = 0.0;  // max_i |g_i| sqrt(C_ii), g = J^T W r
  int iterations = 0;
  bool converged = false;
};

/// Weighted Levenberg-Marquardt fit of y = f(x; p) with per-point sigma.
/// Never throws on numerical trouble; converged is false instead.
CurveFit fit_curve(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& sigma,
                   const CurveModel& model, const Eigen::VectorXd& p0);

}  // namespace magicpol
