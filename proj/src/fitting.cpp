#include "magicpol/fitting.hpp"

#include <unsupported/Eigen/LevenbergMarquardt>

#include <cmath>

#include "magicpol/errors.hpp"

namespace magicpol {

namespace {

struct Residuals : Eigen::DenseFunctor<double> {
  Residuals(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& sigma,
            const CurveModel& model, int n_params)
      : Eigen::DenseFunctor<double>(n_params, static_cast<int>(x.size())),
        x(x), y(y), sigma(sigma), model(model) {}

  int operator()(const InputType& p, ValueType& r) const {
    for (Eigen::Index i = 0; i < x.size(); ++i) r(i) = (model.value(x(i), p) - y(i)) / sigma(i);
    return 0;
  }

  int df(const InputType& p, JacobianType& J) const {
    Eigen::VectorXd g(p.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      gradient(x(i), p, g);
      J.row(i) = g.transpose() / sigma(i);
    }
    return 0;
  }

  void gradient(double xi, const Eigen::VectorXd& p, Eigen::VectorXd& g) const {
    if (model.gradient) {
      model.gradient(xi, p, g);
      return;
    }
    Eigen::VectorXd q = p;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(p(k)));
      q(k) = p(k) + h;
      const double up = model.value(xi, q);
      q(k) = p(k) - h;
      const double dn = model.value(xi, q);
      q(k) = p(k);
      g(k) = (up - dn) / (2 * h);
    }
  }

  const Eigen::VectorXd& x;
  const Eigen::VectorXd& y;
  const Eigen::VectorXd& sigma;
  const CurveModel& model;
};

}  // namespace

CurveFit fit_curve(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& sigma,
                   const CurveModel& model, const Eigen::VectorXd& p0) {
  if (x.size() != y.size() || x.size() != sigma.size())
    throw ValidationError("fit_curve: x, y and sigma sizes differ");
  if (x.size() < p0.size()) throw ValidationError("fit_curve: fewer points than parameters");
  if ((sigma.array() <= 0.0).any()) throw ValidationError("fit_curve: sigma must be > 0");

  Residuals f(x, y, sigma, model, static_cast<int>(p0.size()));
  Eigen::LevenbergMarquardt<Residuals> lm(f);
  lm.setMaxfev(2000);
  lm.setXtol(1e-12);
  lm.setFtol(1e-12);
  CurveFit out;
  out.params = p0;
  const auto status = lm.minimize(out.params);
  out.iterations = static_cast<int>(lm.iterations());

  Eigen::VectorXd r(x.size());
  f(out.params, r);
  out.chi2 = r.squaredNorm();
  Eigen::MatrixXd J(x.size(), p0.size());
  f.df(out.params, J);
  const Eigen::MatrixXd JtJ = J.transpose() * J;
  const Eigen::VectorXd g = J.transpose() * r;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(JtJ);
  lu.setThreshold(1e-12);
  const bool invertible = lu.isInvertible() && out.params.allFinite();
  out.covariance = invertible ? Eigen::MatrixXd(lu.inverse())
                              : Eigen::MatrixXd::Constant(p0.size(), p0.size(), std::nan(""));
  double gnorm = 0.0;
  for (Eigen::Index k = 0; k < g.size(); ++k)
    gnorm = std::max(gnorm, std::abs(g(k)) * std::sqrt(std::abs(out.covariance(k, k))));
  out.gradient_norm = invertible ? gnorm : std::nan("");

  using namespace Eigen::LevenbergMarquardtSpace;
  const bool stopped_ok = status == RelativeReductionTooSmall || status == RelativeErrorTooSmall ||
                          status == RelativeErrorAndReductionTooSmall || status == CosinusTooSmall ||
                          status == FtolTooSmall || status == XtolTooSmall || status == GtolTooSmall;
  out.converged = stopped_ok && invertible && out.covariance.allFinite() &&
                  (out.covariance.diagonal().array() >= 0.0).all() && gnorm < 1e-3;
  return out;
}

}  // namespace magicpol
