#pragma once

// Unpenalized logistic regression by iteratively reweighted least squares.

#include <Eigen/Dense>
#include <cmath>

#include "cogwear/learn/metrics.hpp"
#include "cogwear/learn/model.hpp"

namespace cogwear {

struct LogisticOptions {
  double gradient_tolerance = 1e-8;  // on the mean log-likelihood gradient
  int max_iterations = 100;
  double saturation = 30.0;  // |linear score| flagged as separation
};

inline TrainedModel fit_logistic(const FeatureMatrix& x_in, std::span<const int> y, const LogisticOptions& opt = {}) {
  detail::require_complete(x_in, "fit_logistic");
  detail::require_binary(y, x_in.rows(), "fit_logistic");
  std::size_t pos = 0;
  for (int v : y) pos += static_cast<std::size_t>(v);
  if (pos == 0 || pos == y.size()) throw Error("fit_logistic: degenerate outcome (a single class)");

  const FeatureMatrix x = expand_nominal(x_in);
  const auto n = static_cast<Eigen::Index>(x.rows());
  const auto p = static_cast<Eigen::Index>(x.cols()) + 1;
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd yy(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    for (Eigen::Index j = 1; j < p; ++j) X(i, j) = x.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j - 1));
    yy(i) = y[static_cast<std::size_t>(i)];
  }

  TrainedModel m;
  m.kind = ModelKind::logistic;
  m.input_columns = x_in.columns();
  m.feature_names = x.column_names();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd eta(n), prob(n), w(n);
  int it = 0;
  for (;; ++it) {
    eta = X * beta;
    for (Eigen::Index i = 0; i < n; ++i) {
      prob(i) = sigmoid(eta(i));
      w(i) = prob(i) * (1.0 - prob(i));
    }
    const Eigen::VectorXd grad = X.transpose() * (yy - prob);
    if (grad.norm() / static_cast<double>(n) < opt.gradient_tolerance) {
      m.converged = true;
      break;
    }
    if (it >= opt.max_iterations) break;
    const Eigen::MatrixXd H = X.transpose() * w.asDiagonal() * X;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    Eigen::VectorXd step;
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) step = ldlt.solve(grad);
    if (step.size() != p || !step.allFinite()) step = H.completeOrthogonalDecomposition().solve(grad);
    if (!step.allFinite()) break;
    beta += step;
  }
  m.iterations_run = it;
  m.separation = !m.converged || (eta.cwiseAbs().maxCoeff() > opt.saturation);
  m.intercept = beta(0);
  m.coefficients.assign(beta.data() + 1, beta.data() + p);
  return m;
}

}  // namespace cogwear
