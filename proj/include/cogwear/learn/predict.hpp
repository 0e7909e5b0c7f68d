#pragma once

#include <vector>

#include "cogwear/learn/metrics.hpp"
#include "cogwear/learn/model.hpp"

namespace cogwear {

/// Raw log-odds per row.
inline std::vector<double> predict_scores(const TrainedModel& m, const FeatureMatrix& x_in) {
  detail::check_inputs(m, x_in);
  detail::require_complete(x_in, "predict");
  const FeatureMatrix x = expand_nominal(x_in);
  if (x.cols() != m.feature_names.size()) throw Error("predict: expanded columns do not match the model");
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto row = x.row(r);
    if (m.kind == ModelKind::logistic) {
      double z = m.intercept;
      for (std::size_t j = 0; j < m.coefficients.size(); ++j) z += m.coefficients[j] * row[j];
      out[r] = z;
    } else {
      double s = 0.0;
      for (const auto& t : m.trees) s += t.predict(row.data());
      out[r] = m.base_score + m.learning_rate * s;
    }
  }
  return out;
}

/// Probabilities in (0, 1).
inline std::vector<double> predict(const TrainedModel& m, const FeatureMatrix& x) {
  auto z = predict_scores(m, x);
  for (double& v : z) v = sigmoid(v);
  return z;
}

}  // namespace cogwear
