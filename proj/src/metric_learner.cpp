#include "wsc/metric_learner.hpp"

#include <string>

#include "wsc/errors.hpp"

namespace wsc {

double tv_sol(const WeightedComplex& wc, const Vector& x) {
  if (x.size() != wc.n_edges()) {
    throw DimensionError("edge flow: expected length " + std::to_string(wc.n_edges()) + ", got " +
                         std::to_string(x.size()));
  }
  const Vector curl = wc.b2().transpose() * x;
  return (wc.g2().inverse_weights().array() * curl.array().square()).sum();
}

Vector tv_coefficients(const SimplicialComplex2& complex, const Matrix& snapshots) {
  if (snapshots.rows() != complex.n_edges()) {
    throw DimensionError("snapshot matrix: expected " + std::to_string(complex.n_edges()) +
                         " rows, got " + std::to_string(snapshots.rows()));
  }
  if (snapshots.cols() < 1) throw DimensionError("snapshot matrix has no columns");
  const Matrix curl = incidence_b2(complex).transpose() * snapshots;
  return curl.rowwise().squaredNorm();
}

Vector learn_weights(const Vector& a, const MetricLearnerOptions& options) {
  if (a.size() == 0) return Vector();
  if ((a.array() < 0.0).any() || !a.allFinite()) {
    throw ValidationError("TV coefficients must be finite and nonnegative");
  }
  const double threshold = options.a_epsilon_rel * a.maxCoeff();
  Vector coeff = a;
  std::vector<long> degenerate;
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i) <= threshold) degenerate.push_back(static_cast<long>(i));
  }
  if (!degenerate.empty()) {
    if (options.policy == DegeneratePolicy::reject || threshold <= 0.0) {
      throw DegenerateError(std::to_string(degenerate.size()) +
                                " triangle(s) carry no circulation energy; weights would diverge",
                            degenerate);
    }
    for (long i : degenerate) coeff(i) = threshold;
  }
  const Vector inv = (2.0 * coeff).cwiseInverse();
  const double lambda = 1.0 / inv.sum();
  return lambda * inv;
}

MetricTensor learn_metric(const SimplicialComplex2& complex, const Matrix& snapshots,
                          const MetricLearnerOptions& options) {
  return MetricTensor(2, learn_weights(tv_coefficients(complex, snapshots), options).cwiseInverse());
}

double metric_mse(const Vector& w_true, const Vector& w_hat) {
  if (w_true.size() != w_hat.size()) {
    throw DimensionError("metric_mse: lengths " + std::to_string(w_true.size()) + " and " +
                         std::to_string(w_hat.size()) + " differ");
  }
  return (w_true - w_hat).squaredNorm();
}

}  // namespace wsc
