#pragma once

#include "wsc/hodge.hpp"

namespace wsc {

/// What to do with triangles whose circulation energy is (numerically) zero.
enum class DegeneratePolicy {
  reject,  ///< throw DegenerateError naming the triangles
  floor,   ///< raise a_i to the threshold before solving
};

struct MetricLearnerOptions {
  /// Coefficients at or below a_epsilon_rel * max(a) are degenerate.
  double a_epsilon_rel = 1e-12;
  DegeneratePolicy policy = DegeneratePolicy::reject;
};

/// ||G2^{-1/2} B2^T x||^2 = sum_i w2(i) (b_i^T x)^2.
double tv_sol(const WeightedComplex& wc, const Vector& x);

/// a_i = sum_m (b_i^T x(m))^2 for snapshot columns x(m) (edges x snapshots).
/// Raw flows are accepted: b_i^T annihilates the gradient and harmonic parts.
Vector tv_coefficients(const SimplicialComplex2& complex, const Matrix& snapshots);

/// Minimizer of sum_i w_i^2 a_i over the simplex {w > 0, sum w = 1}:
/// w_i = lambda / (2 a_i), lambda = 1 / sum_i 1/(2 a_i).
Vector learn_weights(const Vector& a, const MetricLearnerOptions& options = {});

/// Triangle metric with diagonal 1 / w2(i), w2 = learn_weights(tv_coefficients(...)).
MetricTensor learn_metric(const SimplicialComplex2& complex, const Matrix& snapshots,
                          const MetricLearnerOptions& options = {});

/// Squared Euclidean distance between weight vectors.
double metric_mse(const Vector& w_true, const Vector& w_hat);

}  // namespace wsc
