#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wsc/hodge.hpp"

namespace wsc {

/// How the unregularized signal block is updated.
enum class UpdateRule {
  /// x0 = L0^+ B1 x~, x2 = (W B2^T G1 B2 W)^+ W B2^T x~, xh = residual.
  paper_literal,
  /// Exact minimizer of the signal block: the weighted Hodge decomposition of x~
  /// under the current triangle weights (zero residual, harmonic xh).
  exact_ls,
};

/// Per-component l1 penalties on x0, x2 and xh.
struct L1Weights {
  double node = 0.0;
  double triangle = 0.0;
  double harmonic = 0.0;

  bool active() const { return node > 0.0 || triangle > 0.0 || harmonic > 0.0; }
};

struct EstimatorConfig {
  int n_iterations = 50;
  double q2_tolerance = 1e-10;
  int q2_max_steps = 200;
  double q2_penalty_weight = 1e3;
  L1Weights l1_weights;
  /// Lower bound on the diagonal of G2^{-1}.
  double w_floor = 1e-6;
  UpdateRule update_rule = UpdateRule::paper_literal;
  bool early_stop = false;
  double early_stop_tolerance = 1e-8;
  double l1_tolerance = 1e-9;
  int l1_max_steps = 20000;
  /// When set, G2 starts from random weights drawn from this seed instead of identity.
  std::optional<std::uint64_t> init_seed;

  /// Throws ValidationError on out-of-range fields.
  void validate() const;
};

/// Terms of the penalized joint objective
///   ||B1^T x0 + G1 B2 G2^{-1} x2 + xh - x~||^2 + l1 terms + rho ||L1 xh||^2.
struct QObjective {
  double residual = 0.0;
  double l1 = 0.0;
  double harmonic_violation = 0.0;  ///< ||L1 xh||
  double total = 0.0;
};

QObjective q_objective(const WeightedComplex& wc, const Vector& x_tilde, const HodgeComponents& c,
                       const L1Weights& l1, double penalty_weight);

/// Closed-form signal update under the triangle metric carried by `wc`.
HodgeComponents q1_closed_form(const WeightedComplex& wc, const Vector& x_tilde,
                               UpdateRule rule = UpdateRule::paper_literal);

struct L1Result {
  HodgeComponents components;
  double objective = 0.0;
  bool converged = false;
  int steps = 0;
};

/// l1-regularized signal update with xh restricted to ker(L1).
///
/// Variables are (x0, x2, c) with xh = H c, H an orthonormal basis of ker(L1).
/// Without a harmonic penalty this is cyclic coordinate descent; otherwise a
/// monotone accelerated proximal gradient whose harmonic prox is solved through
/// its box-constrained dual. The returned objective never exceeds the objective
/// of `warm_start` (projected onto ker(L1)) when one is given.
L1Result q1_l1_regularized(const WeightedComplex& wc, const Vector& x_tilde, const L1Weights& weights,
                           double tol = 1e-9, int max_steps = 20000,
                           const HodgeComponents* warm_start = nullptr);

struct Q2Result {
  MetricTensor g2;
  double objective = 0.0;           ///< penalized objective at return
  double incoming_objective = 0.0;  ///< same objective at the incoming G2
  double feasibility_gap = 0.0;     ///< ||(L_d + G1 B2 G2^{-1} B2^T) xh||
  bool feasible = true;
  bool converged = false;
  int steps = 0;
};

/// Triangle-metric update with the signal components held fixed.
///
/// Works on w = diag(G2^{-1}): the residual is A w + c with A = G1 B2 diag(x2)
/// and the harmonic constraint is G1 B2 diag(B2^T xh) w = -L_d xh, enforced by a
/// quadratic penalty. With u = w - w_floor this is a nonnegative least-squares
/// problem, solved by an active-set method warm started at the incoming G2.
/// The incoming G2 is returned if it is already optimal or if the solve would
/// raise the objective. `q2_max_steps` bounds the active-set steps.
Q2Result q2_solve(const WeightedComplex& wc, const Vector& x_tilde, const HodgeComponents& c,
                  const EstimatorConfig& config);

struct EstimationResult {
  HodgeComponents components;
  MetricTensor g2_hat;
  Vector x_hat;
  /// Penalized objective after each full iteration.
  std::vector<double> objective_trace;
  /// Objective after every block update (signal block, then metric block).
  std::vector<double> block_trace;
  int iterations = 0;
  bool feasible = true;
  double feasibility_gap = 0.0;
  bool converged = true;  ///< false if an inner solver hit its step budget
};

struct EstimateInit {
  HodgeComponents components;
  MetricTensor g2;
};

/// Alternating minimization over the signal block and the triangle metric,
/// starting from `init` or, by default, G2 = I with the closed-form signal.
/// G0 and G1 are taken from `wc`; its G2 is ignored.
EstimationResult estimate(const WeightedComplex& wc, const Vector& x_tilde,
                          const std::optional<EstimateInit>& init, const EstimatorConfig& config);

/// Signal-only estimate with the triangle metric held at the one in `wc`
/// (the flat baseline when G2 = I).
HodgeComponents estimate_with_fixed_metric(const WeightedComplex& wc, const Vector& x_tilde,
                                           const EstimatorConfig& config);

/// |x_hat^T x| / (||x_hat|| ||x||). Throws on zero vectors or length mismatch.
double correlation(const Vector& x_hat, const Vector& x_true);

}  // namespace wsc
