#include "wsc/flow_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "wsc/errors.hpp"
#include "wsc/linalg.hpp"
#include "wsc/random.hpp"

namespace wsc {

namespace {

constexpr double kFeasibilityTolerance = 1e-6;

void require_size(Index got, Index expected, const char* what) {
  if (got != expected) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(got));
  }
}

void check_components(const WeightedComplex& wc, const HodgeComponents& c) {
  require_size(c.x0.size(), wc.n_vertices(), "node potential");
  require_size(c.x2.size(), wc.n_triangles(), "triangle potential");
  require_size(c.xh.size(), wc.n_edges(), "harmonic flow");
}

Vector soft_threshold(const Vector& v, double t) {
  return v.unaryExpr([t](double x) { return std::copysign(std::max(std::abs(x) - t, 0.0), x); });
}

/// Euclidean orthonormal basis of ker(L1). The kernel does not depend on G2.
Matrix harmonic_frame(const WeightedComplex& wc) {
  const auto lap = hodge_laplacian(wc, 1);
  return linalg::orthonormal_range(harmonic_basis(lap.full, wc.g1()));
}

/// prox of mu ||H c||_1 at a, with H having orthonormal columns, solved on the
/// dual box { |u| <= mu } by accelerated projected gradient. The dual iterate
/// is kept between calls as a warm start.
class HarmonicProx {
 public:
  explicit HarmonicProx(const Matrix& frame) : frame_(frame), dual_(Vector::Zero(frame.rows())) {}

  Vector operator()(const Vector& a, double mu) {
    if (mu <= 0.0 || frame_.cols() == 0) return a;
    Vector u = dual_.cwiseMax(-mu).cwiseMin(mu);
    Vector y = u;
    double t = 1.0;
    for (int it = 0; it < 2000; ++it) {
      const Vector grad = frame_ * (frame_.transpose() * y - a);
      const Vector u_next = (y - grad).cwiseMax(-mu).cwiseMin(mu);
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double change = (u_next - u).lpNorm<Eigen::Infinity>();
      y = u_next + ((t - 1.0) / t_next) * (u_next - u);
      u = u_next;
      t = t_next;
      if (change <= 1e-14 * std::max(1.0, mu)) break;
    }
    dual_ = u;
    return a - frame_.transpose() * u;
  }

 private:
  const Matrix& frame_;
  Vector dual_;
};

struct L1Problem {
  const Matrix& irr;    // B1^T
  Matrix sol;           // G1 B2 W
  const Matrix& frame;  // harmonic frame
  const Vector& x_tilde;
  const L1Weights& weights;

  Index n0() const { return irr.cols(); }
  Index n2() const { return sol.cols(); }
  Index nh() const { return frame.cols(); }

  Vector apply(const Vector& v) const {
    return irr * v.head(n0()) + sol * v.segment(n0(), n2()) + frame * v.tail(nh());
  }
  Vector apply_transpose(const Vector& r) const {
    Vector g(n0() + n2() + nh());
    g << irr.transpose() * r, sol.transpose() * r, frame.transpose() * r;
    return g;
  }
  double objective(const Vector& v) const {
    return (apply(v) - x_tilde).squaredNorm() + weights.node * v.head(n0()).lpNorm<1>() +
           weights.triangle * v.segment(n0(), n2()).lpNorm<1>() +
           weights.harmonic * (frame * v.tail(nh())).lpNorm<1>();
  }
  Vector prox(const Vector& v, double step, HarmonicProx& hprox) const {
    Vector out(v.size());
    out.head(n0()) = soft_threshold(v.head(n0()), weights.node * step);
    out.segment(n0(), n2()) = soft_threshold(v.segment(n0(), n2()), weights.triangle * step);
    out.tail(nh()) = hprox(v.tail(nh()), weights.harmonic * step);
    return out;
  }
};

/// Cyclic coordinate descent on the separable case (no harmonic penalty), using
/// the Gram matrix of the stacked design. Every coordinate move is an exact
/// minimization, so the objective never increases.
void coordinate_descent(const L1Problem& problem, const Matrix& stacked, Vector& v, double tol, int max_steps,
                        L1Result& result) {
  const Index n = v.size();
  const Matrix gram = stacked.transpose() * stacked;
  Vector penalty(n);
  penalty << Vector::Constant(problem.n0(), problem.weights.node),
      Vector::Constant(problem.n2(), problem.weights.triangle), Vector::Zero(problem.nh());
  // g = gram v - M^T x~; the smooth gradient is 2 g.
  Vector g = gram * v - stacked.transpose() * problem.x_tilde;
  const double scale = std::max(1.0, problem.x_tilde.norm());

  int sweep = 0;
  for (; sweep < max_steps; ++sweep) {
    double largest = 0.0;
    for (Index j = 0; j < n; ++j) {
      const double q = gram(j, j);
      double next;
      if (q <= 0.0) {
        next = penalty(j) > 0.0 ? 0.0 : v(j);
      } else {
        const double z = q * v(j) - g(j);
        next = std::copysign(std::max(std::abs(z) - 0.5 * penalty(j), 0.0), z) / q;
      }
      const double delta = next - v(j);
      if (delta != 0.0) {
        g += gram.col(j) * delta;
        v(j) = next;
        largest = std::max(largest, std::abs(delta) * std::sqrt(std::max(q, 0.0)));
      }
    }
    if (largest <= tol * scale) {
      result.converged = true;
      break;
    }
  }
  result.steps = std::min(sweep + 1, max_steps);
}

struct NnlsResult {
  Vector x;
  bool converged = false;
  int steps = 0;
};

/// Lawson-Hanson active set method for min ||m x - b|| over x >= 0, started
/// from a feasible x0 whose positive entries form the initial passive set.
/// Each step moves along a segment towards a subspace least-squares solution,
/// so the objective never increases.
NnlsResult nnls(const Matrix& m, const Vector& b, const Vector& x0, double tol, int max_steps) {
  const Index p = m.cols();
  NnlsResult r;
  r.x = x0;
  if (p == 0) {
    r.converged = true;
    return r;
  }
  std::vector<char> passive(static_cast<std::size_t>(p), 0);
  for (Index j = 0; j < p; ++j) passive[j] = x0(j) > 0.0;
  const double gtol = tol * std::max(1.0, (m.transpose() * b).lpNorm<Eigen::Infinity>());

  auto subspace_solve = [&]() {
    std::vector<Index> idx;
    for (Index j = 0; j < p; ++j)
      if (passive[j]) idx.push_back(j);
    Vector s = Vector::Zero(p);
    if (idx.empty()) return s;
    Matrix mp(m.rows(), static_cast<Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) mp.col(static_cast<Index>(k)) = m.col(idx[k]);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(mp);
    cod.setThreshold(1e-12);
    const Vector sp = cod.solve(b);
    for (std::size_t k = 0; k < idx.size(); ++k) s(idx[k]) = sp(static_cast<Index>(k));
    return s;
  };

  // Moves to the passive-set solution, dropping blocking variables on the way.
  // Returns false if the step budget ran out.
  auto settle = [&]() {
    while (r.steps < max_steps) {
      ++r.steps;
      const Vector s = subspace_solve();
      double alpha = 1.0;
      Index blocking = -1;
      for (Index j = 0; j < p; ++j) {
        if (passive[j] && s(j) <= 0.0) {
          const double ratio = r.x(j) / (r.x(j) - s(j));
          if (blocking < 0 || ratio < alpha) {
            alpha = std::min(alpha, ratio);
            blocking = j;
          }
        }
      }
      if (blocking < 0) {
        r.x = s;
        return true;
      }
      r.x += alpha * (s - r.x);
      r.x(blocking) = 0.0;
      for (Index j = 0; j < p; ++j) {
        if (passive[j] && r.x(j) <= 0.0) {
          passive[j] = 0;
          r.x(j) = 0.0;
        }
      }
    }
    return false;
  };

  {
    // Already optimal: keep x0 rather than moving along a flat direction.
    const Vector grad = m.transpose() * (b - m * r.x);
    bool kkt = true;
    for (Index j = 0; j < p && kkt; ++j) kkt = passive[j] ? std::abs(grad(j)) <= gtol : grad(j) <= gtol;
    if (kkt) {
      r.converged = true;
      return r;
    }
  }
  if (std::any_of(passive.begin(), passive.end(), [](char c) { return c != 0; }) && !settle()) return r;
  std::vector<char> rejected(static_cast<std::size_t>(p), 0);
  while (r.steps < max_steps) {
    const Vector grad = m.transpose() * (b - m * r.x);
    Index best = -1;
    for (Index j = 0; j < p; ++j) {
      if (!passive[j] && !rejected[j] && grad(j) > gtol && (best < 0 || grad(j) > grad(best))) best = j;
    }
    if (best < 0) {
      r.converged = true;
      return r;
    }
    passive[best] = 1;
    if (!settle()) return r;
    if (passive[best]) {
      std::fill(rejected.begin(), rejected.end(), 0);
    } else {
      // Dropped again at once: the gradient sign was rounding noise.
      rejected[best] = 1;
    }
  }
  return r;
}

L1Result solve_l1(const WeightedComplex& wc, const Matrix& frame, const Vector& x_tilde,
                  const L1Weights& weights, double tol, int max_steps,
                  const HodgeComponents* warm_start) {
  const Matrix irr = wc.b1().transpose();
  L1Problem problem{irr, wc.solenoidal_operator(), frame, x_tilde, weights};
  const Index n = problem.n0() + problem.n2() + problem.nh();

  Vector v = Vector::Zero(n);
  if (warm_start) {
    check_components(wc, *warm_start);
    v << warm_start->x0, warm_start->x2, frame.transpose() * warm_start->xh;
  }

  Matrix stacked(wc.n_edges(), n);
  stacked << problem.irr, problem.sol, problem.frame;

  L1Result result;
  if (weights.harmonic == 0.0 || problem.nh() == 0) {
    const Vector start = v;
    const double incoming = problem.objective(v);
    coordinate_descent(problem, stacked, v, tol, max_steps, result);
    result.objective = problem.objective(v);
    if (result.objective > incoming) {
      // Rounding only; keep the starting point.
      v = start;
      result.objective = incoming;
    }
    result.components.x0 = v.head(problem.n0());
    result.components.x2 = v.segment(problem.n0(), problem.n2());
    result.components.xh = frame * v.tail(problem.nh());
    return result;
  }

  const double lipschitz = 2.0 * std::pow(linalg::spectral_norm(stacked), 2) * (1.0 + 1e-9);
  if (lipschitz <= 0.0) {
    result.components = {Vector::Zero(problem.n0()), Vector::Zero(problem.n2()),
                         Vector::Zero(wc.n_edges())};
    result.converged = true;
    return result;
  }
  const double step = 1.0 / lipschitz;
  HarmonicProx hprox(frame);

  // Monotone FISTA (Beck & Teboulle): the accepted iterate never increases F.
  double fv = problem.objective(v);
  Vector y = v;
  double t = 1.0;
  int k = 0;
  for (; k < max_steps; ++k) {
    const Vector z = problem.prox(y - step * 2.0 * problem.apply_transpose(problem.apply(y) - x_tilde),
                                  step, hprox);
    const double fz = problem.objective(z);
    const Vector v_prev = v;
    if (fz <= fv) {
      v = z;
      fv = fz;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = v + (t / t_next) * (z - v) + ((t - 1.0) / t_next) * (v - v_prev);
    t = t_next;

    if (k % 5 == 4) {
      // Fixed-point residual of the plain proximal gradient map at v.
      const Vector p = problem.prox(
          v - step * 2.0 * problem.apply_transpose(problem.apply(v) - x_tilde), step, hprox);
      const double fp = problem.objective(p);
      const double change = (p - v).norm();
      if (fp <= fv) {
        v = p;
        fv = fp;
      }
      if (change <= tol * std::max(1.0, v.norm())) {
        result.converged = true;
        break;
      }
    }
  }
  result.steps = std::min(k + 1, max_steps);
  result.components.x0 = v.head(problem.n0());
  result.components.x2 = v.segment(problem.n0(), problem.n2());
  result.components.xh = frame * v.tail(problem.nh());
  result.objective = fv;
  return result;
}

}  // namespace

void EstimatorConfig::validate() const {
  std::vector<std::string> bad;
  if (n_iterations < 1) bad.push_back("n_iterations must be >= 1");
  if (!(q2_tolerance > 0.0)) bad.push_back("q2_tolerance must be > 0");
  if (q2_max_steps < 1) bad.push_back("q2_max_steps must be >= 1");
  if (!(q2_penalty_weight > 0.0)) bad.push_back("q2_penalty_weight must be > 0");
  if (!(w_floor > 0.0)) bad.push_back("w_floor must be > 0");
  if (l1_weights.node < 0.0 || l1_weights.triangle < 0.0 || l1_weights.harmonic < 0.0) {
    bad.push_back("l1_weights must be >= 0");
  }
  if (!(early_stop_tolerance > 0.0)) bad.push_back("early_stop_tolerance must be > 0");
  if (!(l1_tolerance > 0.0)) bad.push_back("l1_tolerance must be > 0");
  if (l1_max_steps < 1) bad.push_back("l1_max_steps must be >= 1");
  if (!bad.empty()) throw ValidationError("invalid estimator config: " + bad.front(), bad);
}

QObjective q_objective(const WeightedComplex& wc, const Vector& x_tilde, const HodgeComponents& c,
                       const L1Weights& l1, double penalty_weight) {
  require_size(x_tilde.size(), wc.n_edges(), "observed flow");
  check_components(wc, c);
  QObjective q;
  q.residual = (reconstruct(wc, c) - x_tilde).squaredNorm();
  q.l1 = l1.node * c.x0.lpNorm<1>() + l1.triangle * c.x2.lpNorm<1>() + l1.harmonic * c.xh.lpNorm<1>();
  q.harmonic_violation = (hodge_laplacian(wc, 1).full * c.xh).norm();
  q.total = q.residual + q.l1 + penalty_weight * q.harmonic_violation * q.harmonic_violation;
  return q;
}

HodgeComponents q1_closed_form(const WeightedComplex& wc, const Vector& x_tilde, UpdateRule rule) {
  require_size(x_tilde.size(), wc.n_edges(), "observed flow");
  if (rule == UpdateRule::exact_ls) return hodge_decompose(wc, x_tilde);

  const Vector w = wc.g2().inverse_weights();
  const Matrix l0 = hodge_laplacian(wc, 0).full;
  HodgeComponents c;
  c.x0 = linalg::min_norm_solve(l0, wc.b1() * x_tilde);
  // (W B2^T G1 B2 W)^+ W B2^T x~ = A^+ G1^{-1/2} x~ with A = G1^{1/2} B2 W.
  const Vector root = wc.g1().weights().cwiseSqrt();
  const Matrix a = root.asDiagonal() * wc.b2() * w.asDiagonal();
  c.x2 = linalg::min_norm_solve(a, root.cwiseInverse().asDiagonal() * x_tilde);
  c.xh = x_tilde - wc.b1().transpose() * c.x0 - wc.solenoidal_operator() * c.x2;
  return c;
}

L1Result q1_l1_regularized(const WeightedComplex& wc, const Vector& x_tilde, const L1Weights& weights,
                           double tol, int max_steps, const HodgeComponents* warm_start) {
  require_size(x_tilde.size(), wc.n_edges(), "observed flow");
  if (weights.node < 0.0 || weights.triangle < 0.0 || weights.harmonic < 0.0) {
    throw ValidationError("l1_weights must be >= 0");
  }
  if (!(tol > 0.0)) throw ValidationError("l1 tolerance must be > 0");
  return solve_l1(wc, harmonic_frame(wc), x_tilde, weights, tol, max_steps, warm_start);
}

Q2Result q2_solve(const WeightedComplex& wc, const Vector& x_tilde, const HodgeComponents& c,
                  const EstimatorConfig& config) {
  require_size(x_tilde.size(), wc.n_edges(), "observed flow");
  check_components(wc, c);
  config.validate();

  const double sqrt_rho = std::sqrt(config.q2_penalty_weight);
  const double floor = config.w_floor;
  const Index n2 = wc.n_triangles(), n1 = wc.n_edges();
  const Matrix g1b2 = wc.g1().weights().asDiagonal() * wc.b2();

  // f(w) = ||M w + e||^2 with M = [A; sqrt(rho) H] and e = [r0; sqrt(rho) d].
  Matrix m(2 * n1, n2);
  m << g1b2 * c.x2.asDiagonal(), sqrt_rho * (g1b2 * (wc.b2().transpose() * c.xh).asDiagonal());
  Vector e(2 * n1);
  e << wc.b1().transpose() * c.x0 + c.xh - x_tilde, sqrt_rho * (hodge_laplacian(wc, 1).lower * c.xh);

  const Vector incoming = wc.g2().inverse_weights();
  auto objective = [&](const Vector& w) { return (m * w + e).squaredNorm(); };
  const double f_in = objective(incoming);

  // Triangles with a zero column do not enter the objective and keep their weight.
  std::vector<Index> cols;
  for (Index j = 0; j < n2; ++j) {
    if (m.col(j).squaredNorm() > 0.0) cols.push_back(j);
  }
  const auto p = static_cast<Index>(cols.size());
  Matrix mr(2 * n1, p);
  Vector u(p);
  for (Index j = 0; j < p; ++j) {
    mr.col(j) = m.col(cols[j]);
    u(j) = std::max(incoming(cols[j]) - floor, 0.0);
  }
  // With w = floor + u the problem is min ||mr u - b|| over u >= 0.
  const Vector b = -(e + floor * mr.rowwise().sum());
  const auto solved = nnls(mr, b, u, config.q2_tolerance, config.q2_max_steps);

  Vector w = incoming.cwiseMax(floor);
  for (Index j = 0; j < p; ++j) w(cols[j]) = floor + solved.x(j);

  Q2Result result{wc.g2(), f_in, f_in, 0.0, true, solved.converged, solved.steps};
  const double f_out = objective(w);
  if (f_out <= f_in) {
    // Unchanged entries keep their exact incoming weight.
    Vector g = w.cwiseInverse();
    for (Index j = 0; j < n2; ++j) {
      if (w(j) == incoming(j)) g(j) = wc.g2().weights()(j);
    }
    result.g2 = MetricTensor(2, g);
    result.objective = f_out;
  } else {
    w = incoming;  // rounding only; keep the incoming metric
  }
  const Vector gap = m.bottomRows(n1) * w + e.tail(n1);
  result.feasibility_gap = gap.norm() / sqrt_rho;
  result.feasible = result.feasibility_gap <= kFeasibilityTolerance * std::max(1.0, x_tilde.norm());
  return result;
}

EstimationResult estimate(const WeightedComplex& wc, const Vector& x_tilde,
                          const std::optional<EstimateInit>& init, const EstimatorConfig& config) {
  config.validate();
  require_size(x_tilde.size(), wc.n_edges(), "observed flow");
  const Index n2 = wc.n_triangles();

  MetricTensor g2 = MetricTensor::identity(2, n2);
  if (init) {
    g2 = init->g2;
  } else if (config.init_seed) {
    Rng rng(*config.init_seed);
    Vector weights(n2);
    for (Index i = 0; i < n2; ++i) weights(i) = rng.uniform(0.5, 1.5);
    g2 = MetricTensor(2, weights);
  }
  require_size(g2.size(), n2, "initial G2");
  if (n2 > 0 && g2.inverse_weights().minCoeff() < config.w_floor * (1.0 - 1e-12)) {
    throw ValidationError("initial G2 is infeasible: some diag(G2^{-1}) below w_floor");
  }

  WeightedComplex current = wc.with_g2(g2);
  HodgeComponents comps = init ? init->components : q1_closed_form(current, x_tilde, config.update_rule);
  check_components(current, comps);

  const bool regularized = config.l1_weights.active();
  const Matrix frame = regularized ? harmonic_frame(wc) : Matrix();
  auto objective = [&](const WeightedComplex& at, const HodgeComponents& c) {
    return q_objective(at, x_tilde, c, config.l1_weights, config.q2_penalty_weight).total;
  };

  EstimationResult result{comps, g2, Vector(), {}, {}, 0, true, 0.0, true};
  for (int t = 1; t <= config.n_iterations; ++t) {
    if (regularized) {
      auto l1 = solve_l1(current, frame, x_tilde, config.l1_weights, config.l1_tolerance,
                         config.l1_max_steps, &comps);
      comps = std::move(l1.components);
      result.converged = result.converged && l1.converged;
    } else {
      comps = q1_closed_form(current, x_tilde, config.update_rule);
    }
    result.block_trace.push_back(objective(current, comps));

    auto q2 = q2_solve(current, x_tilde, comps, config);
    result.converged = result.converged && q2.converged;
    result.feasible = q2.feasible;
    result.feasibility_gap = q2.feasibility_gap;
    current = current.with_g2(q2.g2);
    const double value = objective(current, comps);
    result.block_trace.push_back(value);
    result.objective_trace.push_back(value);
    result.iterations = t;

    if (config.early_stop && t > 1) {
      const double prev = result.objective_trace[result.objective_trace.size() - 2];
      if (prev - value <= config.early_stop_tolerance * std::max(1.0, std::abs(prev))) break;
    }
  }

  result.components = comps;
  result.g2_hat = current.g2();
  result.x_hat = reconstruct(current, comps);
  return result;
}

HodgeComponents estimate_with_fixed_metric(const WeightedComplex& wc, const Vector& x_tilde,
                                           const EstimatorConfig& config) {
  config.validate();
  require_size(x_tilde.size(), wc.n_edges(), "observed flow");
  if (!config.l1_weights.active()) return q1_closed_form(wc, x_tilde, config.update_rule);
  const HodgeComponents start = q1_closed_form(wc, x_tilde, config.update_rule);
  return solve_l1(wc, harmonic_frame(wc), x_tilde, config.l1_weights, config.l1_tolerance,
                  config.l1_max_steps, &start)
      .components;
}

double correlation(const Vector& x_hat, const Vector& x_true) {
  require_size(x_hat.size(), x_true.size(), "correlation operand");
  const double nh = x_hat.norm(), nt = x_true.norm();
  if (nh == 0.0 || nt == 0.0) throw ValidationError("correlation of a zero vector is undefined");
  return std::min(1.0, std::abs(x_hat.dot(x_true)) / (nh * nt));
}

}  // namespace wsc
