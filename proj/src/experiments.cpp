#include "wsc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "wsc/errors.hpp"
#include "wsc/io.hpp"
#include "wsc/metric_learner.hpp"
#include "wsc/random.hpp"

namespace wsc {

namespace {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index writes
/// only its own output slot, so results do not depend on the schedule.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  const int workers = std::clamp(threads, 1, std::max(1, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? std::nan("") : s / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

/// Correlation with an all-zero estimate scored as 0.
double score(const Vector& x_hat, const Vector& x_true, int& zero_estimates) {
  if (x_hat.isZero(0.0)) {
    ++zero_estimates;
    return 0.0;
  }
  return correlation(x_hat, x_true);
}

}  // namespace

ExperimentCurve run_fig1(const Fig1Config& config) {
  if (config.sigma_grid.empty()) throw ValidationError("sigma_grid must not be empty");
  if (config.n_realizations < 1) throw ValidationError("n_realizations must be >= 1");
  for (double s : config.sigma_grid) {
    if (!(s >= 0.0)) throw ValidationError("sigma values must be >= 0");
  }
  config.estimator.validate();

  GeneratorConfig gen = config.complex;
  gen.seed = Rng::derive_seed(config.seed, "fig1-complex");
  const GeneratedComplex generated = generate_complex(gen);
  const SimplicialComplex2& complex = generated.complex;

  const WeightedComplex truth_metrics(
      complex, MetricTensor::identity(0, complex.count(0)),
      generate_metric(1, complex.n_edges(), Rng::derive_seed(config.seed, "fig1-g1"),
                      MetricMode::uniform, config.metric_lower),
      generate_metric(2, complex.n_triangles(), Rng::derive_seed(config.seed, "fig1-g2"),
                      MetricMode::uniform, config.metric_lower));
  const WeightedComplex flat = truth_metrics.with_g2(MetricTensor::identity(2, complex.n_triangles()));

  const std::size_t n_sigma = config.sigma_grid.size();
  struct Outcome {
    bool ok = false;
    std::string error;
    std::vector<double> rho_joint, rho_flat;
    int unconverged = 0;
    int zero_joint = 0, zero_flat = 0;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(config.n_realizations));

  parallel_for(config.n_realizations, config.threads, [&](int r) {
    Outcome& out = outcomes[static_cast<std::size_t>(r)];
    try {
      SignalGenConfig sig = config.signal;
      sig.seed = Rng::derive_seed(config.seed, "fig1-signal", static_cast<std::uint64_t>(r));
      const NoisyFlow clean = generate_clean_flow(truth_metrics, sig);
      // Common noise direction across the sigma grid.
      const Vector noise =
          Rng::stream(config.seed, "fig1-noise", static_cast<std::uint64_t>(r)).normal_vector(complex.n_edges());
      for (double sigma : config.sigma_grid) {
        EstimatorConfig est = config.estimator;
        if (config.scale_l1_with_sigma) {
          est.l1_weights.node *= sigma;
          est.l1_weights.triangle *= sigma;
          est.l1_weights.harmonic *= sigma;
        }
        const Vector x_tilde = clean.x_true + sigma * noise;
        const auto joint = estimate(flat, x_tilde, std::nullopt, est);
        const Vector x_flat = reconstruct(flat, estimate_with_fixed_metric(flat, x_tilde, est));
        out.rho_joint.push_back(score(joint.x_hat, clean.x_true, out.zero_joint));
        out.rho_flat.push_back(score(x_flat, clean.x_true, out.zero_flat));
        if (!joint.converged) ++out.unconverged;
      }
      out.ok = true;
    } catch (const Error& e) {
      out.error = e.what();
    }
  });

  ExperimentCurve curve;
  curve.columns = {"sigma", "rho_joint", "rho_flat"};
  int failed = 0, unconverged = 0, zero_joint = 0, zero_flat = 0;
  nlohmann::json errors = nlohmann::json::array();
  std::vector<std::vector<double>> joint(n_sigma), flat_rho(n_sigma);
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    const auto& o = outcomes[r];
    if (!o.ok) {
      ++failed;
      errors.push_back({{"realization", r}, {"error", o.error}});
      continue;
    }
    unconverged += o.unconverged;
    zero_joint += o.zero_joint;
    zero_flat += o.zero_flat;
    for (std::size_t s = 0; s < n_sigma; ++s) {
      joint[s].push_back(o.rho_joint[s]);
      flat_rho[s].push_back(o.rho_flat[s]);
    }
  }
  nlohmann::json se = nlohmann::json::array();
  for (std::size_t s = 0; s < n_sigma; ++s) {
    curve.rows.push_back({config.sigma_grid[s], mean(joint[s]), mean(flat_rho[s])});
    se.push_back({{"sigma", config.sigma_grid[s]},
                  {"rho_joint_se", standard_error(joint[s])},
                  {"rho_flat_se", standard_error(flat_rho[s])}});
  }

  curve.metadata = {
      {"experiment", "fig1"},
      {"seed", config.seed},
      {"complex", {{"n_vertices", complex.n_vertices()},
                   {"n_edges", complex.n_edges()},
                   {"n_triangles", complex.n_triangles()},
                   {"radius", generated.radius},
                   {"attempts", generated.attempts}}},
      {"realizations", config.n_realizations},
      {"failed_realizations", failed},
      {"failures", errors},
      {"unconverged_estimates", unconverged},
      {"zero_estimates", {{"joint", zero_joint}, {"flat", zero_flat}}},
      {"standard_errors", se},
      {"config", io::to_json(config)},
  };
  return curve;
}

ExperimentCurve run_fig2(const Fig2Config& config) {
  if (config.m_grid.empty()) throw ValidationError("M grid must not be empty");
  if (config.n_complexes < 1 || config.n_signal_draws < 1) {
    throw ValidationError("n_complexes and n_signal_draws must be >= 1");
  }
  for (Index m : config.m_grid) {
    if (m < 1) throw ValidationError("M values must be >= 1");
  }

  const std::size_t n_m = config.m_grid.size();
  struct Outcome {
    bool ok = false;
    std::string error;
    std::vector<double> mse;  // mean over successful draws, per M
    int failed_draws = 0;
    Index n_edges = 0, n_triangles = 0, bandwidth = 0;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(config.n_complexes));

  parallel_for(config.n_complexes, config.threads, [&](int c) {
    Outcome& out = outcomes[static_cast<std::size_t>(c)];
    try {
      GeneratorConfig gen = config.complex;
      gen.seed = Rng::derive_seed(config.seed, "fig2-complex", static_cast<std::uint64_t>(c));
      const SimplicialComplex2 complex = generate_complex(gen).complex;
      const MetricTensor g2 =
          generate_metric(2, complex.n_triangles(),
                          Rng::derive_seed(config.seed, "fig2-metric", static_cast<std::uint64_t>(c)),
                          MetricMode::simplex_feasible, config.metric_lower);
      const Vector w_true = g2.inverse_weights();
      const WeightedComplex wc(complex, MetricTensor::identity(0, complex.count(0)),
                               MetricTensor::identity(1, complex.n_edges()), g2);
      const Index bandwidth = config.bandwidth.value_or(solenoidal_dimension(wc));
      const Matrix basis = solenoidal_smooth_basis(wc, bandwidth);
      out.n_edges = complex.n_edges();
      out.n_triangles = complex.n_triangles();
      out.bandwidth = bandwidth;

      const std::uint64_t signal_seed =
          Rng::derive_seed(config.seed, "fig2-signal", static_cast<std::uint64_t>(c));
      for (std::size_t mi = 0; mi < n_m; ++mi) {
        const Index m = config.m_grid[mi];
        std::vector<double> errs;
        for (int d = 0; d < config.n_signal_draws; ++d) {
          Rng rng = Rng::stream(signal_seed, "draw", mi * static_cast<std::uint64_t>(config.n_signal_draws) + d);
          Matrix coeff(bandwidth, m);
          for (Index j = 0; j < m; ++j)
            for (Index i = 0; i < bandwidth; ++i) coeff(i, j) = rng.normal();
          try {
            const Vector w_hat = learn_weights(tv_coefficients(complex, basis * coeff));
            errs.push_back(metric_mse(w_true, w_hat));
          } catch (const DegenerateError&) {
            ++out.failed_draws;
          }
        }
        out.mse.push_back(mean(errs));
      }
      out.ok = true;
    } catch (const Error& e) {
      out.error = e.what();
    }
  });

  ExperimentCurve curve;
  curve.columns = {"M", "mse"};
  int failed = 0, failed_draws = 0;
  nlohmann::json errors = nlohmann::json::array();
  nlohmann::json sizes = nlohmann::json::array();
  std::vector<std::vector<double>> per_m(n_m);
  for (std::size_t c = 0; c < outcomes.size(); ++c) {
    const auto& o = outcomes[c];
    if (!o.ok) {
      ++failed;
      errors.push_back({{"complex", c}, {"error", o.error}});
      continue;
    }
    failed_draws += o.failed_draws;
    sizes.push_back({{"n_edges", o.n_edges}, {"n_triangles", o.n_triangles}, {"bandwidth", o.bandwidth}});
    for (std::size_t mi = 0; mi < n_m; ++mi) {
      if (!std::isnan(o.mse[mi])) per_m[mi].push_back(o.mse[mi]);
    }
  }
  nlohmann::json se = nlohmann::json::array();
  for (std::size_t mi = 0; mi < n_m; ++mi) {
    curve.rows.push_back({static_cast<double>(config.m_grid[mi]), mean(per_m[mi])});
    se.push_back({{"M", config.m_grid[mi]}, {"mse_se", standard_error(per_m[mi])}});
  }
  curve.metadata = {
      {"experiment", "fig2"},
      {"seed", config.seed},
      {"complexes", sizes},
      {"failed_complexes", failed},
      {"failures", errors},
      {"failed_signal_draws", failed_draws},
      {"standard_errors", se},
      {"signal_metric", "snapshots are generated under the ground-truth G2 with G0 = G1 = I, "
                        "coefficient variance 1/lambda over the solenoidal band"},
      {"config", io::to_json(config)},
  };
  return curve;
}

}  // namespace wsc
