#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "wsc/flow_estimator.hpp"
#include "wsc/synth.hpp"

namespace wsc {

/// Tabulated Monte Carlo averages plus run metadata (seeds, complex sizes,
/// failure counts, config echo).
struct ExperimentCurve {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json metadata;
};

/// Joint flow/metric estimation against the flat-metric baseline over a noise grid.
struct Fig1Config {
  GeneratorConfig complex = [] {
    GeneratorConfig c;
    c.n_vertices = 40;
    c.target_edges = kDefaultTargetEdges;
    return c;
  }();
  SignalGenConfig signal;
  std::vector<double> sigma_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  int n_realizations = 20;
  /// Estimator settings shared by both methods. With scale_l1_with_sigma the
  /// l1 weights are multiplied by sigma, so sigma = 0 runs unregularized.
  EstimatorConfig estimator = [] {
    EstimatorConfig e;
    e.l1_weights = {10.0, 10.0, 0.0};
    e.n_iterations = 50;
    e.early_stop = true;
    return e;
  }();
  bool scale_l1_with_sigma = true;
  /// Lower bound of the uniform draws for the diagonals of G1 and G2.
  double metric_lower = 0.1;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Rows: sigma, mean rho_joint, mean rho_flat.
ExperimentCurve run_fig1(const Fig1Config& config);

/// Metric learning error versus the number of observed bandlimited snapshots.
struct Fig2Config {
  GeneratorConfig complex = [] {
    GeneratorConfig c;
    c.n_vertices = 40;
    c.target_edges = kDefaultTargetEdges;
    return c;
  }();
  std::vector<Index> m_grid = {10, 20, 50, 100};
  int n_complexes = 20;
  int n_signal_draws = 100;
  /// Number of solenoidal modes, smallest eigenvalues first; default all of them.
  /// Mode k gets coefficient variance 1/lambda_k.
  std::optional<Index> bandwidth;
  double metric_lower = 1e-6;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Rows: M, mean squared metric error.
ExperimentCurve run_fig2(const Fig2Config& config);

}  // namespace wsc
