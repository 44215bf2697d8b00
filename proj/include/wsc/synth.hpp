#pragma once

#include <cstdint>
#include <optional>

#include "wsc/hodge.hpp"

namespace wsc {

/// Edge count of the default N = 40 experiment complex. With every 3-clique
/// filled this gives about 110 triangles.
inline constexpr int kDefaultTargetEdges = 104;

/// Random complex generator settings. Geometric graphs place vertices
/// uniformly in a disk of diameter 1, so a radius of 1 connects every pair.
struct GeneratorConfig {
  int n_vertices = 40;
  std::optional<double> connection_radius;
  /// Geometric mode with the radius chosen so that exactly this many edges appear.
  std::optional<int> target_edges;
  /// Erdos-Renyi fallback.
  std::optional<double> edge_probability;
  bool fill_all_triangles = true;
  /// Inclusion probability of each 3-clique when fill_all_triangles is false.
  double triangle_probability = 0.0;
  bool require_connected = false;
  int max_retries = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GeneratedComplex {
  SimplicialComplex2 complex;
  double radius = 0.0;  ///< 0 for Erdos-Renyi graphs
  int attempts = 1;
};

GeneratedComplex generate_complex(const GeneratorConfig& config);

enum class MetricMode {
  uniform,           ///< weights i.i.d. on (lower, 1]
  simplex_feasible,  ///< reciprocal weights lie on the unit simplex
};

/// Random diagonal metric of the given order and size. In simplex_feasible mode
/// u_i ~ U(lower, 1] and 1/g_i = u_i / sum_j u_j.
MetricTensor generate_metric(int order, Index n, std::uint64_t seed,
                             MetricMode mode = MetricMode::uniform, double lower = 1e-6);

struct SignalGenConfig {
  /// Nonzeros of x0, x2 and the sparse harmonic seed; default ceil(10%) of each dimension.
  std::optional<Index> sparsity_0, sparsity_2, sparsity_h;
  /// Number of low-frequency solenoidal eigenvectors for bandlimited snapshots.
  std::optional<Index> bandwidth;
  double amplitude = 1.0;
  std::uint64_t seed = 0;
};

struct NoisyFlow {
  Vector x_true;
  Vector x_tilde;
  HodgeComponents truth;
  /// Set when a harmonic part was requested but ker(L1) is trivial.
  bool harmonic_unavailable = false;
};

/// Sparse ground-truth components (xh is a sparse draw projected onto ker(L1)
/// and rescaled to its pre-projection norm) and their flow, without noise.
NoisyFlow generate_clean_flow(const WeightedComplex& wc, const SignalGenConfig& config);

/// Clean flow plus i.i.d. N(0, sigma^2) noise per edge.
NoisyFlow generate_noisy_flow(const WeightedComplex& wc, const SignalGenConfig& config, double sigma);

/// Orthogonal (G1^{-1}) projector onto ker(L1) applied to x.
Vector project_harmonic(const WeightedComplex& wc, const Vector& x);

/// The `bandwidth` solenoidal eigenvectors of the upper Laplacian with the
/// smallest nonzero eigenvalues (edges x bandwidth). Throws ValidationError if
/// bandwidth exceeds the solenoidal dimension.
Matrix solenoidal_lowpass_basis(const WeightedComplex& wc, Index bandwidth);

/// Low-pass basis with column k scaled by lambda_k^{-1/2}. Standard normal
/// coefficients then give snapshots with covariance sum_k v_k v_k^T / lambda_k,
/// which over the full band is the pseudoinverse of the upper Laplacian at G1 = I.
Matrix solenoidal_smooth_basis(const WeightedComplex& wc, Index bandwidth);

/// Dimension of the solenoidal subspace im(G1 B2 G2^{-1}).
Index solenoidal_dimension(const WeightedComplex& wc);

/// M random combinations (standard normal coefficients) of the low-pass basis.
Matrix generate_bandlimited_solenoidal(const WeightedComplex& wc, Index m, Index bandwidth,
                                       std::uint64_t seed);

}  // namespace wsc
