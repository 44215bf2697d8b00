#include "wsc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "wsc/errors.hpp"
#include "wsc/linalg.hpp"
#include "wsc/random.hpp"

namespace wsc {

namespace {

struct Point {
  double x, y;
};

bool connected(int n, const std::vector<Edge>& edges) {
  if (n <= 1) return true;
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  int components = n;
  for (const auto& [i, j] : edges) {
    const int a = find(i), b = find(j);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

std::vector<Triangle> cliques3(int n, const std::vector<Edge>& edges) {
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(n, 0));
  for (const auto& [i, j] : edges) adj[i][j] = adj[j][i] = 1;
  std::vector<Triangle> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!adj[i][j]) continue;
      for (int k = j + 1; k < n; ++k)
        if (adj[i][k] && adj[j][k]) out.push_back({i, j, k});
    }
  return out;
}

Index default_support(Index dim) { return static_cast<Index>(std::ceil(0.1 * static_cast<double>(dim))); }

Vector sparse_draw(Index dim, Index support, double amplitude, Rng& rng) {
  if (support > dim) {
    throw ValidationError("sparsity " + std::to_string(support) + " exceeds dimension " +
                          std::to_string(dim));
  }
  Vector v = Vector::Zero(dim);
  for (Index i : rng.sample_without_replacement(dim, support)) v(i) = amplitude * rng.normal();
  return v;
}

/// Eigen-decomposition of the symmetric matrix similar to the upper Laplacian.
Eigen::SelfAdjointEigenSolver<Matrix> upper_spectrum(const WeightedComplex& wc) {
  const Vector sqrt_g1 = wc.g1().weights().cwiseSqrt();
  const Matrix half = sqrt_g1.asDiagonal() * wc.b2() * wc.g2().inverse_weights().cwiseSqrt().asDiagonal();
  return Eigen::SelfAdjointEigenSolver<Matrix>(half * half.transpose());
}

Index first_nonzero(const Vector& ascending) {
  if (ascending.size() == 0) return 0;
  const double cutoff = default_kernel_tolerance(ascending.maxCoeff());
  Index i = 0;
  while (i < ascending.size() && ascending(i) < cutoff) ++i;
  return i;
}

}  // namespace

void GeneratorConfig::validate() const {
  std::vector<std::string> bad;
  if (n_vertices < 3) bad.push_back("n_vertices must be >= 3");
  const int modes = int(connection_radius.has_value()) + int(target_edges.has_value()) +
                    int(edge_probability.has_value());
  if (modes != 1) {
    bad.push_back("exactly one of connection_radius, target_edges, edge_probability must be set");
  }
  if (connection_radius && !(*connection_radius > 0.0 && *connection_radius <= 1.0)) {
    bad.push_back("connection_radius must be in (0, 1]");
  }
  if (target_edges && (*target_edges < 0 || *target_edges > n_vertices * (n_vertices - 1) / 2)) {
    bad.push_back("target_edges must be between 0 and n(n-1)/2");
  }
  if (edge_probability && !(*edge_probability >= 0.0 && *edge_probability <= 1.0)) {
    bad.push_back("edge_probability must be in [0, 1]");
  }
  if (!(triangle_probability >= 0.0 && triangle_probability <= 1.0)) {
    bad.push_back("triangle_probability must be in [0, 1]");
  }
  if (max_retries < 1) bad.push_back("max_retries must be >= 1");
  if (!bad.empty()) throw ValidationError("invalid generator config: " + bad.front(), bad);
}

GeneratedComplex generate_complex(const GeneratorConfig& config) {
  config.validate();
  const int n = config.n_vertices;
  for (int attempt = 1; attempt <= config.max_retries; ++attempt) {
    Rng rng = Rng::stream(config.seed, "complex", static_cast<std::uint64_t>(attempt - 1));
    std::vector<Edge> edges;
    double radius = 0.0;

    if (config.edge_probability) {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (rng.uniform() < *config.edge_probability) edges.push_back({i, j});
    } else {
      std::vector<Point> pts;
      pts.reserve(static_cast<std::size_t>(n));
      while (static_cast<int>(pts.size()) < n) {
        const double x = rng.uniform() - 0.5, y = rng.uniform() - 0.5;
        if (x * x + y * y <= 0.25) pts.push_back({x, y});
      }
      std::vector<std::pair<double, Edge>> pairs;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          pairs.push_back({std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y), Edge{i, j}});
      if (config.target_edges) {
        std::stable_sort(pairs.begin(), pairs.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        const auto k = static_cast<std::size_t>(*config.target_edges);
        radius = k == 0 ? 0.0 : pairs[k - 1].first;
        if (k < pairs.size() && k > 0) radius = 0.5 * (pairs[k - 1].first + pairs[k].first);
        for (std::size_t e = 0; e < k; ++e) edges.push_back(pairs[e].second);
      } else {
        radius = *config.connection_radius;
        for (const auto& [dist, e] : pairs)
          if (dist <= radius) edges.push_back(e);
      }
      std::sort(edges.begin(), edges.end());
    }

    if (config.require_connected && !connected(n, edges)) continue;

    std::vector<Triangle> triangles;
    for (const auto& t : cliques3(n, edges)) {
      if (config.fill_all_triangles || rng.uniform() < config.triangle_probability) {
        triangles.push_back(t);
      }
    }
    return {SimplicialComplex2(ComplexData{n, std::move(edges), std::move(triangles)}), radius, attempt};
  }
  throw ValidationError("no connected graph after " + std::to_string(config.max_retries) + " attempts");
}

MetricTensor generate_metric(int order, Index n, std::uint64_t seed, MetricMode mode, double lower) {
  if (n < 0) throw DimensionError("metric size must be nonnegative");
  if (!(lower >= 0.0 && lower < 1.0)) throw ValidationError("metric lower bound must be in [0, 1)");
  Rng rng = Rng::stream(seed, "metric", static_cast<std::uint64_t>(order));
  Vector u(n);
  for (Index i = 0; i < n; ++i) u(i) = rng.uniform(lower, 1.0);
  if (mode == MetricMode::uniform) return MetricTensor(order, u);
  return MetricTensor(order, (u / u.sum()).cwiseInverse());
}

Vector project_harmonic(const WeightedComplex& wc, const Vector& x) {
  const Matrix basis = harmonic_basis(hodge_laplacian(wc, 1).full, wc.g1());
  // Columns are G1-orthonormal, so the projector is H H^T G1^{-1}.
  return basis * (basis.transpose() * wc.g1().inverse_weights().asDiagonal() * x);
}

NoisyFlow generate_clean_flow(const WeightedComplex& wc, const SignalGenConfig& config) {
  Rng rng = Rng::stream(config.seed, "components");
  NoisyFlow out;
  out.truth.x0 = sparse_draw(wc.n_vertices(), config.sparsity_0.value_or(default_support(wc.n_vertices())),
                             config.amplitude, rng);
  out.truth.x2 = sparse_draw(wc.n_triangles(),
                             config.sparsity_2.value_or(default_support(wc.n_triangles())),
                             config.amplitude, rng);
  const Vector seed_h =
      sparse_draw(wc.n_edges(), config.sparsity_h.value_or(default_support(wc.n_edges())),
                  config.amplitude, rng);
  out.truth.xh = project_harmonic(wc, seed_h);
  const double norm = out.truth.xh.norm();
  if (norm > 1e-12 * std::max(1.0, seed_h.norm())) {
    out.truth.xh *= seed_h.norm() / norm;
  } else {
    out.harmonic_unavailable = seed_h.norm() > 0.0;
    out.truth.xh.setZero();
  }
  out.x_true = reconstruct(wc, out.truth);
  out.x_tilde = out.x_true;
  return out;
}

NoisyFlow generate_noisy_flow(const WeightedComplex& wc, const SignalGenConfig& config, double sigma) {
  if (!(sigma >= 0.0)) throw ValidationError("sigma must be >= 0");
  NoisyFlow out = generate_clean_flow(wc, config);
  if (sigma > 0.0) {
    Rng rng = Rng::stream(config.seed, "noise");
    out.x_tilde = out.x_true + sigma * rng.normal_vector(wc.n_edges());
  }
  return out;
}

Index solenoidal_dimension(const WeightedComplex& wc) {
  if (wc.n_triangles() == 0 || wc.n_edges() == 0) return 0;
  const auto eig = upper_spectrum(wc);
  return wc.n_edges() - first_nonzero(eig.eigenvalues());
}

Matrix solenoidal_lowpass_basis(const WeightedComplex& wc, Index bandwidth) {
  if (bandwidth < 1) throw ValidationError("bandwidth must be >= 1");
  if (wc.n_triangles() == 0) throw ValidationError("complex has no triangles: solenoidal subspace is empty");
  const auto eig = upper_spectrum(wc);
  const Index start = first_nonzero(eig.eigenvalues());
  const Index dim = wc.n_edges() - start;
  if (bandwidth > dim) {
    throw ValidationError("bandwidth " + std::to_string(bandwidth) + " exceeds solenoidal dimension " +
                          std::to_string(dim));
  }
  return wc.g1().weights().cwiseSqrt().asDiagonal() * eig.eigenvectors().middleCols(start, bandwidth);
}

Matrix solenoidal_smooth_basis(const WeightedComplex& wc, Index bandwidth) {
  Matrix basis = solenoidal_lowpass_basis(wc, bandwidth);
  const auto eig = upper_spectrum(wc);
  const Index start = first_nonzero(eig.eigenvalues());
  for (Index k = 0; k < bandwidth; ++k) basis.col(k) /= std::sqrt(eig.eigenvalues()(start + k));
  return basis;
}

Matrix generate_bandlimited_solenoidal(const WeightedComplex& wc, Index m, Index bandwidth,
                                       std::uint64_t seed) {
  if (m < 1) throw ValidationError("number of snapshots must be >= 1");
  const Matrix basis = solenoidal_lowpass_basis(wc, bandwidth);
  Rng rng = Rng::stream(seed, "bandlimited");
  Matrix coeff(bandwidth, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < bandwidth; ++i) coeff(i, j) = rng.normal();
  return basis * coeff;
}

}  // namespace wsc
