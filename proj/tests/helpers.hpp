#pragma once

#include <cstdint>

#include "wsc/hodge.hpp"
#include "wsc/random.hpp"
#include "wsc/synth.hpp"

namespace wsc::testing {

/// Geometric complex with a random vertex count in [lo, hi].
inline SimplicialComplex2 random_complex(std::uint64_t seed, int lo = 5, int hi = 40) {
  Rng rng(seed);
  GeneratorConfig cfg;
  cfg.n_vertices = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
  cfg.connection_radius = 0.25 + 0.35 * rng.uniform();
  cfg.seed = seed;
  return generate_complex(cfg).complex;
}

/// Metric weights uniform on (0.2, 5].
inline MetricTensor random_metric(int order, Index n, std::uint64_t seed) {
  Rng rng(seed);
  Vector w(n);
  for (Index i = 0; i < n; ++i) w(i) = rng.uniform(0.2, 5.0);
  return MetricTensor(order, w);
}

inline WeightedComplex random_weighted(const SimplicialComplex2& c, std::uint64_t seed) {
  return WeightedComplex(c, random_metric(0, c.count(0), seed + 1), random_metric(1, c.count(1), seed + 2),
                         random_metric(2, c.count(2), seed + 3));
}

inline SimplicialComplex2 full_triangle() { return SimplicialComplex2({3, {{0, 1}, {0, 2}, {1, 2}}, {{0, 1, 2}}}); }
inline SimplicialComplex2 hollow_triangle() { return SimplicialComplex2({3, {{0, 1}, {0, 2}, {1, 2}}, {}}); }

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Index>(rows.size()), rows.size() ? static_cast<Index>(rows.begin()->size()) : 0);
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace wsc::testing
