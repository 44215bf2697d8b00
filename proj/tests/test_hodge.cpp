#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "helpers.hpp"
#include "wsc/errors.hpp"
#include "wsc/hodge.hpp"

using namespace wsc;
using namespace wsc::testing;

namespace {

Index lu_rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<Matrix> lu(m);
  lu.setThreshold(1e-10);
  return lu.rank();
}

/// Weighted least-squares fit of x onto the columns of `a` in the G^{-1} norm:
/// the whitened flow is projected onto the dominant eigenvectors of A A^T.
Vector weighted_fit(const Matrix& a, const Vector& x, const Vector& g) {
  const Vector s = g.cwiseSqrt().cwiseInverse();
  if (a.cols() == 0) return Vector::Zero(x.size());
  const Matrix aw = s.asDiagonal() * a;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(aw * aw.transpose());
  const double cutoff = 1e-9 * std::max(eig.eigenvalues().maxCoeff(), 1e-300);
  Vector proj = Vector::Zero(x.size());
  const Vector xw = s.asDiagonal() * x;
  for (Index i = 0; i < eig.eigenvalues().size(); ++i) {
    if (eig.eigenvalues()(i) > cutoff) proj += eig.eigenvectors().col(i) * eig.eigenvectors().col(i).dot(xw);
  }
  return s.cwiseInverse().asDiagonal() * proj;
}

}  // namespace

TEST_CASE("metric tensor rejects nonpositive weights") {
  CHECK_THROWS_AS(MetricTensor(1, vec({1.0, 0.0})), ValidationError);
  CHECK_THROWS_AS(MetricTensor(1, vec({1.0, -2.0})), ValidationError);
  CHECK_THROWS_AS(MetricTensor(1, vec({std::nan("")})), ValidationError);
  CHECK_THROWS_AS(MetricTensor(3, vec({1.0})), ValidationError);
  CHECK(MetricTensor(2, vec({4.0})).inverse_weights()(0) == doctest::Approx(0.25));
}

TEST_CASE("weighted complex checks metric sizes") {
  const auto c = full_triangle();
  CHECK_THROWS_AS(WeightedComplex(c, MetricTensor::identity(0, 3), MetricTensor::identity(1, 2),
                                  MetricTensor::identity(2, 1)),
                  DimensionError);
  CHECK_THROWS_AS(WeightedComplex(c, MetricTensor::identity(0, 3), MetricTensor::identity(2, 3),
                                  MetricTensor::identity(2, 1)),
                  DimensionError);
}

TEST_CASE("weighted inner product") {
  CHECK(weighted_inner_product(vec({1, 1, 1}), vec({1, 1, 1}), MetricTensor::identity(1, 3)) == 3.0);
  CHECK(weighted_inner_product(vec({2, 0}), vec({3, 5}), MetricTensor(1, vec({4, 1}))) == doctest::Approx(1.5));
  CHECK_THROWS_AS(weighted_inner_product(vec({1}), vec({1, 2}), MetricTensor::identity(1, 2)), DimensionError);

  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector x = rng.normal_vector(7), y = rng.normal_vector(7);
    const MetricTensor g = random_metric(1, 7, 100 + trial);
    const Matrix ginv = g.weights().cwiseInverse().asDiagonal();
    const double oracle = (x.transpose() * ginv * y)(0, 0);
    CHECK(weighted_inner_product(x, y, g) == doctest::Approx(oracle).epsilon(1e-13));
    CHECK(weighted_inner_product(x, y, g) == doctest::Approx(weighted_inner_product(y, x, g)).epsilon(1e-15));
    CHECK(weighted_inner_product(x, x, g) > 0.0);
  }
}

TEST_CASE("coboundary adjoint examples") {
  const auto c = full_triangle();
  const auto flat = WeightedComplex::with_identity_metrics(c);
  CHECK(coboundary_adjoint(flat, 1) == incidence_b1(c));
  CHECK(coboundary_adjoint(flat, 2) == incidence_b2(c));

  const WeightedComplex wc(c, MetricTensor::identity(0, 3), MetricTensor(1, vec({2, 2, 2})), MetricTensor(2, vec({4})));
  CHECK(max_abs(coboundary_adjoint(wc, 2) - mat({{0.5}, {-0.5}, {0.5}})) < 1e-15);
}

TEST_CASE("adjointness holds for random signals") {
  const auto c = random_complex(21, 12, 20);
  const auto wc = random_weighted(c, 5);
  Rng rng(9);
  for (int k = 1; k <= 2; ++k) {
    const Matrix adj = coboundary_adjoint(wc, k);
    const Matrix& b = wc.incidence(k);
    for (int trial = 0; trial < 100; ++trial) {
      const Vector lo = rng.normal_vector(c.count(k - 1));
      const Vector hi = rng.normal_vector(c.count(k));
      const double lhs = weighted_inner_product(hi, b.transpose() * lo, wc.metric(k));
      const double rhs = weighted_inner_product(adj * hi, lo, wc.metric(k - 1));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("Laplacians on the full triangle") {
  const auto flat = WeightedComplex::with_identity_metrics(full_triangle());
  CHECK(max_abs(hodge_laplacian(flat, 1).full - 3.0 * Matrix::Identity(3, 3)) == 0.0);
  CHECK(max_abs(hodge_laplacian(flat, 0).full - mat({{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}})) == 0.0);
  CHECK(max_abs(hodge_laplacian(flat, 2).full - mat({{3}})) == 0.0);
  CHECK_THROWS_AS(hodge_laplacian(flat, 3), ValidationError);
}

TEST_CASE("Laplacian structure under random metrics") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = random_complex(seed);
    const auto wc = random_weighted(c, seed);
    const auto l1 = hodge_laplacian(wc, 1);
    CHECK(max_abs(l1.lower * l1.upper) <= 1e-10);
    CHECK(max_abs(l1.upper * l1.lower) <= 1e-10);

    const Matrix b1 = incidence_b1(c), b2 = incidence_b2(c);
    const Matrix g0 = wc.g0().weights().asDiagonal(), g1 = wc.g1().weights().asDiagonal();
    const Matrix g1inv = wc.g1().inverse_weights().asDiagonal(), g2inv = wc.g2().inverse_weights().asDiagonal();
    CHECK(max_abs(hodge_laplacian(wc, 0).full - g0 * b1 * g1inv * b1.transpose()) <= 1e-12);
    CHECK(max_abs(l1.full - (b1.transpose() * g0 * b1 * g1inv + g1 * b2 * g2inv * b2.transpose())) <= 1e-12);

    // G1^{-1/2} L1 G1^{1/2} is symmetric positive semidefinite.
    const Vector s = wc.g1().weights().cwiseSqrt();
    const Matrix sim = s.cwiseInverse().asDiagonal() * l1.full * s.asDiagonal();
    CHECK(max_abs(sim - sim.transpose()) <= 1e-10 * std::max(1.0, max_abs(sim)));
    if (sim.size()) {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (sim + sim.transpose()));
      CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    }

    const auto flat = WeightedComplex::with_identity_metrics(c);
    CHECK(hodge_laplacian(flat, 1).full == b1.transpose() * b1 + b2 * b2.transpose());
  }
}

TEST_CASE("harmonic basis examples") {
  const auto full = WeightedComplex::with_identity_metrics(full_triangle());
  CHECK(harmonic_basis(hodge_laplacian(full, 1).full, full.g1()).cols() == 0);

  const auto hollow = WeightedComplex::with_identity_metrics(hollow_triangle());
  const Matrix h = harmonic_basis(hodge_laplacian(hollow, 1).full, hollow.g1());
  REQUIRE(h.cols() == 1);
  const Vector cycle = vec({1, -1, 1}) / std::sqrt(3.0);
  CHECK(std::abs(std::abs(h.col(0).dot(cycle)) - 1.0) < 1e-12);
}

TEST_CASE("harmonic basis dimension, residual and orthonormality") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto c = random_complex(seed + 40);
    const Index betti = c.n_edges() - lu_rank(incidence_b1(c)) - lu_rank(incidence_b2(c));
    for (bool weighted : {false, true}) {
      const auto wc = weighted ? random_weighted(c, seed) : WeightedComplex::with_identity_metrics(c);
      const Matrix l1 = hodge_laplacian(wc, 1).full;
      const Matrix h = harmonic_basis(l1, wc.g1());
      CHECK(h.cols() == betti);
      if (h.cols() == 0) continue;
      CHECK(max_abs(l1 * h) <= 1e-8);
      const Matrix gram = h.transpose() * wc.g1().inverse_weights().asDiagonal() * h;
      CHECK(max_abs(gram - Matrix::Identity(h.cols(), h.cols())) <= 1e-10);
    }
  }
}

TEST_CASE("harmonic subspace does not depend on G2") {
  const auto c = random_complex(77, 20, 30);
  const auto a = random_weighted(c, 1);
  const auto b = a.with_g2(random_metric(2, c.n_triangles(), 999));
  const Matrix ha = harmonic_basis(hodge_laplacian(a, 1).full, a.g1());
  const Matrix hb = harmonic_basis(hodge_laplacian(b, 1).full, b.g1());
  REQUIRE(ha.cols() == hb.cols());
  // Each basis lies in the kernel of the other Laplacian.
  CHECK(max_abs(hodge_laplacian(b, 1).full * ha) <= 1e-8);
  CHECK(max_abs(hodge_laplacian(a, 1).full * hb) <= 1e-8);
}

TEST_CASE("decompose examples") {
  const auto full = WeightedComplex::with_identity_metrics(full_triangle());
  {
    const Vector x = incidence_b1(full_triangle()).transpose() * vec({1, 0, -1});
    const auto p = edge_flow_parts(full, hodge_decompose(full, x));
    CHECK((p.irrotational - x).norm() < 1e-12);
    CHECK(p.solenoidal.norm() < 1e-12);
    CHECK(p.harmonic.norm() < 1e-12);
  }
  {
    const Vector x = vec({1, -1, 1});
    const auto p = edge_flow_parts(full, hodge_decompose(full, x));
    CHECK(p.irrotational.norm() < 1e-12);
    CHECK((p.solenoidal - x).norm() < 1e-12);
    CHECK(p.harmonic.norm() < 1e-12);
  }
  {
    const auto hollow = WeightedComplex::with_identity_metrics(hollow_triangle());
    const Vector x = vec({1, -1, 1});
    const auto comps = hodge_decompose(hollow, x);
    CHECK(comps.x2.size() == 0);
    const auto p = edge_flow_parts(hollow, comps);
    CHECK(p.irrotational.norm() < 1e-12);
    CHECK(p.solenoidal.norm() == 0.0);
    CHECK((p.harmonic - x).norm() < 1e-12);
  }
  CHECK_THROWS_AS(hodge_decompose(full, vec({1, 2})), DimensionError);
}

TEST_CASE("reconstruct examples") {
  const auto full = WeightedComplex::with_identity_metrics(full_triangle());
  CHECK(reconstruct(full, {Vector::Zero(3), Vector::Zero(1), Vector::Zero(3)}).norm() == 0.0);
  CHECK(reconstruct(full, {vec({1, 0, 0}), Vector::Zero(1), Vector::Zero(3)}) == vec({-1, -1, 0}));
  CHECK_THROWS_AS(reconstruct(full, {vec({1, 0}), Vector::Zero(1), Vector::Zero(3)}), DimensionError);
}

TEST_CASE("decomposition matches weighted projections on random instances") {
  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = random_complex(seed + 200);
    const auto wc = random_weighted(c, seed + 7);
    const Vector x = rng.normal_vector(c.n_edges());
    const auto comps = hodge_decompose(wc, x);
    const auto p = edge_flow_parts(wc, comps);
    const double scale = x.squaredNorm();

    CHECK((reconstruct(wc, comps) - x).norm() <= 1e-8 * x.norm());
    CHECK(std::abs(weighted_inner_product(p.irrotational, p.solenoidal, wc.g1())) <= 1e-8 * scale);
    CHECK(std::abs(weighted_inner_product(p.irrotational, p.harmonic, wc.g1())) <= 1e-8 * scale);
    CHECK(std::abs(weighted_inner_product(p.solenoidal, p.harmonic, wc.g1())) <= 1e-8 * scale);
    CHECK((hodge_laplacian(wc, 1).full * p.harmonic).norm() <= 1e-8 * x.norm());

    const Vector g = wc.g1().weights();
    CHECK((p.irrotational - weighted_fit(wc.b1().transpose(), x, g)).norm() <= 1e-8 * x.norm());
    CHECK((p.solenoidal - weighted_fit(wc.solenoidal_operator(), x, g)).norm() <= 1e-8 * x.norm());
  }
}
