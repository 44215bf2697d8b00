#include "wsc/hodge.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wsc/errors.hpp"
#include "wsc/linalg.hpp"

namespace wsc {

namespace {

void require_size(Index got, Index expected, const char* what) {
  if (got != expected) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(got));
  }
}

}  // namespace

MetricTensor::MetricTensor(int order, Vector weights) : order_(order), weights_(std::move(weights)) {
  if (order < 0 || order > 2) {
    throw ValidationError("metric order must be 0, 1 or 2, got " + std::to_string(order));
  }
  for (Index i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_(i)) || weights_(i) <= 0.0) {
      throw ValidationError("weights must be positive (index " + std::to_string(i) + ")");
    }
  }
}

MetricTensor MetricTensor::identity(int order, Index n) { return MetricTensor(order, Vector::Ones(n)); }

WeightedComplex::WeightedComplex(SimplicialComplex2 complex, MetricTensor g0, MetricTensor g1,
                                 MetricTensor g2)
    : complex_(std::move(complex)),
      g0_(std::move(g0)),
      g1_(std::move(g1)),
      g2_(std::move(g2)),
      b1_(incidence_b1(complex_)),
      b2_(incidence_b2(complex_)) {
  const MetricTensor* metrics[3] = {&g0_, &g1_, &g2_};
  for (int k = 0; k < 3; ++k) {
    if (metrics[k]->order() != k) {
      throw DimensionError("metric G" + std::to_string(k) + " has order " +
                           std::to_string(metrics[k]->order()));
    }
    require_size(metrics[k]->size(), complex_.count(k), ("metric G" + std::to_string(k)).c_str());
  }
}

WeightedComplex WeightedComplex::with_identity_metrics(SimplicialComplex2 complex) {
  const Index n0 = complex.count(0), n1 = complex.count(1), n2 = complex.count(2);
  return WeightedComplex(std::move(complex), MetricTensor::identity(0, n0),
                         MetricTensor::identity(1, n1), MetricTensor::identity(2, n2));
}

WeightedComplex WeightedComplex::with_g2(MetricTensor g2) const {
  return WeightedComplex(complex_, g0_, g1_, std::move(g2));
}

const MetricTensor& WeightedComplex::metric(int order) const {
  switch (order) {
    case 0: return g0_;
    case 1: return g1_;
    case 2: return g2_;
    default: throw DimensionError("metric order must be 0, 1 or 2, got " + std::to_string(order));
  }
}

const Matrix& WeightedComplex::incidence(int k) const {
  if (k == 1) return b1_;
  if (k == 2) return b2_;
  throw DimensionError("incidence order must be 1 or 2, got " + std::to_string(k));
}

Matrix WeightedComplex::solenoidal_operator() const {
  return g1_.weights().asDiagonal() * b2_ * g2_.inverse_weights().asDiagonal();
}

double weighted_inner_product(const Vector& x, const Vector& y, const MetricTensor& g) {
  require_size(x.size(), g.size(), "inner product lhs");
  require_size(y.size(), g.size(), "inner product rhs");
  return (x.array() * y.array() / g.weights().array()).sum();
}

Matrix coboundary_adjoint(const WeightedComplex& wc, int k) {
  const Matrix& b = wc.incidence(k);
  return wc.metric(k - 1).weights().asDiagonal() * b * wc.metric(k).inverse_weights().asDiagonal();
}

HodgeLaplacian hodge_laplacian(const WeightedComplex& wc, int k) {
  if (k < 0 || k > 2) {
    throw ValidationError("Laplacian order must be 0, 1 or 2, got " + std::to_string(k));
  }
  const Index n = wc.complex().count(k);
  HodgeLaplacian lap;
  lap.lower = Matrix::Zero(n, n);
  lap.upper = Matrix::Zero(n, n);
  if (k > 0) {
    // delta_k delta'_k = B_k^T (G_{k-1} B_k G_k^{-1})
    lap.lower = wc.incidence(k).transpose() * coboundary_adjoint(wc, k);
  }
  if (k < 2) {
    // delta'_{k+1} delta_{k+1} = (G_k B_{k+1} G_{k+1}^{-1}) B_{k+1}^T
    lap.upper = coboundary_adjoint(wc, k + 1) * wc.incidence(k + 1).transpose();
  }
  lap.full = lap.lower + lap.upper;
  return lap;
}

double default_kernel_tolerance(double largest_eigenvalue) {
  return 1e-9 * std::max(largest_eigenvalue, 1.0);
}

Matrix harmonic_basis(const Matrix& l1, const MetricTensor& g1, std::optional<double> tol) {
  require_size(l1.rows(), g1.size(), "harmonic_basis L1 rows");
  require_size(l1.cols(), g1.size(), "harmonic_basis L1 cols");
  const Index n = l1.rows();
  if (n == 0) return Matrix::Zero(0, 0);

  const Vector sqrt_g = g1.weights().cwiseSqrt();
  const Matrix similar =
      linalg::symmetric_part(sqrt_g.cwiseInverse().asDiagonal() * l1 * sqrt_g.asDiagonal());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(similar);
  const Vector& lambda = eig.eigenvalues();  // ascending
  const double cutoff = tol.value_or(default_kernel_tolerance(lambda(n - 1)));

  Index dim = 0;
  while (dim < n && lambda(dim) < cutoff) ++dim;
  return sqrt_g.asDiagonal() * eig.eigenvectors().leftCols(dim);
}

HodgeComponents hodge_decompose(const WeightedComplex& wc, const Vector& x, double rcond) {
  require_size(x.size(), wc.n_edges(), "edge flow");
  // Whitening by G1^{-1/2} turns the G1-weighted projections into Euclidean ones.
  const Vector whiten = wc.g1().weights().cwiseSqrt().cwiseInverse();
  const Vector xw = whiten.asDiagonal() * x;

  HodgeComponents c;
  c.x0 = linalg::min_norm_solve(whiten.asDiagonal() * wc.b1().transpose(), xw, rcond);
  c.x2 = linalg::min_norm_solve(whiten.asDiagonal() * wc.solenoidal_operator(), xw, rcond);
  c.xh = x - wc.b1().transpose() * c.x0 - wc.solenoidal_operator() * c.x2;
  return c;
}

EdgeFlowParts edge_flow_parts(const WeightedComplex& wc, const HodgeComponents& c) {
  require_size(c.x0.size(), wc.n_vertices(), "node potential");
  require_size(c.x2.size(), wc.n_triangles(), "triangle potential");
  require_size(c.xh.size(), wc.n_edges(), "harmonic flow");
  return {wc.b1().transpose() * c.x0, wc.solenoidal_operator() * c.x2, c.xh};
}

Vector reconstruct(const WeightedComplex& wc, const HodgeComponents& c) {
  const auto parts = edge_flow_parts(wc, c);
  return parts.irrotational + parts.solenoidal + parts.harmonic;
}

}  // namespace wsc
