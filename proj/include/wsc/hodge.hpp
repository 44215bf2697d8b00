#pragma once

#include <optional>

#include "wsc/complex.hpp"

namespace wsc {

/// Diagonal metric tensor G_k of one simplex order: weights are the positive
/// inner products <sigma_i, sigma_i> of the basic k-chains.
class MetricTensor {
 public:
  /// Throws ValidationError unless every weight is finite and strictly positive.
  MetricTensor(int order, Vector weights);

  static MetricTensor identity(int order, Index n);

  int order() const { return order_; }
  Index size() const { return weights_.size(); }
  const Vector& weights() const { return weights_; }
  /// Diagonal of G_k^{-1}, the weights of the induced cochain inner product.
  Vector inverse_weights() const { return weights_.cwiseInverse(); }

  bool operator==(const MetricTensor&) const = default;

 private:
  int order_;
  Vector weights_;
};

/// Real values on the simplices of one order, in canonical simplex order.
struct SimplicialSignal {
  int order = 1;
  Vector values;
};

/// Potentials of a weighted Hodge decomposition of an edge flow:
/// x = B1^T x0 + G1 B2 G2^{-1} x2 + xh with xh harmonic.
struct HodgeComponents {
  Vector x0;  ///< node potential
  Vector x2;  ///< triangle potential
  Vector xh;  ///< harmonic edge flow
};

/// The three mutually orthogonal edge flows built from HodgeComponents.
struct EdgeFlowParts {
  Vector irrotational;
  Vector solenoidal;
  Vector harmonic;
};

/// A complex together with its metric tensors G0, G1, G2. Incidence matrices
/// are computed once at construction.
class WeightedComplex {
 public:
  /// Throws DimensionError if an order or length does not match the complex.
  WeightedComplex(SimplicialComplex2 complex, MetricTensor g0, MetricTensor g1, MetricTensor g2);

  static WeightedComplex with_identity_metrics(SimplicialComplex2 complex);

  /// Same complex and G0, G1 with a different triangle metric.
  WeightedComplex with_g2(MetricTensor g2) const;

  const SimplicialComplex2& complex() const { return complex_; }
  const MetricTensor& g0() const { return g0_; }
  const MetricTensor& g1() const { return g1_; }
  const MetricTensor& g2() const { return g2_; }
  const MetricTensor& metric(int order) const;
  const Matrix& b1() const { return b1_; }
  const Matrix& b2() const { return b2_; }
  /// B_k for k in {1, 2}.
  const Matrix& incidence(int k) const;

  Index n_vertices() const { return b1_.rows(); }
  Index n_edges() const { return b1_.cols(); }
  Index n_triangles() const { return b2_.cols(); }

  /// G1 B2 G2^{-1}, whose image is the solenoidal subspace.
  Matrix solenoidal_operator() const;

 private:
  SimplicialComplex2 complex_;
  MetricTensor g0_, g1_, g2_;
  Matrix b1_, b2_;
};

/// <x, y> = x^T G^{-1} y.
double weighted_inner_product(const Vector& x, const Vector& y, const MetricTensor& g);

/// Adjoint coboundary delta'_k = G_{k-1} B_k G_k^{-1}, k in {1, 2}.
Matrix coboundary_adjoint(const WeightedComplex& wc, int k);

struct HodgeLaplacian {
  Matrix full;   ///< L_k = lower + upper
  Matrix lower;  ///< B_k^T G_{k-1} B_k G_k^{-1} (zero for k = 0)
  Matrix upper;  ///< G_k B_{k+1} G_{k+1}^{-1} B_{k+1}^T (zero for k = 2)
};

/// Weighted Hodge Laplacian of order k in {0, 1, 2}.
HodgeLaplacian hodge_laplacian(const WeightedComplex& wc, int k);

/// Default absolute eigenvalue threshold used by harmonic_basis:
/// 1e-9 * max(largest eigenvalue, 1).
double default_kernel_tolerance(double largest_eigenvalue);

/// Basis of ker(L1). L1 is not symmetric for general metrics, so the kernel is
/// read off the similar matrix G1^{-1/2} L1 G1^{1/2} and mapped back by
/// G1^{1/2}; the returned columns are orthonormal under the G1 inner product.
/// `tol` is an absolute eigenvalue cutoff; the default is scale relative.
Matrix harmonic_basis(const Matrix& l1, const MetricTensor& g1, std::optional<double> tol = {});

/// Weighted (G1^{-1}) least-squares projections onto im(B1^T) and
/// im(G1 B2 G2^{-1}); the harmonic part is the residual. Potentials are the
/// minimum-norm representatives. `rcond` is the relative rank cutoff.
HodgeComponents hodge_decompose(const WeightedComplex& wc, const Vector& x, double rcond = 1e-10);

EdgeFlowParts edge_flow_parts(const WeightedComplex& wc, const HodgeComponents& c);

/// B1^T x0 + G1 B2 G2^{-1} x2 + xh.
Vector reconstruct(const WeightedComplex& wc, const HodgeComponents& c);

}  // namespace wsc
