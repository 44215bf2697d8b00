#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wsc {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

using Edge = std::array<int, 2>;
using Triangle = std::array<int, 3>;

/// Raw, possibly invalid description of an order-2 complex as read from a file.
struct ComplexData {
  int n_vertices = 0;
  std::vector<Edge> edges;
  std::vector<Triangle> triangles;

  bool operator==(const ComplexData&) const = default;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks index ranges, vertex order inside each simplex, duplicates,
/// lexicographic list order and closure under faces. Never throws.
ValidationReport validate(const ComplexData& data);

/// Sorts the vertices of every simplex and both simplex lists. Duplicates are
/// kept so that `validate` can still report them.
ComplexData canonicalize(ComplexData data);

/// Immutable, validated order-2 simplicial complex.
///
/// Simplices are oriented by increasing vertex index and indexed in
/// lexicographic order, so incidence matrices are deterministic functions of
/// the vertex sets.
class SimplicialComplex2 {
 public:
  /// Canonicalizes and validates; throws ValidationError listing every violation.
  explicit SimplicialComplex2(ComplexData data);

  int n_vertices() const { return data_.n_vertices; }
  Index n_edges() const { return static_cast<Index>(data_.edges.size()); }
  Index n_triangles() const { return static_cast<Index>(data_.triangles.size()); }

  /// Number of simplices of the given order (0, 1 or 2).
  Index count(int order) const;

  const std::vector<Edge>& edges() const { return data_.edges; }
  const std::vector<Triangle>& triangles() const { return data_.triangles; }
  const ComplexData& data() const { return data_; }

  /// Canonical index of edge {i, j}, in either vertex order.
  std::optional<Index> edge_index(int i, int j) const;

 private:
  ComplexData data_;
  std::map<Edge, Index> edge_lookup_;
};

/// Node-to-edge incidence B1 (n0 x n1): column (i,j) has -1 at row i, +1 at row j.
Matrix incidence_b1(const SimplicialComplex2& complex);

/// Edge-to-triangle incidence B2 (n1 x n2): column (i,j,k) has +1 at (i,j) and
/// (j,k), -1 at (i,k).
Matrix incidence_b2(const SimplicialComplex2& complex);

enum class AdjacencyMode { upper, lower };

/// Upper adjacency: both simplices are faces of a common (k+1)-simplex.
/// Lower adjacency: the simplices share a (k-1)-face. Throws ValidationError for
/// order 0 / lower, order 2 / upper, or an order outside {0, 1, 2}.
BoolMatrix adjacency(const SimplicialComplex2& complex, int order, AdjacencyMode mode);

}  // namespace wsc
