#include "wsc/complex.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "wsc/errors.hpp"

namespace wsc {

namespace {

template <std::size_t N>
std::string tuple_string(const std::array<int, N>& s) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < N; ++i) {
    if (i) out << ',';
    out << s[i];
  }
  out << ')';
  return out.str();
}

template <std::size_t N>
void check_simplices(const std::vector<std::array<int, N>>& list, int n_vertices,
                     const char* name, std::vector<std::string>& out) {
  std::set<std::array<int, N>> seen;
  for (const auto& s : list) {
    for (int v : s) {
      if (v < 0 || v >= n_vertices) {
        out.push_back("vertex " + std::to_string(v) + " out of range");
      }
    }
    bool increasing = true;
    for (std::size_t i = 1; i < N; ++i) increasing = increasing && s[i - 1] < s[i];
    if (!increasing) {
      out.push_back(std::string(name) + " " + tuple_string(s) +
                    " is not in strictly increasing vertex order");
    }
    if (!seen.insert(s).second) {
      out.push_back(std::string("duplicate ") + name + " " + tuple_string(s));
    }
  }
  if (!std::is_sorted(list.begin(), list.end())) {
    out.push_back(std::string(name) + " list is not in lexicographic order");
  }
}

}  // namespace

ValidationReport validate(const ComplexData& data) {
  ValidationReport report;
  auto& out = report.violations;
  if (data.n_vertices < 0) out.push_back("n_vertices must be nonnegative");

  check_simplices(data.edges, data.n_vertices, "edge", out);
  check_simplices(data.triangles, data.n_vertices, "triangle", out);

  std::set<Edge> edge_set(data.edges.begin(), data.edges.end());
  std::set<Edge> reported;
  for (const auto& t : data.triangles) {
    const Edge faces[3] = {{t[0], t[1]}, {t[0], t[2]}, {t[1], t[2]}};
    for (Edge f : faces) {
      if (f[0] > f[1]) std::swap(f[0], f[1]);
      if (!edge_set.count(f) && reported.insert(f).second) {
        out.push_back("missing face " + tuple_string(f));
      }
    }
  }
  return report;
}

ComplexData canonicalize(ComplexData data) {
  for (auto& e : data.edges) std::sort(e.begin(), e.end());
  for (auto& t : data.triangles) std::sort(t.begin(), t.end());
  std::sort(data.edges.begin(), data.edges.end());
  std::sort(data.triangles.begin(), data.triangles.end());
  return data;
}

SimplicialComplex2::SimplicialComplex2(ComplexData data) : data_(canonicalize(std::move(data))) {
  auto report = validate(data_);
  if (!report.ok()) {
    std::string what = "invalid simplicial complex: " + report.violations.front();
    if (report.violations.size() > 1) {
      what += " (+" + std::to_string(report.violations.size() - 1) + " more)";
    }
    throw ValidationError(what, std::move(report.violations));
  }
  for (std::size_t e = 0; e < data_.edges.size(); ++e) {
    edge_lookup_.emplace(data_.edges[e], static_cast<Index>(e));
  }
}

Index SimplicialComplex2::count(int order) const {
  switch (order) {
    case 0: return n_vertices();
    case 1: return n_edges();
    case 2: return n_triangles();
    default: throw DimensionError("simplex order must be 0, 1 or 2, got " + std::to_string(order));
  }
}

std::optional<Index> SimplicialComplex2::edge_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = edge_lookup_.find(Edge{i, j});
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

Matrix incidence_b1(const SimplicialComplex2& complex) {
  Matrix b1 = Matrix::Zero(complex.n_vertices(), complex.n_edges());
  for (Index e = 0; e < complex.n_edges(); ++e) {
    const auto& [i, j] = complex.edges()[static_cast<std::size_t>(e)];
    b1(i, e) = -1.0;
    b1(j, e) = 1.0;
  }
  return b1;
}

Matrix incidence_b2(const SimplicialComplex2& complex) {
  Matrix b2 = Matrix::Zero(complex.n_edges(), complex.n_triangles());
  for (Index t = 0; t < complex.n_triangles(); ++t) {
    const auto& [i, j, k] = complex.triangles()[static_cast<std::size_t>(t)];
    b2(*complex.edge_index(i, j), t) = 1.0;
    b2(*complex.edge_index(j, k), t) = 1.0;
    b2(*complex.edge_index(i, k), t) = -1.0;
  }
  return b2;
}

BoolMatrix adjacency(const SimplicialComplex2& complex, int order, AdjacencyMode mode) {
  if (order < 0 || order > 2) {
    throw ValidationError("adjacency order must be 0, 1 or 2, got " + std::to_string(order));
  }
  if (order == 0 && mode == AdjacencyMode::lower) {
    throw ValidationError("vertices have no lower adjacency");
  }
  if (order == 2 && mode == AdjacencyMode::upper) {
    throw ValidationError("triangles have no upper adjacency in an order-2 complex");
  }

  // Shared cofaces (upper) or shared faces (lower) show up as off-diagonal
  // nonzeros of |B||B|^T or |B|^T|B|.
  Matrix incidence;
  if (mode == AdjacencyMode::upper) {
    incidence = (order == 0 ? incidence_b1(complex) : incidence_b2(complex)).cwiseAbs();
    incidence = incidence * incidence.transpose();
  } else {
    incidence = (order == 1 ? incidence_b1(complex) : incidence_b2(complex)).cwiseAbs();
    incidence = incidence.transpose() * incidence;
  }
  BoolMatrix adj = incidence.array() > 0.5;
  adj.diagonal().setConstant(false);
  return adj;
}

}  // namespace wsc
