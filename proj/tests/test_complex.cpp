#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "wsc/complex.hpp"
#include "wsc/errors.hpp"

using namespace wsc;
using namespace wsc::testing;

namespace {

bool has(const ValidationReport& r, const std::string& msg) {
  return std::find(r.violations.begin(), r.violations.end(), msg) != r.violations.end();
}

}  // namespace

TEST_CASE("validate accepts the full triangle") {
  CHECK(validate({3, {{0, 1}, {0, 2}, {1, 2}}, {{0, 1, 2}}}).ok());
}

TEST_CASE("validate names a missing face") {
  const auto r = validate({3, {{0, 1}, {0, 2}}, {{0, 1, 2}}});
  CHECK_FALSE(r.ok());
  CHECK(has(r, "missing face (1,2)"));
}

TEST_CASE("validate flags out of range vertices") {
  const auto r = validate({2, {{0, 2}}, {}});
  CHECK(has(r, "vertex 2 out of range"));
}

TEST_CASE("validate flags duplicates, order and sorting") {
  CHECK(has(validate({3, {{0, 1}, {0, 1}}, {}}), "duplicate edge (0,1)"));
  CHECK(has(validate({3, {{1, 0}}, {}}), "edge (1,0) is not in strictly increasing vertex order"));
  CHECK(has(validate({3, {{1, 2}, {0, 1}}, {}}), "edge list is not in lexicographic order"));
}

TEST_CASE("construction canonicalizes then rejects invalid input") {
  const SimplicialComplex2 c({3, {{2, 1}, {1, 0}, {0, 2}}, {{2, 0, 1}}});
  CHECK(c.edges() == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(c.triangles() == std::vector<Triangle>{{0, 1, 2}});
  CHECK(c.edge_index(2, 1) == 2);
  CHECK_FALSE(c.edge_index(0, 3).has_value());
  CHECK_THROWS_AS(SimplicialComplex2({3, {{0, 1}}, {{0, 1, 2}}}), ValidationError);
  CHECK_THROWS_AS(SimplicialComplex2({3, {{0, 1}, {1, 0}}, {}}), ValidationError);
}

TEST_CASE("B1 examples") {
  CHECK(incidence_b1(full_triangle()) == mat({{-1, -1, 0}, {1, 0, -1}, {0, 1, 1}}));
  CHECK(incidence_b1(SimplicialComplex2({2, {{0, 1}}, {}})) == mat({{-1}, {1}}));
  CHECK(incidence_b1(SimplicialComplex2({3, {{0, 1}, {1, 2}}, {}})) == mat({{-1, 0}, {1, -1}, {0, 1}}));
}

TEST_CASE("B2 examples") {
  CHECK(incidence_b2(full_triangle()) == mat({{1}, {-1}, {1}}));
  const Matrix empty = incidence_b2(hollow_triangle());
  CHECK(empty.rows() == 3);
  CHECK(empty.cols() == 0);

  const SimplicialComplex2 two({4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}, {{0, 1, 2}, {1, 2, 3}}});
  const Matrix b1 = incidence_b1(two), b2 = incidence_b2(two);
  // Direct product, entry by entry.
  for (Index i = 0; i < b1.rows(); ++i) {
    for (Index j = 0; j < b2.cols(); ++j) {
      double s = 0.0;
      for (Index e = 0; e < b1.cols(); ++e) s += b1(i, e) * b2(e, j);
      CHECK(s == 0.0);
    }
  }
}

TEST_CASE("incidence column structure and B1 B2 = 0 on random complexes") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SimplicialComplex2 c = random_complex(seed);
    const Matrix b1 = incidence_b1(c), b2 = incidence_b2(c);
    CHECK((b1 * b2).cwiseAbs().sum() == 0.0);
    for (Index j = 0; j < b1.cols(); ++j) {
      CHECK(b1.col(j).sum() == 0.0);
      CHECK(b1.col(j).cwiseAbs().sum() == 2.0);
    }
    for (Index j = 0; j < b2.cols(); ++j) {
      CHECK(b2.col(j).sum() == 1.0);
      CHECK(b2.col(j).cwiseAbs().sum() == 3.0);
    }
  }
}

TEST_CASE("adjacency") {
  const BoolMatrix up = adjacency(full_triangle(), 1, AdjacencyMode::upper);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) CHECK(up(i, j) == (i != j));

  const BoolMatrix low = adjacency(SimplicialComplex2({3, {{0, 1}, {1, 2}}, {}}), 1, AdjacencyMode::lower);
  CHECK(low(0, 1));
  CHECK(low(1, 0));
  CHECK_FALSE(low(0, 0));

  const BoolMatrix verts = adjacency(SimplicialComplex2({3, {{0, 1}, {1, 2}}, {}}), 0, AdjacencyMode::upper);
  CHECK(verts(0, 1));
  CHECK_FALSE(verts(0, 2));

  CHECK_THROWS_AS(adjacency(full_triangle(), 2, AdjacencyMode::upper), ValidationError);
  CHECK_THROWS_AS(adjacency(full_triangle(), 0, AdjacencyMode::lower), ValidationError);
  CHECK_THROWS_AS(adjacency(full_triangle(), 3, AdjacencyMode::lower), ValidationError);
}

TEST_CASE("adjacency is symmetric with an empty diagonal") {
  const SimplicialComplex2 c = random_complex(11);
  for (auto [k, mode] : {std::pair{0, AdjacencyMode::upper}, {1, AdjacencyMode::upper},
                         {1, AdjacencyMode::lower}, {2, AdjacencyMode::lower}}) {
    const BoolMatrix a = adjacency(c, k, mode);
    CHECK(a == a.transpose());
    for (Index i = 0; i < a.rows(); ++i) CHECK_FALSE(a(i, i));
  }
}

TEST_CASE("degenerate complexes are legal") {
  const SimplicialComplex2 empty({4, {}, {}});
  CHECK(incidence_b1(empty).rows() == 4);
  CHECK(incidence_b1(empty).cols() == 0);
  CHECK(incidence_b2(empty).size() == 0);
}
