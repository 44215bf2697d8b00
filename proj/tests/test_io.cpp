#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "wsc/errors.hpp"
#include "wsc/io.hpp"

using namespace wsc;
using namespace wsc::testing;
using nlohmann::json;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / "wsc_test_io";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path, std::ios::binary) << content;
  return path;
}

template <class F>
ParseError parse_error_of(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected ParseError");
  return ParseError("");
}

}  // namespace

TEST_CASE("complex round trip") {
  const auto c = full_triangle();
  const json j = io::to_json(c.data());
  CHECK(j == json::parse(R"({"n_vertices":3,"edges":[[0,1],[0,2],[1,2]],"triangles":[[0,1,2]]})"));
  CHECK(io::complex_from_json(j).data() == c.data());
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto r = random_complex(seed);
    CHECK(io::complex_from_json(json::parse(io::to_json(r.data()).dump())).data() == r.data());
  }
}

TEST_CASE("complex input is canonicalized and validated") {
  const json shuffled = json::parse(R"({"n_vertices":3,"edges":[[2,1],[0,2],[1,0]],"triangles":[[2,0,1]]})");
  CHECK(io::complex_from_json(shuffled).data() == full_triangle().data());
  const json missing = json::parse(R"({"n_vertices":3,"edges":[[0,1],[0,2]],"triangles":[[0,1,2]]})");
  try {
    io::complex_from_json(missing);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    REQUIRE(!e.violations().empty());
    CHECK(e.violations().front().find("(1,2)") != std::string::npos);
  }
  const auto e = parse_error_of([] { io::complex_from_json(json::parse(R"({"n_vertices":3,"edges":[[0,1,2]]})")); });
  CHECK(e.field() == "edges[0]");
}

TEST_CASE("floating point values round trip exactly") {
  Rng rng(1);
  Vector w(20);
  for (Index i = 0; i < w.size(); ++i) w(i) = std::exp(10.0 * rng.normal());
  const MetricTensor g(1, w);
  CHECK(io::metric_from_json(json::parse(io::to_json(g).dump())) == g);

  const SimplicialSignal s{1, rng.normal_vector(7)};
  const auto back = io::signal_from_json(json::parse(io::to_json(s).dump()));
  CHECK(back.order == 1);
  CHECK(back.values == s.values);

  for (Index i = 0; i < w.size(); ++i) CHECK(std::stod(io::format_double(w(i))) == w(i));
  const Matrix m = Matrix::Random(4, 3) * 1e3;
  CHECK(io::matrix_from_csv(io::matrix_csv(m)) == m);
}

TEST_CASE("metric and signal validation") {
  const auto e = parse_error_of([] { io::metric_from_json(json::parse(R"({"order":1,"weights":[1,0,2]})")); });
  CHECK(std::string(e.what()) == "weights must be positive (weights[1])");
  CHECK(e.field() == "weights");
  CHECK(parse_error_of([] { io::metric_from_json(json::parse(R"({"order":1,"weights":[1],"extra":0})")); }).field() ==
        "extra");
  CHECK(parse_error_of([] { io::signal_from_json(json::parse(R"({"order":3,"values":[]})")); }).field() == "order");

  const auto c = full_triangle();
  try {
    io::check_against(SimplicialSignal{1, vec({1, 2})}, c);
    FAIL("expected ValidationError");
  } catch (const ValidationError& err) {
    CHECK(std::string(err.what()).find("expected n_1 = 3") != std::string::npos);
  }
  io::check_against(SimplicialSignal{2, vec({1})}, c);
  CHECK_THROWS_AS(io::check_against(MetricTensor(0, vec({1, 1})), c), ValidationError);
}

TEST_CASE("components round trip") {
  const HodgeComponents h{vec({1, 2}), vec({0.5}), vec({-1, 0, 3})};
  const auto back = io::components_from_json(io::to_json(h));
  CHECK(back.x0 == h.x0);
  CHECK(back.x2 == h.x2);
  CHECK(back.xh == h.xh);
}

TEST_CASE("estimator config") {
  EstimatorConfig c;
  c.n_iterations = 7;
  c.l1_weights = {0.1, 0.2, 0.3};
  c.update_rule = UpdateRule::exact_ls;
  c.init_seed = 12;
  c.early_stop = true;
  const auto back = io::estimator_config_from_json(io::to_json(c));
  CHECK(back.n_iterations == 7);
  CHECK(back.l1_weights.triangle == 0.2);
  CHECK(back.update_rule == UpdateRule::exact_ls);
  CHECK(back.init_seed == std::optional<std::uint64_t>(12));
  CHECK(back.early_stop);
  CHECK(io::to_json(back) == io::to_json(c));

  const auto partial = io::estimator_config_from_json(json::parse(R"({"q2_penalty_weight": 5})"), c);
  CHECK(partial.q2_penalty_weight == 5.0);
  CHECK(partial.n_iterations == 7);

  CHECK(parse_error_of([] { io::estimator_config_from_json(json::parse(R"({"update_rule":"newton"})")); }).field() ==
        "update_rule");
  CHECK(parse_error_of([] { io::estimator_config_from_json(json::parse(R"({"l1_weights":[1,2]})")); }).field() ==
        "l1_weights");
  CHECK(parse_error_of([] { io::estimator_config_from_json(json::parse(R"({"n_iterations":0})")); }).field() ==
        "estimator config");
  CHECK(parse_error_of([] { io::estimator_config_from_json(json::parse(R"({"iterations":3})")); }).field() ==
        "iterations");
}

TEST_CASE("generator and experiment configs") {
  GeneratorConfig g;
  g.n_vertices = 12;
  g.connection_radius = 0.4;
  g.seed = 9;
  const auto gb = io::generator_config_from_json(io::to_json(g));
  CHECK(gb.connection_radius == std::optional<double>(0.4));
  CHECK(!gb.target_edges);
  CHECK(gb.seed == 9u);
  CHECK(io::generator_config_from_json(json::object()).target_edges == std::optional<int>(kDefaultTargetEdges));

  const auto f1 = io::fig1_config_from_json(json::parse(R"({"n_realizations": 3, "complex": {"n_vertices": 20}})"));
  const Fig1Config d1;
  CHECK(f1.n_realizations == 3);
  CHECK(f1.complex.n_vertices == 20);
  CHECK(f1.complex.target_edges == d1.complex.target_edges);
  CHECK(f1.estimator.l1_weights.node == d1.estimator.l1_weights.node);
  CHECK(f1.sigma_grid == d1.sigma_grid);
  CHECK(io::to_json(io::fig1_config_from_json(io::to_json(d1))) == io::to_json(d1));

  const auto f2 = io::fig2_config_from_json(json::parse(R"({"m_grid": [1, 2], "bandwidth": 4})"));
  CHECK(f2.m_grid == std::vector<Index>{1, 2});
  CHECK(f2.bandwidth == std::optional<Index>(4));
  CHECK(io::to_json(io::fig2_config_from_json(io::to_json(f2))) == io::to_json(f2));
  CHECK(parse_error_of([] { io::fig2_config_from_json(json::parse(R"({"m_grid": [1.5]})")); }).field() == "m_grid");
}

TEST_CASE("CSV parsing") {
  CHECK(io::matrix_from_csv("1,2\n\n3,4\n") == mat({{1, 2}, {3, 4}}));
  const auto e = parse_error_of([] { io::matrix_from_csv("1,2\n3,x\n"); });
  CHECK(e.line() == 2);
  CHECK(parse_error_of([] { io::matrix_from_csv("1,2\n3\n"); }).line() == 2);

  ExperimentCurve curve;
  curve.columns = {"M", "mse"};
  curve.rows = {{10, 0.5}, {20, 0.25}};
  CHECK(io::curve_csv(curve) == "M,mse\n10,0.5\n20,0.25\n");
}

TEST_CASE("files") {
  const auto bad = temp_file("bad.json", "{\n  \"order\": 1,\n  \"weights\": [1, 2,]\n}\n");
  const auto e = parse_error_of([&] { io::read_json(bad); });
  CHECK(e.line() == 3);

  const auto sig = temp_file("x.csv", "1.5\n-2\n0.25\n");
  const auto s = io::read_signal(sig);
  CHECK(s.order == 1);
  CHECK(s.values == vec({1.5, -2, 0.25}));
  CHECK_THROWS_AS(io::read_signal(temp_file("y.csv", "1,2\n")), ParseError);

  const auto out = std::filesystem::temp_directory_path() / "wsc_test_io" / "out.txt";
  io::write_atomic(out, "hello");
  CHECK(io::read_text(out) == "hello");
  CHECK(!std::filesystem::exists(out.string() + ".tmp"));
  CHECK_THROWS_AS(io::read_text(out.string() + ".missing"), ParseError);

  const auto cx = temp_file("c.json", io::to_json(full_triangle().data()).dump());
  CHECK(io::read_complex(cx).data() == full_triangle().data());
}
