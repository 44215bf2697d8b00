#include "wsc/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "wsc/errors.hpp"

namespace wsc::io {

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& context) {
  if (!j.is_object()) throw ParseError(context + " must be a JSON object", context);
  std::set<std::string> names(known.begin(), known.end());
  for (const auto& [key, value] : j.items()) {
    if (!names.count(key)) throw ParseError("unknown field '" + key + "' in " + context, key);
  }
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw ParseError(std::string("missing field '") + name + "'", name);
  }
  return j.at(name);
}

double as_double(const json& v, const std::string& name) {
  if (!v.is_number()) throw ParseError("field '" + name + "' must be a number", name);
  return v.get<double>();
}

long long as_integer(const json& v, const std::string& name) {
  if (!v.is_number_integer()) throw ParseError("field '" + name + "' must be an integer", name);
  return v.get<long long>();
}

std::uint64_t as_seed(const json& v, const std::string& name) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ParseError("field '" + name + "' must be a nonnegative integer", name);
  }
  return v.get<std::uint64_t>();
}

bool as_bool(const json& v, const std::string& name) {
  if (!v.is_boolean()) throw ParseError("field '" + name + "' must be true or false", name);
  return v.get<bool>();
}

Vector as_vector(const json& v, const std::string& name) {
  if (!v.is_array()) throw ParseError("field '" + name + "' must be an array of numbers", name);
  Vector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Index>(i)) = as_double(v[i], name + "[" + std::to_string(i) + "]");
  }
  return out;
}

json vector_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

template <std::size_t N>
std::vector<std::array<int, N>> as_tuples(const json& v, const std::string& name) {
  if (!v.is_array()) throw ParseError("field '" + name + "' must be an array", name);
  std::vector<std::array<int, N>> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string item = name + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != N) {
      throw ParseError("field '" + item + "' must list " + std::to_string(N) + " vertex indices", item);
    }
    std::array<int, N> t{};
    for (std::size_t k = 0; k < N; ++k) t[k] = static_cast<int>(as_integer(v[i][k], item));
    out.push_back(t);
  }
  return out;
}

std::string rule_name(UpdateRule r) { return r == UpdateRule::exact_ls ? "exact_ls" : "paper_literal"; }

UpdateRule rule_from(const json& v) {
  if (v == "paper_literal") return UpdateRule::paper_literal;
  if (v == "exact_ls") return UpdateRule::exact_ls;
  throw ParseError("update_rule must be \"paper_literal\" or \"exact_ls\"", "update_rule");
}

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

}  // namespace

json to_json(const ComplexData& data) {
  return {{"n_vertices", data.n_vertices}, {"edges", data.edges}, {"triangles", data.triangles}};
}

ComplexData complex_data_from_json(const json& j) {
  reject_unknown(j, {"n_vertices", "edges", "triangles"}, "complex");
  ComplexData d;
  d.n_vertices = static_cast<int>(as_integer(field(j, "n_vertices"), "n_vertices"));
  d.edges = as_tuples<2>(field(j, "edges"), "edges");
  if (j.contains("triangles")) d.triangles = as_tuples<3>(j.at("triangles"), "triangles");
  return d;
}

SimplicialComplex2 complex_from_json(const json& j) { return SimplicialComplex2(complex_data_from_json(j)); }

json to_json(const MetricTensor& g) { return {{"order", g.order()}, {"weights", vector_json(g.weights())}}; }

MetricTensor metric_from_json(const json& j) {
  reject_unknown(j, {"order", "weights"}, "metric");
  const int order = static_cast<int>(as_integer(field(j, "order"), "order"));
  const Vector w = as_vector(field(j, "weights"), "weights");
  for (Index i = 0; i < w.size(); ++i) {
    if (!(w(i) > 0.0)) {
      throw ParseError("weights must be positive (weights[" + std::to_string(i) + "])", "weights");
    }
  }
  try {
    return MetricTensor(order, w);
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), "order");
  }
}

json to_json(const SimplicialSignal& s) { return {{"order", s.order}, {"values", vector_json(s.values)}}; }

SimplicialSignal signal_from_json(const json& j) {
  reject_unknown(j, {"order", "values"}, "signal");
  SimplicialSignal s;
  s.order = static_cast<int>(as_integer(field(j, "order"), "order"));
  if (s.order < 0 || s.order > 2) throw ParseError("signal order must be 0, 1 or 2", "order");
  s.values = as_vector(field(j, "values"), "values");
  return s;
}

json to_json(const HodgeComponents& c) {
  return {{"x0", vector_json(c.x0)}, {"x2", vector_json(c.x2)}, {"xh", vector_json(c.xh)}};
}

HodgeComponents components_from_json(const json& j) {
  reject_unknown(j, {"x0", "x2", "xh"}, "components");
  return {as_vector(field(j, "x0"), "x0"), as_vector(field(j, "x2"), "x2"), as_vector(field(j, "xh"), "xh")};
}

json to_json(const EstimatorConfig& c) {
  json j = {{"n_iterations", c.n_iterations},
            {"q2_tolerance", c.q2_tolerance},
            {"q2_max_steps", c.q2_max_steps},
            {"q2_penalty_weight", c.q2_penalty_weight},
            {"l1_weights", {c.l1_weights.node, c.l1_weights.triangle, c.l1_weights.harmonic}},
            {"w_floor", c.w_floor},
            {"update_rule", rule_name(c.update_rule)},
            {"early_stop", c.early_stop},
            {"early_stop_tolerance", c.early_stop_tolerance},
            {"l1_tolerance", c.l1_tolerance},
            {"l1_max_steps", c.l1_max_steps}};
  if (c.init_seed) j["seed"] = *c.init_seed;
  return j;
}

EstimatorConfig estimator_config_from_json(const json& j, const EstimatorConfig& base) {
  reject_unknown(j,
                 {"n_iterations", "q2_tolerance", "q2_max_steps", "q2_penalty_weight", "l1_weights",
                  "w_floor", "update_rule", "early_stop", "early_stop_tolerance", "l1_tolerance",
                  "l1_max_steps", "seed"},
                 "estimator config");
  EstimatorConfig c = base;
  if (j.contains("n_iterations")) c.n_iterations = static_cast<int>(as_integer(j["n_iterations"], "n_iterations"));
  if (j.contains("q2_tolerance")) c.q2_tolerance = as_double(j["q2_tolerance"], "q2_tolerance");
  if (j.contains("q2_max_steps")) c.q2_max_steps = static_cast<int>(as_integer(j["q2_max_steps"], "q2_max_steps"));
  if (j.contains("q2_penalty_weight")) c.q2_penalty_weight = as_double(j["q2_penalty_weight"], "q2_penalty_weight");
  if (j.contains("l1_weights")) {
    const Vector l = as_vector(j["l1_weights"], "l1_weights");
    if (l.size() != 3) throw ParseError("l1_weights must have 3 entries (node, triangle, harmonic)", "l1_weights");
    c.l1_weights = {l(0), l(1), l(2)};
  }
  if (j.contains("w_floor")) c.w_floor = as_double(j["w_floor"], "w_floor");
  if (j.contains("update_rule")) c.update_rule = rule_from(j["update_rule"]);
  if (j.contains("early_stop")) c.early_stop = as_bool(j["early_stop"], "early_stop");
  if (j.contains("early_stop_tolerance")) {
    c.early_stop_tolerance = as_double(j["early_stop_tolerance"], "early_stop_tolerance");
  }
  if (j.contains("l1_tolerance")) c.l1_tolerance = as_double(j["l1_tolerance"], "l1_tolerance");
  if (j.contains("l1_max_steps")) c.l1_max_steps = static_cast<int>(as_integer(j["l1_max_steps"], "l1_max_steps"));
  if (j.contains("seed")) c.init_seed = as_seed(j["seed"], "seed");
  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), "estimator config");
  }
  return c;
}

json to_json(const GeneratorConfig& c) {
  json j = {{"n_vertices", c.n_vertices},
            {"fill_all_triangles", c.fill_all_triangles},
            {"triangle_probability", c.triangle_probability},
            {"require_connected", c.require_connected},
            {"max_retries", c.max_retries},
            {"seed", c.seed}};
  if (c.connection_radius) j["connection_radius"] = *c.connection_radius;
  if (c.target_edges) j["target_edges"] = *c.target_edges;
  if (c.edge_probability) j["edge_probability"] = *c.edge_probability;
  return j;
}

GeneratorConfig generator_config_from_json(const json& j, const GeneratorConfig& base) {
  reject_unknown(j,
                 {"n_vertices", "connection_radius", "target_edges", "edge_probability",
                  "fill_all_triangles", "triangle_probability", "require_connected", "max_retries", "seed"},
                 "generator config");
  GeneratorConfig c = base;
  if (j.contains("connection_radius") || j.contains("target_edges") || j.contains("edge_probability")) {
    c.connection_radius.reset();
    c.target_edges.reset();
    c.edge_probability.reset();
  }
  if (j.contains("n_vertices")) c.n_vertices = static_cast<int>(as_integer(j["n_vertices"], "n_vertices"));
  if (j.contains("connection_radius")) c.connection_radius = as_double(j["connection_radius"], "connection_radius");
  if (j.contains("target_edges")) c.target_edges = static_cast<int>(as_integer(j["target_edges"], "target_edges"));
  if (j.contains("edge_probability")) c.edge_probability = as_double(j["edge_probability"], "edge_probability");
  if (!c.connection_radius && !c.target_edges && !c.edge_probability) c.target_edges = kDefaultTargetEdges;
  if (j.contains("fill_all_triangles")) c.fill_all_triangles = as_bool(j["fill_all_triangles"], "fill_all_triangles");
  if (j.contains("triangle_probability")) {
    c.triangle_probability = as_double(j["triangle_probability"], "triangle_probability");
  }
  if (j.contains("require_connected")) c.require_connected = as_bool(j["require_connected"], "require_connected");
  if (j.contains("max_retries")) c.max_retries = static_cast<int>(as_integer(j["max_retries"], "max_retries"));
  if (j.contains("seed")) c.seed = as_seed(j["seed"], "seed");
  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), "generator config");
  }
  return c;
}

json to_json(const SignalGenConfig& c) {
  json j = {{"amplitude", c.amplitude}, {"seed", c.seed}};
  if (c.sparsity_0) j["sparsity_0"] = *c.sparsity_0;
  if (c.sparsity_2) j["sparsity_2"] = *c.sparsity_2;
  if (c.sparsity_h) j["sparsity_h"] = *c.sparsity_h;
  if (c.bandwidth) j["bandwidth"] = *c.bandwidth;
  return j;
}

SignalGenConfig signal_config_from_json(const json& j, const SignalGenConfig& base) {
  reject_unknown(j, {"sparsity_0", "sparsity_2", "sparsity_h", "bandwidth", "amplitude", "seed"},
                 "signal config");
  SignalGenConfig c = base;
  for (const char* name : {"sparsity_0", "sparsity_2", "sparsity_h", "bandwidth"}) {
    if (!j.contains(name)) continue;
    const auto v = as_integer(j[name], name);
    if (v < 0) throw ParseError(std::string(name) + " must be >= 0", name);
    const std::string n(name);
    auto& slot = n == "sparsity_0" ? c.sparsity_0
               : n == "sparsity_2" ? c.sparsity_2
               : n == "sparsity_h" ? c.sparsity_h
                                   : c.bandwidth;
    slot = static_cast<Index>(v);
  }
  if (j.contains("amplitude")) c.amplitude = as_double(j["amplitude"], "amplitude");
  if (j.contains("seed")) c.seed = as_seed(j["seed"], "seed");
  return c;
}

json to_json(const Fig1Config& c) {
  return {{"complex", to_json(c.complex)},
          {"signal", to_json(c.signal)},
          {"sigma_grid", c.sigma_grid},
          {"n_realizations", c.n_realizations},
          {"estimator", to_json(c.estimator)},
          {"scale_l1_with_sigma", c.scale_l1_with_sigma},
          {"metric_lower", c.metric_lower},
          {"seed", c.seed}};
}

Fig1Config fig1_config_from_json(const json& j) {
  reject_unknown(j,
                 {"experiment", "complex", "signal", "sigma_grid", "n_realizations", "estimator",
                  "scale_l1_with_sigma", "metric_lower", "seed", "threads"},
                 "fig1 config");
  Fig1Config c;
  if (j.contains("complex")) c.complex = generator_config_from_json(j["complex"], c.complex);
  if (j.contains("signal")) c.signal = signal_config_from_json(j["signal"], c.signal);
  if (j.contains("sigma_grid")) {
    const Vector s = as_vector(j["sigma_grid"], "sigma_grid");
    c.sigma_grid.assign(s.data(), s.data() + s.size());
  }
  if (j.contains("n_realizations")) c.n_realizations = static_cast<int>(as_integer(j["n_realizations"], "n_realizations"));
  if (j.contains("estimator")) c.estimator = estimator_config_from_json(j["estimator"], c.estimator);
  if (j.contains("scale_l1_with_sigma")) {
    c.scale_l1_with_sigma = as_bool(j["scale_l1_with_sigma"], "scale_l1_with_sigma");
  }
  if (j.contains("metric_lower")) c.metric_lower = as_double(j["metric_lower"], "metric_lower");
  if (j.contains("seed")) c.seed = as_seed(j["seed"], "seed");
  if (j.contains("threads")) c.threads = static_cast<int>(as_integer(j["threads"], "threads"));
  return c;
}

json to_json(const Fig2Config& c) {
  json j = {{"complex", to_json(c.complex)},
            {"m_grid", c.m_grid},
            {"n_complexes", c.n_complexes},
            {"n_signal_draws", c.n_signal_draws},
            {"metric_lower", c.metric_lower},
            {"seed", c.seed}};
  if (c.bandwidth) j["bandwidth"] = *c.bandwidth;
  return j;
}

Fig2Config fig2_config_from_json(const json& j) {
  reject_unknown(j,
                 {"experiment", "complex", "m_grid", "n_complexes", "n_signal_draws", "bandwidth",
                  "metric_lower", "seed", "threads"},
                 "fig2 config");
  Fig2Config c;
  if (j.contains("complex")) c.complex = generator_config_from_json(j["complex"], c.complex);
  if (j.contains("m_grid")) {
    const auto& g = j["m_grid"];
    if (!g.is_array()) throw ParseError("field 'm_grid' must be an array of integers", "m_grid");
    c.m_grid.clear();
    for (const auto& v : g) c.m_grid.push_back(static_cast<Index>(as_integer(v, "m_grid")));
  }
  if (j.contains("n_complexes")) c.n_complexes = static_cast<int>(as_integer(j["n_complexes"], "n_complexes"));
  if (j.contains("n_signal_draws")) {
    c.n_signal_draws = static_cast<int>(as_integer(j["n_signal_draws"], "n_signal_draws"));
  }
  if (j.contains("bandwidth")) c.bandwidth = static_cast<Index>(as_integer(j["bandwidth"], "bandwidth"));
  if (j.contains("metric_lower")) c.metric_lower = as_double(j["metric_lower"], "metric_lower");
  if (j.contains("seed")) c.seed = as_seed(j["seed"], "seed");
  if (j.contains("threads")) c.threads = static_cast<int>(as_integer(j["threads"], "threads"));
  return c;
}

json to_json(const EstimationResult& r) {
  return {{"components", to_json(r.components)},
          {"g2_hat", to_json(r.g2_hat)},
          {"x_hat", to_json(SimplicialSignal{1, r.x_hat})},
          {"objective_trace", r.objective_trace},
          {"iterations", r.iterations},
          {"feasible", r.feasible},
          {"feasibility_gap", r.feasibility_gap},
          {"converged", r.converged}};
}

void check_against(const SimplicialSignal& s, const SimplicialComplex2& complex) {
  const Index expected = complex.count(s.order);
  if (s.values.size() != expected) {
    throw ValidationError("signal of order " + std::to_string(s.order) + " has length " +
                          std::to_string(s.values.size()) + ", expected n_" + std::to_string(s.order) +
                          " = " + std::to_string(expected));
  }
}

void check_against(const MetricTensor& g, const SimplicialComplex2& complex) {
  const Index expected = complex.count(g.order());
  if (g.size() != expected) {
    throw ValidationError("metric of order " + std::to_string(g.order()) + " has length " +
                          std::to_string(g.size()) + ", expected n_" + std::to_string(g.order()) +
                          " = " + std::to_string(expected));
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string matrix_csv(const Matrix& m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) {
      if (k) out += ',';
      out += format_double(m(i, k));
    }
    out += '\n';
  }
  return out;
}

Matrix matrix_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      const std::string trimmed = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(trimmed.c_str(), &end);
      if (trimmed.empty() || *end != '\0' || errno == ERANGE) {
        throw ParseError("line " + std::to_string(lineno) + ": '" + trimmed + "' is not a number", "csv", lineno);
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(rows.front().size()) +
                           " columns, got " + std::to_string(row.size()),
                       "csv", lineno);
    }
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Index>(rows.size()), rows.empty() ? 0 : static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k) m(static_cast<Index>(i), static_cast<Index>(k)) = rows[i][k];
  return m;
}

std::string curve_csv(const ExperimentCurve& curve) {
  std::string out;
  for (std::size_t i = 0; i < curve.columns.size(); ++i) {
    if (i) out += ',';
    out += curve.columns[i];
  }
  out += '\n';
  for (const auto& row : curve.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string(), path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(path.string() + ": line " + std::to_string(line) + ": malformed JSON", path.string(), line);
  }
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw Error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

SimplicialComplex2 read_complex(const std::filesystem::path& path) { return complex_from_json(read_json(path)); }

MetricTensor read_metric(const std::filesystem::path& path) { return metric_from_json(read_json(path)); }

SimplicialSignal read_signal(const std::filesystem::path& path, int csv_order) {
  if (path.extension() == ".csv") {
    const Matrix m = matrix_from_csv(read_text(path));
    if (m.cols() > 1) throw ParseError("signal CSV must have one value per line", "csv");
    return {csv_order, m.size() ? Vector(m.col(0)) : Vector()};
  }
  return signal_from_json(read_json(path));
}

}  // namespace wsc::io
