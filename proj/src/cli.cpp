#include "wsc/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wsc/errors.hpp"
#include "wsc/experiments.hpp"
#include "wsc/flow_estimator.hpp"
#include "wsc/hodge.hpp"
#include "wsc/io.hpp"
#include "wsc/metric_learner.hpp"
#include "wsc/synth.hpp"

namespace wsc {

namespace {

namespace fs = std::filesystem;
using io::json;

struct Options {
  std::string input, output, config, signal, snapshots, truth;
  std::string g0, g1, g2;
  int order = 1;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool verbose = false;
  bool floor_degenerate = false;
};

/// Writes `content` to the output path, or to `out` when none was given.
void emit(const Options& o, std::ostream& out, const std::string& content) {
  if (o.output.empty()) {
    out << content;
  } else {
    io::write_atomic(o.output, content);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

MetricTensor metric_or_identity(const std::string& path, int order, const SimplicialComplex2& complex) {
  if (path.empty()) return MetricTensor::identity(order, complex.count(order));
  MetricTensor g = io::read_metric(path);
  if (g.order() != order) {
    throw ValidationError("metric file " + path + " has order " + std::to_string(g.order()) + ", expected " +
                          std::to_string(order));
  }
  io::check_against(g, complex);
  return g;
}

WeightedComplex weighted(const Options& o, const SimplicialComplex2& complex) {
  return WeightedComplex(complex, metric_or_identity(o.g0, 0, complex), metric_or_identity(o.g1, 1, complex),
                         metric_or_identity(o.g2, 2, complex));
}

Vector edge_signal(const std::string& path, const SimplicialComplex2& complex) {
  const SimplicialSignal s = io::read_signal(path, 1);
  if (s.order != 1) throw ValidationError("expected an edge signal (order 1), got order " + std::to_string(s.order));
  io::check_against(s, complex);
  return s.values;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const ComplexData data = canonicalize(io::complex_data_from_json(io::read_json(o.input)));
  const ValidationReport report = validate(data);
  if (!report.ok()) throw ValidationError("complex is not valid", report.violations);
  const SimplicialComplex2 complex(data);
  emit(o, out,
       dump({{"valid", true},
             {"n_vertices", complex.n_vertices()},
             {"n_edges", complex.n_edges()},
             {"n_triangles", complex.n_triangles()}}));
  return exit_ok;
}

int cmd_incidence(const Options& o, std::ostream& out) {
  const SimplicialComplex2 complex = io::read_complex(o.input);
  emit(o, out, io::matrix_csv(o.order == 1 ? incidence_b1(complex) : incidence_b2(complex)));
  return exit_ok;
}

int cmd_laplacian(const Options& o, std::ostream& out) {
  const SimplicialComplex2 complex = io::read_complex(o.input);
  emit(o, out, io::matrix_csv(hodge_laplacian(weighted(o, complex), o.order).full));
  return exit_ok;
}

int cmd_decompose(const Options& o, std::ostream& out) {
  const SimplicialComplex2 complex = io::read_complex(o.input);
  const WeightedComplex wc = weighted(o, complex);
  const Vector x = edge_signal(o.signal, complex);
  const HodgeComponents c = hodge_decompose(wc, x);
  const EdgeFlowParts parts = edge_flow_parts(wc, c);
  json j = io::to_json(c);
  j["irrotational"] = io::to_json(SimplicialSignal{1, parts.irrotational})["values"];
  j["solenoidal"] = io::to_json(SimplicialSignal{1, parts.solenoidal})["values"];
  j["harmonic"] = io::to_json(SimplicialSignal{1, parts.harmonic})["values"];
  emit(o, out, dump(j));
  return exit_ok;
}

int cmd_denoise(const Options& o, std::ostream& out, std::ostream& err) {
  const SimplicialComplex2 complex = io::read_complex(o.input);
  const WeightedComplex wc = weighted(o, complex);
  const Vector x_tilde = edge_signal(o.signal, complex);
  EstimatorConfig config = o.config.empty() ? EstimatorConfig{} : io::estimator_config_from_json(io::read_json(o.config));
  if (o.seed) config.init_seed = *o.seed;
  const EstimationResult r = estimate(wc, x_tilde, std::nullopt, config);
  json j = io::to_json(r);
  if (!o.truth.empty()) j["rho"] = correlation(r.x_hat, edge_signal(o.truth, complex));
  emit(o, out, dump(j));
  if (o.verbose) {
    err << "iterations " << r.iterations << ", final objective "
        << (r.objective_trace.empty() ? 0.0 : r.objective_trace.back()) << "\n";
  }
  return r.converged && r.feasible ? exit_ok : exit_not_converged;
}

int cmd_learn_metric(const Options& o, std::ostream& out) {
  const SimplicialComplex2 complex = io::read_complex(o.input);
  const Matrix x = io::matrix_from_csv(io::read_text(o.snapshots));
  if (x.rows() != complex.n_edges()) {
    throw ValidationError("snapshot matrix has " + std::to_string(x.rows()) + " rows, expected n_1 = " +
                          std::to_string(complex.n_edges()));
  }
  MetricLearnerOptions opts;
  if (o.floor_degenerate) opts.policy = DegeneratePolicy::floor;
  emit(o, out, dump(io::to_json(learn_metric(complex, x, opts))));
  return exit_ok;
}

int cmd_gen_complex(const Options& o, std::ostream& out, std::ostream& err) {
  GeneratorConfig config = o.config.empty() ? io::generator_config_from_json(json::object())
                                            : io::generator_config_from_json(io::read_json(o.config));
  if (o.seed) config.seed = *o.seed;
  const GeneratedComplex g = generate_complex(config);
  emit(o, out, dump(io::to_json(g.complex.data())));
  if (o.verbose) {
    err << g.complex.n_vertices() << " vertices, " << g.complex.n_edges() << " edges, "
        << g.complex.n_triangles() << " triangles (radius " << g.radius << ", attempts " << g.attempts << ")\n";
  }
  return exit_ok;
}

/// Writes the curve CSV and its metadata JSON next to it (same stem, .json).
void emit_curve(const Options& o, std::ostream& out, const ExperimentCurve& curve) {
  const std::string csv = io::curve_csv(curve);
  if (o.output.empty()) {
    out << csv;
    return;
  }
  fs::path meta = o.output;
  meta.replace_extension(".json");
  if (meta == fs::path(o.output)) meta += ".meta.json";
  io::write_atomic(meta, dump(curve.metadata));
  io::write_atomic(o.output, csv);
}

int cmd_fig1(const Options& o, std::ostream& out, std::ostream& err) {
  Fig1Config config = o.config.empty() ? Fig1Config{} : io::fig1_config_from_json(io::read_json(o.config));
  if (o.seed) config.seed = *o.seed;
  if (o.threads) config.threads = *o.threads;
  const ExperimentCurve curve = run_fig1(config);
  emit_curve(o, out, curve);
  if (o.verbose) err << curve.metadata["complex"].dump() << "\n";
  return curve.metadata["failed_realizations"].get<int>() == 0 ? exit_ok : exit_not_converged;
}

int cmd_fig2(const Options& o, std::ostream& out, std::ostream& err) {
  Fig2Config config = o.config.empty() ? Fig2Config{} : io::fig2_config_from_json(io::read_json(o.config));
  if (o.seed) config.seed = *o.seed;
  if (o.threads) config.threads = *o.threads;
  const ExperimentCurve curve = run_fig2(config);
  emit_curve(o, out, curve);
  if (o.verbose) err << curve.metadata["failed_signal_draws"].dump() << " degenerate draws\n";
  return curve.metadata["failed_complexes"].get<int>() == 0 ? exit_ok : exit_not_converged;
}

void report(std::ostream& err, const std::string& kind, const std::string& message, json extra = json::object()) {
  extra["error"] = kind;
  extra["message"] = message;
  err << extra.dump() << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Signal processing over weighted simplicial complexes", "wsc"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", o.seed, "Master seed (overrides the config file)")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", o.threads, "Worker threads for fig1/fig2")
      ->envname("WSC_THREADS")
      ->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", o.verbose, "Progress notes on stderr");

  auto input = [&](CLI::App* sub) {
    sub->add_option("-i,--input", o.input, "Complex JSON")->required()->check(CLI::ExistingFile);
  };
  auto output = [&](CLI::App* sub) { sub->add_option("-o,--output", o.output, "Output path (default stdout)"); };
  auto metrics = [&](CLI::App* sub) {
    sub->add_option("--g0", o.g0, "Vertex metric JSON (default identity)")->check(CLI::ExistingFile);
    sub->add_option("--g1", o.g1, "Edge metric JSON (default identity)")->check(CLI::ExistingFile);
    sub->add_option("--g2", o.g2, "Triangle metric JSON (default identity)")->check(CLI::ExistingFile);
  };
  auto config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Config JSON")->check(CLI::ExistingFile);
  };

  std::function<int()> action;

  auto* validate_cmd = app.add_subcommand("validate", "Check a complex file");
  input(validate_cmd);
  output(validate_cmd);
  validate_cmd->callback([&] { action = [&] { return cmd_validate(o, out); }; });

  auto* incidence_cmd = app.add_subcommand("incidence", "Incidence matrix B_k as CSV");
  input(incidence_cmd);
  output(incidence_cmd);
  incidence_cmd->add_option("-k,--order", o.order, "1 or 2")->required()->check(CLI::IsMember({1, 2}));
  incidence_cmd->callback([&] { action = [&] { return cmd_incidence(o, out); }; });

  auto* laplacian_cmd = app.add_subcommand("laplacian", "Weighted Hodge Laplacian L_k as CSV");
  input(laplacian_cmd);
  output(laplacian_cmd);
  metrics(laplacian_cmd);
  laplacian_cmd->add_option("-k,--order", o.order, "0, 1 or 2")->required()->check(CLI::IsMember({0, 1, 2}));
  laplacian_cmd->callback([&] { action = [&] { return cmd_laplacian(o, out); }; });

  auto* decompose_cmd = app.add_subcommand("decompose", "Weighted Hodge decomposition of an edge flow");
  input(decompose_cmd);
  output(decompose_cmd);
  metrics(decompose_cmd);
  decompose_cmd->add_option("-x,--signal", o.signal, "Edge flow (JSON or CSV)")->required()->check(CLI::ExistingFile);
  decompose_cmd->callback([&] { action = [&] { return cmd_decompose(o, out); }; });

  auto* denoise_cmd = app.add_subcommand("denoise", "Joint flow and triangle metric estimation");
  input(denoise_cmd);
  output(denoise_cmd);
  config(denoise_cmd);
  denoise_cmd->add_option("--g0", o.g0, "Vertex metric JSON (default identity)")->check(CLI::ExistingFile);
  denoise_cmd->add_option("--g1", o.g1, "Edge metric JSON (default identity)")->check(CLI::ExistingFile);
  denoise_cmd->add_option("-x,--signal", o.signal, "Noisy edge flow (JSON or CSV)")
      ->required()
      ->check(CLI::ExistingFile);
  denoise_cmd->add_option("--truth", o.truth, "Clean edge flow; adds rho to the result")->check(CLI::ExistingFile);
  denoise_cmd->callback([&] { action = [&] { return cmd_denoise(o, out, err); }; });

  auto* learn_cmd = app.add_subcommand("learn-metric", "Learn the triangle metric from edge snapshots");
  input(learn_cmd);
  output(learn_cmd);
  learn_cmd->add_option("-X,--snapshots", o.snapshots, "CSV, rows = edges, columns = snapshots")
      ->required()
      ->check(CLI::ExistingFile);
  learn_cmd->add_flag("--floor", o.floor_degenerate, "Floor degenerate triangles instead of failing");
  learn_cmd->callback([&] { action = [&] { return cmd_learn_metric(o, out); }; });

  auto* gen_cmd = app.add_subcommand("gen-complex", "Random complex");
  config(gen_cmd);
  output(gen_cmd);
  gen_cmd->callback([&] { action = [&] { return cmd_gen_complex(o, out, err); }; });

  auto* fig1_cmd = app.add_subcommand("fig1", "Correlation versus noise: joint estimate against flat metric");
  config(fig1_cmd);
  output(fig1_cmd);
  fig1_cmd->callback([&] { action = [&] { return cmd_fig1(o, out, err); }; });

  auto* fig2_cmd = app.add_subcommand("fig2", "Metric learning error versus number of snapshots");
  config(fig2_cmd);
  output(fig2_cmd);
  fig2_cmd->callback([&] { action = [&] { return cmd_fig2(o, out, err); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    report(err, "usage", e.what());
    return exit_invalid;
  }

  try {
    return action();
  } catch (const ParseError& e) {
    json extra;
    if (!e.field().empty()) extra["field"] = e.field();
    if (e.line() > 0) extra["line"] = e.line();
    report(err, e.kind(), e.what(), extra);
  } catch (const ValidationError& e) {
    report(err, e.kind(), e.what(), {{"violations", e.violations()}});
  } catch (const DegenerateError& e) {
    report(err, e.kind(), e.what(), {{"triangles", e.indices()}});
  } catch (const Error& e) {
    report(err, e.kind(), e.what());
  } catch (const json::exception& e) {
    report(err, "parse", e.what());
  }
  return exit_invalid;
}

}  // namespace wsc
