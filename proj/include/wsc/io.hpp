#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "wsc/experiments.hpp"
#include "wsc/flow_estimator.hpp"
#include "wsc/hodge.hpp"
#include "wsc/synth.hpp"

// File formats. JSON numbers are written in shortest round-trip form; CSV
// values use 17 significant digits. Readers throw ParseError naming the field
// (and line, where one exists).
namespace wsc::io {

using nlohmann::json;

// Complex: {"n_vertices": N, "edges": [[i,j],...], "triangles": [[i,j,k],...]}
json to_json(const ComplexData& data);
ComplexData complex_data_from_json(const json& j);
/// Sorts, then validates; a structurally invalid complex raises ValidationError.
SimplicialComplex2 complex_from_json(const json& j);

// Metric: {"order": k, "weights": [...]}
json to_json(const MetricTensor& g);
MetricTensor metric_from_json(const json& j);

// Signal: {"order": k, "values": [...]}
json to_json(const SimplicialSignal& s);
SimplicialSignal signal_from_json(const json& j);

json to_json(const HodgeComponents& c);
HodgeComponents components_from_json(const json& j);

json to_json(const EstimatorConfig& c);
/// Config readers start from `base` and override the fields present in `j`.
EstimatorConfig estimator_config_from_json(const json& j, const EstimatorConfig& base = {});
json to_json(const GeneratorConfig& c);
/// Setting any graph mode field clears the modes inherited from `base`; with
/// no mode at all the geometric mode with kDefaultTargetEdges is used.
GeneratorConfig generator_config_from_json(const json& j, const GeneratorConfig& base = {});
json to_json(const SignalGenConfig& c);
SignalGenConfig signal_config_from_json(const json& j, const SignalGenConfig& base = {});
json to_json(const Fig1Config& c);
Fig1Config fig1_config_from_json(const json& j);
json to_json(const Fig2Config& c);
Fig2Config fig2_config_from_json(const json& j);

/// Components, G2 weights, reconstruction, objective trace and solver flags.
json to_json(const EstimationResult& r);

/// Throws ValidationError naming the expected n_k if the length does not match.
void check_against(const SimplicialSignal& s, const SimplicialComplex2& complex);
void check_against(const MetricTensor& g, const SimplicialComplex2& complex);

/// 17-significant-digit decimal.
std::string format_double(double v);

std::string matrix_csv(const Matrix& m);
/// Comma separated rows; blank lines are skipped.
Matrix matrix_from_csv(const std::string& text);
/// Header row, then one row per curve point.
std::string curve_csv(const ExperimentCurve& curve);

std::string read_text(const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

SimplicialComplex2 read_complex(const std::filesystem::path& path);
MetricTensor read_metric(const std::filesystem::path& path);
/// JSON signal, or CSV with one value per line (order given by `csv_order`).
SimplicialSignal read_signal(const std::filesystem::path& path, int csv_order = 1);

}  // namespace wsc::io
