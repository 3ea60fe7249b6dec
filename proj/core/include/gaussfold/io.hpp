#pragma once

#include <string>

#include "gaussfold/hyperspace.hpp"
#include "gaussfold/manifold.hpp"
#include "gaussfold/retraction.hpp"

namespace gaussfold {

/// Decimal with 12 significant digits, the fixed width of every scalar the
/// tools print.
std::string format_scalar(double value);

// JSON text codecs. Loaders validate the type invariants and report the
// line of the offending element; planes are re-orthonormalized on input and
// rejected when the orthonormality defect exceeds 1e-6.
std::string plane_to_json(const Plane& plane);
Plane plane_from_json(const std::string& text);

std::string manifold_to_json(const SampledManifold& w);
SampledManifold manifold_from_json(const std::string& text);

std::string gauss_graph_to_json(const GaussGraph& graph);
GaussGraph gauss_graph_from_json(const std::string& text);

std::string step_function_to_json(const StepFunction& f);
std::string step_function_to_csv(const StepFunction& f);

std::string trace_to_json(const RetractionTrace& trace);

/// Per-stage table: header "tau,gauss_diameter,margin", one row per stage
/// in tau order, 12 significant digits.
std::string trace_to_csv(const RetractionTrace& trace);

std::string probe_to_json(const ProbeReport& report);
std::string probe_to_csv(const ProbeReport& report);

std::string covering_to_json(const CoveringReport& report);
std::string covering_to_csv(const CoveringReport& report);

// Whole-file helpers.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
SampledManifold load_manifold(const std::string& path);

}  // namespace gaussfold
