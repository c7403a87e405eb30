#pragma once

#include <cstdint>
#include <string>

#include "gdn/perturb.hpp"
#include "gdn/solver.hpp"

namespace gdn {

// Edge-list text format: one "i j [w]" per line, 0-indexed, whitespace
// delimited, '#' starts a comment. Writing uses canonical order (i < j,
// ascending) and omits unit weights.
Graph read_edge_list(const std::string& path, int n = -1);
void write_edge_list(const std::string& path, const Graph& g);

// Delimiter-separated matrix, one row per node; readers accept commas or
// whitespace, writers emit commas with 17 significant digits.
Matrix read_matrix(const std::string& path, bool header = false);
void write_matrix(const std::string& path, const Matrix& m);

// Trace CSV: iter,objective,lagrangian,r1..r4,kkt_dual_max,
// kkt_stationarity,mu1..mu4. Absent values render as empty fields.
void write_trace_csv(const std::string& path, const DiagnosticsTrace& trace);
DiagnosticsTrace read_trace_csv(const std::string& path);

// Flat key-value JSON round trip for solver configs.
std::string solver_config_to_json(const SolverConfig& cfg);
SolverConfig solver_config_from_json(const std::string& text);

std::string noise_spec_to_json(const NoiseSpec& spec);
NoiseSpec noise_spec_from_json(const std::string& text);

// FNV-1a 64-bit over file bytes, for provenance sidecars.
std::uint64_t fnv1a64_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace gdn
