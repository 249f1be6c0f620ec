#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "deblur1d/basis.hpp"
#include "deblur1d/forward.hpp"
#include "deblur1d/scam.hpp"

namespace deblur {

using nlohmann::json;

/// Signal file: { "n": int, "nodal": [float; N] }.
json signal_to_json(const PLFunction& f);
PLFunction signal_from_json(const json& j);
void save_signal(const std::filesystem::path& path, const PLFunction& f);
PLFunction load_signal(const std::filesystem::path& path);

/// CSV with columns x,value at the mesh nodes.
void save_signal_csv(const std::filesystem::path& path, const PLFunction& f);

/// Measurement file: { "k", "coeffs", "sigma", "meta": {...} }.
json measurement_to_json(const Measurement& m);
Measurement measurement_from_json(const json& j);
void save_measurement(const std::filesystem::path& path, const Measurement& m);
Measurement load_measurement(const std::filesystem::path& path);

/// Run report with the Table-1-style columns.
json report_to_json(const RunReport& r, int N, double epsilon);

/// Binary cache of basis matrices: little-endian doubles after a JSON
/// header keyed by (n, kind, epsilon, q).
void save_basis_cache(const std::filesystem::path& path, const HierarchicalBasis& basis);
std::optional<HierarchicalBasis> load_basis_cache(const std::filesystem::path& path, int n,
                                                  InnerKind kind, const PriorParams& p);

/// Chain dump: JSON header { "dim", "count", "thin" } + packed doubles.
void save_chain(const std::filesystem::path& path, const ChainOutput& chain);

}  // namespace deblur
