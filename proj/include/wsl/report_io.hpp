#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "wsl/families.hpp"
#include "wsl/manifold.hpp"
#include "wsl/sequence.hpp"
#include "wsl/swif.hpp"

namespace wsl {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "wsl";
inline constexpr const char* kToolVersion = "0.1.0";

/// %.17g rendering used for all CSV floating-point output.
std::string format_g17(double v);

/// FNV-1a hash of the canonical config serialization, as 16 hex digits.
std::string config_hash(const Json& config);

/// Provenance block stamped into every report.
Json tool_block(const Json& config);

/// Write-through-temp-then-rename; parent directories are created.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Parse a manifold specification:
///   {"family": <name>, "params": {...}, "grid": n}    named generator
///   {"samples": [...], "domain_end": x}               sampled profile
///   {"family": "custom", "expression": "...", "domain_end": x, ...}
WarpingFunction manifold_from_spec(const Json& spec);
WarpingFunction load_manifold_spec(const std::filesystem::path& path);

/// Parse a sequence specification:
///   {"family": <name>, "indices": [...], "D": x,
///    "schedule": {param: formula-in-j or [values]}, "grid": n,
///    "expression": "..."}                        (family == "expression")
SequenceSpec sequence_from_spec(const Json& spec);
SequenceSpec load_sequence_spec(const std::filesystem::path& path);

/// Emit a spec file for a generated family; sampled generators (lakzian,
/// custom) serialize their samples.
Json spec_for_generated(const WarpingFunction& wf);

/// Grid export: columns s, f, f', f'', scalar, mean_curvature ("%.17g",
/// header row; nan inside the pole guard where the formulas are singular).
std::string grid_csv(const RotSymManifold& m);

Json verdict_to_json(const RotSymManifold& m, const HypothesisVerdict& v);
Json h1_report_to_json(const H1Report& rep);
std::string h1_report_csv(const H1Report& rep);
Json swif_report_to_json(const SwifBoundReport& rep);
Json distributional_to_json(const std::vector<DistributionalResult>& results);
Json portrait_to_json(const TangentConePortrait& port);

}  // namespace wsl
