#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rydpmp/record.hpp"
#include "rydpmp/synthesis.hpp"

namespace rydpmp {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

Json target_to_json(const TargetManifold& target);
/// `path` is the JSON pointer of `j`, used in SchemaError messages.
TargetManifold target_from_json(const Json& j, const std::string& path = "");

std::vector<std::string> param_names(ParamFamily family);

/// Record layout: schema, case, config_hash, target, family, params, potential, invariants, dt, T,
/// phi0, delta, ddelta, phi, fidelity, crossings, sign. Trajectories are not stored.
Json record_to_json(const ExtremalRecord& rec, const std::string& config_hash = "");

/// Parses a record and recomputes the trajectories from the pulse. `potential` and `invariants`
/// may be absent; a missing `ddelta` is rebuilt from the potential (energy relation, sign from
/// finite differences of delta). Throws SchemaError.
ExtremalRecord record_from_json(const Json& j);

void save_record(const std::string& path, const ExtremalRecord& rec, const std::string& config_hash = "");
ExtremalRecord load_record(const std::string& path);
Json load_json(const std::string& path);

/// FNV-1a 64-bit hash of the compact dump of `config`, as 16 hex digits.
std::string config_hash(const Json& config);

/// "# config_hash=<hash>" header line for CSV outputs.
void write_hash_comment(std::ostream& os, const std::string& hash);

void write_pulse_csv(std::ostream& os, const PhasePulse& pulse);                 // t, phi
void write_detuning_csv(std::ostream& os, const DetuningCurve& curve);          // t, delta, ddelta
void write_potential_csv(std::ostream& os, const QuarticPotential& pot, double lo, double hi,
                         int samples);                                           // delta, V
void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace);     // iter, p1.., fidelity, T

/// Ready-to-run gnuplot script for a directory written by `synthesize`.
std::string gnuplot_script(const std::string& stem, int tls_count);

}  // namespace rydpmp
