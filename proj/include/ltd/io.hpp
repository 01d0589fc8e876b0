#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ltd/robustness.hpp"
#include "ltd/simulation.hpp"

namespace ltd::io {

using nlohmann::json;

/// `{"h": ["0", "-1", ...]}`. Entries are decimal or fraction strings (plain
/// JSON numbers are accepted through their text form).
Field parse_field(std::string_view text, std::optional<std::size_t> n = std::nullopt);
/// `{"h_minus": [...], "h_plus": [...]}`.
FieldRange parse_range(std::string_view text, std::optional<std::size_t> n = std::nullopt);

/// Either a bare array `[{"t": "0", "h": [...]}, ...]` or
/// `{"breakpoints": [...], "period": "10"}`. Validated against `range` when given.
FieldSchedule parse_schedule(std::string_view text, const std::optional<FieldRange>& range = std::nullopt,
                             std::optional<std::size_t> n = std::nullopt);

json to_json(const Field& h);
json to_json(const FieldRange& range);
json to_json(const FieldSchedule& schedule);
json to_json(const Configuration& x);
json to_json(const NodeSet& s);  // 1-based ids
json to_json(const Partition& p);
json to_json(const EquilibriumSet& set);
json to_json(const AdmissiblePath& path);
json to_json(const DecompositionWitness& w);
json to_json(const HittingSummary& s);
json to_json(const GameClass& c);

/// `event,time,agent,new_state,magnetization`; row 0 is the initial sample
/// with empty agent and state columns. Agents are 1-based.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
std::string trajectory_csv(const Trajectory& traj);

/// Settings read from a `key = value` file (TOML subset) and `LTD_*` env vars.
struct Settings {
    Limits limits;
    std::uint64_t seed = 1;
    unsigned sim_threads = 1;
};

/// Keys: max_partition_nodes, max_enumeration_nodes, max_subset_nodes,
/// threads, sim_threads, seed. `#` starts a comment; `[section]` headers are ignored.
Settings parse_settings(std::string_view text, Settings base = {});
/// LTD_MAX_PARTITION_NODES and friends override file values.
Settings apply_env_overrides(Settings s);

/// Whole file as a string; throws std::runtime_error on failure.
std::string read_file(const std::string& path);

}  // namespace ltd::io
