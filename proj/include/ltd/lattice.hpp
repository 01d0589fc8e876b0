#pragma once

#include <optional>
#include <vector>

#include "ltd/game.hpp"

namespace ltd {

enum class Direction { up, down };

/// I = strict improvement at every step, BR = weak improvement.
enum class PathMode { improvement, best_response };

struct Step {
    Agent agent;
    Action action;

    friend bool operator==(const Step&, const Step&) = default;
};

/// Single-flip path from `start`, with the properties it was built to satisfy.
struct AdmissiblePath {
    Configuration start;
    std::vector<Step> steps;
    bool monotone = false;
    bool anti_monotone = false;
    bool improvement = false;
    bool best_response = false;

    [[nodiscard]] std::size_t length() const noexcept { return steps.size(); }
    /// Replays the steps; throws ContractError if a step does not change its agent.
    [[nodiscard]] Configuration end() const;
    /// Every intermediate configuration, start first.
    [[nodiscard]] std::vector<Configuration> configurations() const;
    /// True iff every step raises (strict) or does not lower the active agent's utility under h.
    [[nodiscard]] bool improves_under(const Network& net, const Field& h, bool strict) const;
};

struct ClosureResult {
    Configuration end;
    AdmissiblePath path;
};

/// f+ (up, I), f- (down, I), g+ (up, BR), g- (down, BR).
ClosureResult closure(const Network& net, const Field& h, const Configuration& x, Direction direction, PathMode mode);

struct Extremes {
    Configuration least;
    Configuration greatest;
};

/// Least and greatest equilibria reachable from x by I-paths (mode I) or BR-paths (mode BR).
Extremes ireachable_extremes(const Network& net, const Field& h, const Configuration& x, PathMode mode);

struct JoinMeet {
    Configuration join;
    Configuration meet;
};

/// Lattice join/meet inside the equilibrium set. Both inputs must be equilibria.
JoinMeet lattice_ops(const Network& net, const Field& h, const Configuration& x_star, const Configuration& y_star);

struct EquilibriumSet {
    std::vector<Configuration> members;  // sorted lexicographically by state vector
    Configuration least;
    Configuration greatest;
};

/// All pure equilibria by exhaustive scan. Throws CapExceeded above limits.max_enumeration_nodes.
EquilibriumSet enumerate_equilibria(const Network& net, const Field& h, const Limits& limits = {});

/// Some equilibrium is coexistent (not a consensus).
bool is_polarizable(const Network& net, const Field& h, const Limits& limits = {});

}  // namespace ltd
