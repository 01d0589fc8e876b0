#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ltd/limits.hpp"
#include "ltd/network.hpp"

namespace ltd {

/// External field h, one entry per agent.
using Field = std::vector<Rational>;

[[nodiscard]] inline Field zero_field(std::size_t n) { return Field(n); }

/// Hyper-rectangle [lower, upper] of admissible fields.
struct FieldRange {
    Field lower;
    Field upper;

    /// Throws ContractError unless both sides have length n and lower <= upper.
    void validate(std::size_t n) const;
    [[nodiscard]] bool contains(const Field& h) const;
    [[nodiscard]] bool degenerate() const { return lower == upper; }
    static FieldRange point(const Field& h) { return {h, h}; }
};

/// u_i(x) = x_i (sum_j W_ij x_j + h_i).
Rational utility(const Network& net, const Field& h, const Configuration& x, Agent i);

/// sum_j W_ij x_j + h_i; its sign decides the threshold rule.
Rational drive(const Network& net, const Field& h, const Configuration& x, Agent i);

enum class BestResponse { minus, plus, both };

[[nodiscard]] constexpr bool contains(BestResponse br, Action a) noexcept {
    return br == BestResponse::both || (br == BestResponse::plus) == (a == Action::plus);
}

/// Threshold form: {+1} above (w_i - h_i)/2, {-1} below, both on the tie.
BestResponse best_response(const Network& net, const Field& h, const Configuration& x, Agent i);

/// Non-strict: every u_i >= 0. Strict: every best response is the singleton {x_i}.
bool is_equilibrium(const Network& net, const Field& h, const Configuration& x, bool strict = false);

/// Agents with a * h_i > w_i, for whom a is strictly dominant.
NodeSet stubborn_set(const Network& net, const Field& h, Action a);

enum class ConsensusKind { regular, biased_plus, biased_minus, frustrated, mixed };

std::string to_string(ConsensusKind kind);

struct GameClass {
    ConsensusKind consensus_kind = ConsensusKind::regular;
    bool polarizable = false;

    friend bool operator==(const GameClass&, const GameClass&) = default;
};

/// Consensus pattern from the degree inequalities; polarizability via the
/// h-indecomposability scan.
GameClass classify_field(const Network& net, const Field& h);
GameClass classify_field(const Network& net, const Field& h, const Limits& limits);

/// Range-robust class. `consensus_kind` is `mixed` when none of the three
/// robust conditions holds; `polarizable` means some field in the range admits a
/// coexistent equilibrium.
GameClass classify_range(const Network& net, const FieldRange& range);
GameClass classify_range(const Network& net, const FieldRange& range, const Limits& limits);

/// Pure consensus-kind part of classify_field (no partition scan).
ConsensusKind consensus_kind(const Network& net, const Field& h);
/// Pure consensus-kind part of classify_range.
ConsensusKind robust_consensus_kind(const Network& net, const FieldRange& range);

/// "Regular, unpolarizable" and the like.
std::string describe(const GameClass& c, bool robust = false);

}  // namespace ltd
