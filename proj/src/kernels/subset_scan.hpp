#pragma once

// Exhaustive Gray-code scans over subsets of a universe of agents, looking for
// subsets S in which no agent escapes (see ltd/kernels.hpp for the escape rule).
//
// Two back ends answer the same question: an integer one, used when every
// quantity fits after scaling by the common denominator, and an exact rational
// one for everything else.

#include <cstdint>
#include <optional>
#include <vector>

#include "ltd/kernels.hpp"
#include "ltd/network.hpp"

namespace ltd::detail {

/// Thresholds for one scan. nullopt means the agent never escapes on that side.
struct EscapeRule {
    std::vector<std::optional<Rational>> lo;  // applies while the agent is in S
    std::vector<std::optional<Rational>> hi;  // applies while it is not
};

struct ScanRequest {
    const Network* net = nullptr;
    std::vector<Agent> universe;  // toggled agents; bit k of a subset mask is universe[k]
    EscapeRule rule;
    bool skip_empty = false;
    bool skip_full = false;
    unsigned threads = 1;
};

/// Gray index g maps to the subset mask g ^ (g >> 1).
[[nodiscard]] constexpr std::uint64_t gray(std::uint64_t g) noexcept { return g ^ (g >> 1); }

/// Lowest Gray index whose subset has no escaping agent.
std::optional<std::uint64_t> first_blocked(const ScanRequest& req);

/// Every subset mask with no escaping agent, in Gray order.
std::vector<std::uint64_t> all_blocked(const ScanRequest& req);

/// Same as above but forcing a specific kernel; nullptr forces the exact rational path.
std::optional<std::uint64_t> first_blocked_with(const ScanRequest& req, const kernels::ScanKernel* kernel);
std::vector<std::uint64_t> all_blocked_with(const ScanRequest& req, const kernels::ScanKernel* kernel);

/// Agents of universe selected by mask.
NodeSet subset_of(const std::vector<Agent>& universe, std::uint64_t mask);

}  // namespace ltd::detail
