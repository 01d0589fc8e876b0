#pragma once

#include <optional>

#include "ltd/lattice.hpp"

namespace ltd {

/// Ordered nontrivial split of the agents into V+ and V-.
struct Partition {
    NodeSet plus;
    NodeSet minus;

    friend bool operator==(const Partition&, const Partition&) = default;
};

struct IndecomposabilityResult {
    bool indecomposable = true;
    /// First violating partition in Gray order, when decomposable.
    std::optional<Partition> violating;
};

/// Scans every ordered nontrivial partition (V+, V-) and asks for some s and
/// i in V^s with w_i^s + s h_i^s < w_i^{-s}, where s h^s reads +h+_i on V+ and
/// -h-_i on V-. Throws CapExceeded above limits.max_partition_nodes.
IndecomposabilityResult check_indecomposable(const Network& net, const FieldRange& range, const Limits& limits = {});

inline bool is_indecomposable(const Network& net, const FieldRange& range, const Limits& limits = {}) {
    return check_indecomposable(net, range, limits).indecomposable;
}

/// Field in the range plus coexistent configuration that is an equilibrium for it.
struct DecompositionWitness {
    Partition partition;
    Field field_star;
    Configuration config_star;
};

/// h* = h- on V-, h+ on V+, x* = sign of the part. nullopt when indecomposable.
std::optional<DecompositionWitness> decomposition_witness(const Network& net, const FieldRange& range,
                                                          const Limits& limits = {});

/// Raised by robust_consensus_path when the range admits a decomposition.
class NotIndecomposable : public std::runtime_error {
public:
    explicit NotIndecomposable(Partition p);
    [[nodiscard]] const Partition& partition() const noexcept { return partition_; }

private:
    Partition partition_;
};

/// Flip sequence of length <= n ending at a consensus that is a strict
/// improvement path for every field in the range. Monotone (built under h-)
/// whenever +1 is reachable that way, otherwise anti-monotone under h+.
AdmissiblePath robust_consensus_path(const Network& net, const FieldRange& range, const Configuration& x,
                                     const Limits& limits = {});

struct CohesionResult {
    bool cohesive = false;
    bool closed = false;
};

/// cohesive: w_i^S >= r w_i on S. closed: the complement is (1 - r)-cohesive.
CohesionResult cohesive_check(const Network& net, std::span<const Agent> subset, const Rational& r);

/// Whether a*1 is the unique equilibrium, via the stubborn-set criterion:
/// some a-stubborn agent exists and every nonempty R outside S_a(h) has a
/// member with w_i^R < w_i^{V\R} + a h_i. Throws CapExceeded when the free
/// set exceeds limits.max_subset_nodes.
bool unique_biased_check(const Network& net, const Field& h, Action a, const Limits& limits = {});

}  // namespace ltd
