#pragma once

// Reference implementations evaluated straight from the definitions, by brute
// force over all 2^n configurations. They share data types with the library
// but none of its algorithms, so they can serve as independent checks.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ltd/robustness.hpp"

namespace ltd::oracle {

/// sum_j W_ij x_j + h_i, summed over every j through Network::weight.
Rational ref_drive(const Network& net, const Field& h, const Configuration& x, Agent i);
/// u_i(x) - u_i(x with agent i flipped).
Rational flip_loss(const Network& net, const Field& h, const Configuration& x, Agent i);
bool ref_is_equilibrium(const Network& net, const Field& h, const Configuration& x);

/// All equilibria in increasing mask order.
std::vector<Configuration> equilibria(const Network& net, const Field& h);

/// First partition (by mask) whose configuration is an equilibrium under h*
/// (h+ on V+, h- on V-), or nothing if the range is indecomposable.
std::optional<Partition> violating_partition(const Network& net, const FieldRange& range);

enum class Move { strict, weak };
enum class Monotonicity { any, up_only, down_only };

/// Configurations reachable from x by single flips that strictly (I) or weakly
/// (BR) improve the mover's utility. Indexed by mask.
std::vector<bool> reachable(const Network& net, const Field& h, const Configuration& x, Move move,
                            Monotonicity dir = Monotonicity::any);

/// Least and greatest elements of a set given by masks; nothing if it has none.
std::optional<Configuration> least_of(std::size_t n, const std::vector<bool>& set);
std::optional<Configuration> greatest_of(std::size_t n, const std::vector<bool>& set);

/// True when every step flips an agent with strictly positive gain under h.
bool is_strict_improvement_path(const Network& net, const Field& h, const AdmissiblePath& path);

struct RandomSpec {
    std::size_t min_n = 1;
    std::size_t max_n = 8;
    double density = 0.4;
};

Network random_network(std::mt19937_64& rng, const RandomSpec& spec);
/// Mixes zeros, ties at +-w_i, stubborn values and arbitrary fractions.
Field random_field(std::mt19937_64& rng, const Network& net);
FieldRange random_range(std::mt19937_64& rng, const Network& net);
/// Entrywise lower + k/4 (upper - lower), k uniform in 0..4.
Field random_interior(std::mt19937_64& rng, const FieldRange& range);
Configuration random_configuration(std::mt19937_64& rng, std::size_t n);
/// Every corner of the hyper-rectangle (2^d for d non-degenerate coordinates, d <= 12).
std::vector<Field> corners(const FieldRange& range);

struct PropertyTally {
    std::size_t checks = 0;
    std::size_t failures = 0;
};

struct SuiteReport {
    std::size_t instances = 0;
    std::map<std::string, PropertyTally> properties;
    /// First few failure descriptions.
    std::vector<std::string> failures;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] std::size_t total_checks() const;
    [[nodiscard]] std::size_t total_failures() const;
};

/// Cross-module property suite on random instances with 1 <= n <= max_n.
SuiteReport run_suite(std::size_t max_n, std::size_t instances, std::uint64_t seed);

}  // namespace ltd::oracle
