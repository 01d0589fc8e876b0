#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ltd/rational.hpp"

namespace ltd {

/// Zero-based agent index. Files and CLI output use 1-based ids.
using Agent = std::size_t;

/// Sorted, duplicate-free list of agents.
using NodeSet = std::vector<Agent>;

/// Malformed input. `line()` is 1-based, or 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An operation was called outside its precondition.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class Action : std::int8_t { minus = -1, plus = 1 };

[[nodiscard]] constexpr int value(Action a) noexcept { return static_cast<int>(a); }
[[nodiscard]] constexpr Action opposite(Action a) noexcept { return a == Action::plus ? Action::minus : Action::plus; }
[[nodiscard]] Action action_from_int(int v);

/// Binary state vector. Entries are exactly -1 or +1.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(std::vector<Action> states) : states_(std::move(states)) {}
    Configuration(std::initializer_list<int> states);

    static Configuration consensus(std::size_t n, Action a) { return Configuration(std::vector<Action>(n, a)); }
    /// Agent i is +1 iff bit i of mask is set (n <= 64).
    static Configuration from_mask(std::size_t n, std::uint64_t mask);
    /// Parses "-1,1,1" (commas or whitespace).
    static Configuration parse(std::string_view text);

    [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }
    [[nodiscard]] Action operator[](Agent i) const { return states_[i]; }
    void set(Agent i, Action a) { states_[i] = a; }
    void flip(Agent i) { states_[i] = opposite(states_[i]); }
    [[nodiscard]] Configuration flipped(Agent i) const;

    [[nodiscard]] std::span<const Action> states() const noexcept { return states_; }
    [[nodiscard]] bool is_consensus() const noexcept;
    [[nodiscard]] bool is_consensus(Action a) const noexcept;
    [[nodiscard]] long magnetization() const noexcept;
    [[nodiscard]] NodeSet positive_part() const;
    [[nodiscard]] NodeSet negative_part() const;
    [[nodiscard]] std::uint64_t mask() const;

    /// Entrywise partial order x <= y.
    [[nodiscard]] bool leq(const Configuration& other) const;
    [[nodiscard]] Configuration join(const Configuration& other) const;
    [[nodiscard]] Configuration meet(const Configuration& other) const;

    /// "(-1,+1,...)".
    [[nodiscard]] std::string str() const;

    friend bool operator==(const Configuration&, const Configuration&) = default;
    friend auto operator<=>(const Configuration& a, const Configuration& b) { return a.states_ <=> b.states_; }

private:
    std::vector<Action> states_;
};

struct Edge {
    Agent head;
    Rational weight;
};

/// Weighted digraph with nonnegative exact weights and zero diagonal.
///
/// Link (i, j) means agent j influences agent i with weight W_ij. Only
/// positive weights are stored.
class Network {
public:
    struct Link {
        Agent tail;
        Agent head;
        Rational weight;
    };

    Network() = default;
    /// Throws ContractError on self-loops, negative weights, duplicates or bad ids.
    Network(std::size_t n, std::span<const Link> links);
    Network(std::size_t n, std::initializer_list<Link> links)
        : Network(n, std::span<const Link>(links.begin(), links.size())) {}

    [[nodiscard]] std::size_t size() const noexcept { return out_.size(); }
    [[nodiscard]] std::span<const Edge> out_edges(Agent i) const { return out_[i]; }
    /// Agents whose drive depends on i, i.e. tails of links into i.
    [[nodiscard]] std::span<const Agent> in_neighbors(Agent i) const { return in_[i]; }
    [[nodiscard]] Rational weight(Agent i, Agent j) const;
    [[nodiscard]] const Rational& out_degree(Agent i) const { return degree_[i]; }
    [[nodiscard]] std::span<const Rational> out_degrees() const noexcept { return degree_; }
    [[nodiscard]] std::size_t link_count() const noexcept;

    friend bool operator==(const Network& a, const Network& b);

private:
    std::vector<std::vector<Edge>> out_;
    std::vector<std::vector<Agent>> in_;
    std::vector<Rational> degree_;
};

/// Parses the line-oriented edge-list format (`n <count>`, `e <i> <j> <w>`).
Network parse_network(std::string_view text);
/// Canonical form: `n` line then edges sorted by (i, j), weights in lowest terms.
std::string serialize_network(const Network& net);

/// Sum of W[node][j] over j in subset.
Rational restricted_out_degree(const Network& net, Agent node, std::span<const Agent> subset);

struct SplitWeights {
    Rational minus;
    Rational plus;
};

/// Weight from node to agents currently at -1 and at +1.
SplitWeights split_weights(const Network& net, Agent node, const Configuration& x);

/// Sum_j W_ij x_j, the neighbour part of agent i's drive.
Rational neighbor_sum(const Network& net, Agent i, const Configuration& x);

/// Builds a sorted NodeSet from arbitrary ids, validating against n.
NodeSet make_node_set(std::size_t n, std::span<const Agent> ids);

}  // namespace ltd
