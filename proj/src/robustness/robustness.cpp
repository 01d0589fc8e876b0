#include "ltd/robustness.hpp"

#include <algorithm>

#include "../kernels/subset_scan.hpp"

namespace ltd {

NotIndecomposable::NotIndecomposable(Partition p)
    : std::runtime_error("network is not indecomposable over the given field range"), partition_(std::move(p)) {}

IndecomposabilityResult check_indecomposable(const Network& net, const FieldRange& range, const Limits& limits) {
    const std::size_t n = net.size();
    range.validate(n);
    if (n > limits.max_partition_nodes)
        throw CapExceeded("indecomposability scan refused: " + std::to_string(n) + " agents exceeds cap " +
                          std::to_string(limits.max_partition_nodes));

    // Sign convention, one table for both sides:
    //   i in V+ (s = +):  w_i^+ + h+_i < w_i^-   <=>  2 w_i^+ < w_i - h+_i
    //   i in V- (s = -):  w_i^- - h-_i < w_i^+   <=>  2 w_i^+ > w_i - h-_i
    // with w_i^+ the weight into V+. A partition violates the definition when
    // no agent satisfies its inequality.
    detail::ScanRequest req;
    req.net = &net;
    req.threads = limits.threads;
    req.skip_empty = true;
    req.skip_full = true;
    for (Agent i = 0; i < n; ++i) req.universe.push_back(i);
    req.rule.lo.resize(n);
    req.rule.hi.resize(n);
    for (Agent i = 0; i < n; ++i) {
        req.rule.lo[i] = net.out_degree(i) - range.upper[i];
        req.rule.hi[i] = net.out_degree(i) - range.lower[i];
    }
    IndecomposabilityResult result;
    if (const auto g = detail::first_blocked(req)) {
        const std::uint64_t mask = detail::gray(*g);
        const auto x = Configuration::from_mask(n, mask);
        result.indecomposable = false;
        result.violating = Partition{x.positive_part(), x.negative_part()};
    }
    return result;
}

std::optional<DecompositionWitness> decomposition_witness(const Network& net, const FieldRange& range,
                                                          const Limits& limits) {
    auto check = check_indecomposable(net, range, limits);
    if (check.indecomposable) return std::nullopt;
    DecompositionWitness w;
    w.partition = *check.violating;
    w.field_star = range.lower;
    std::vector<Action> states(net.size(), Action::minus);
    for (Agent i : w.partition.plus) {
        w.field_star[i] = range.upper[i];
        states[i] = Action::plus;
    }
    w.config_star = Configuration(std::move(states));
    if (!is_equilibrium(net, w.field_star, w.config_star))
        throw std::logic_error("decomposition witness is not an equilibrium");
    return w;
}

AdmissiblePath robust_consensus_path(const Network& net, const FieldRange& range, const Configuration& x,
                                     const Limits& limits) {
    if (x.size() != net.size()) throw ContractError("dimension mismatch");
    auto check = check_indecomposable(net, range, limits);
    if (!check.indecomposable) throw NotIndecomposable(*check.violating);

    // Only agents at -1 move along a monotone path, and h^x agrees with h- on
    // them, so the up-closure under h- is the up-closure under h^x.
    auto up = closure(net, range.lower, x, Direction::up, PathMode::improvement);
    if (up.end.is_consensus(Action::plus)) return std::move(up.path);
    auto down = closure(net, range.upper, x, Direction::down, PathMode::improvement);
    if (down.end.is_consensus(Action::minus)) return std::move(down.path);
    throw std::logic_error("no robust path to consensus on an indecomposable range");
}

CohesionResult cohesive_check(const Network& net, std::span<const Agent> subset, const Rational& r) {
    if (r < Rational(0) || r > Rational(1)) throw ContractError("cohesiveness ratio must lie in [0, 1]");
    const NodeSet s = make_node_set(net.size(), subset);
    std::vector<bool> in_s(net.size(), false);
    for (Agent i : s) in_s[i] = true;
    NodeSet complement;
    for (Agent i = 0; i < net.size(); ++i)
        if (!in_s[i]) complement.push_back(i);

    auto is_cohesive = [&](const NodeSet& set, const Rational& ratio) {
        return std::all_of(set.begin(), set.end(), [&](Agent i) {
            return restricted_out_degree(net, i, set) >= ratio * net.out_degree(i);
        });
    };
    return {is_cohesive(s, r), is_cohesive(complement, Rational(1) - r)};
}

bool unique_biased_check(const Network& net, const Field& h, Action a, const Limits& limits) {
    const std::size_t n = net.size();
    if (h.size() != n) throw ContractError("dimension mismatch");
    const NodeSet stubborn = stubborn_set(net, h, a);
    if (stubborn.empty()) return false;

    detail::ScanRequest req;
    req.net = &net;
    req.threads = limits.threads;
    req.skip_empty = true;
    req.rule.lo.resize(n);
    req.rule.hi.resize(n);
    for (Agent i = 0; i < n; ++i) {
        if (std::binary_search(stubborn.begin(), stubborn.end(), i)) continue;
        req.universe.push_back(i);
        // w_i^R < w_i^{V\R} + a h_i  <=>  2 w_i^R < w_i + a h_i
        req.rule.lo[i] = net.out_degree(i) + (a == Action::plus ? h[i] : -h[i]);
    }
    if (req.universe.size() > limits.max_subset_nodes)
        throw CapExceeded("subset scan refused: " + std::to_string(req.universe.size()) + " free agents exceeds cap " +
                          std::to_string(limits.max_subset_nodes));
    return !detail::first_blocked(req).has_value();
}

}  // namespace ltd
