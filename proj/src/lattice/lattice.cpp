#include "ltd/lattice.hpp"

#include <algorithm>
#include <deque>

#include "ltd/robustness.hpp"
#include "../kernels/subset_scan.hpp"

namespace ltd {

Configuration AdmissiblePath::end() const {
    Configuration x = start;
    for (const auto& s : steps) {
        if (s.agent >= x.size() || x[s.agent] == s.action) throw ContractError("path step does not flip its agent");
        x.set(s.agent, s.action);
    }
    return x;
}

std::vector<Configuration> AdmissiblePath::configurations() const {
    std::vector<Configuration> out{start};
    Configuration x = start;
    for (const auto& s : steps) {
        if (s.agent >= x.size() || x[s.agent] == s.action) throw ContractError("path step does not flip its agent");
        x.set(s.agent, s.action);
        out.push_back(x);
    }
    return out;
}

bool AdmissiblePath::improves_under(const Network& net, const Field& h, bool strict) const {
    Configuration x = start;
    for (const auto& s : steps) {
        if (s.agent >= x.size() || x[s.agent] == s.action) return false;
        const Rational before = utility(net, h, x, s.agent);
        x.set(s.agent, s.action);
        const Rational after = utility(net, h, x, s.agent);
        if (strict ? !(after > before) : after < before) return false;
    }
    return true;
}

namespace {

// Agent i may take the step in this direction: it currently plays the opposite
// action and the flip raises (I) or does not lower (BR) its utility.
bool eligible(const Network& net, const Field& h, const Configuration& x, Agent i, Direction dir, PathMode mode) {
    const Action target = dir == Direction::up ? Action::plus : Action::minus;
    if (x[i] == target) return false;
    // Utility change of the flip is 2 * target * drive.
    int s = drive(net, h, x, i).sign();
    if (target == Action::minus) s = -s;
    return mode == PathMode::improvement ? s > 0 : s >= 0;
}

}  // namespace

ClosureResult closure(const Network& net, const Field& h, const Configuration& x, Direction direction, PathMode mode) {
    if (h.size() != net.size() || x.size() != net.size()) throw ContractError("dimension mismatch");
    ClosureResult r{x, AdmissiblePath{x, {}}};
    r.path.monotone = direction == Direction::up;
    r.path.anti_monotone = direction == Direction::down;
    r.path.improvement = mode == PathMode::improvement;
    r.path.best_response = true;

    const Action target = direction == Direction::up ? Action::plus : Action::minus;
    std::deque<Agent> queue;
    std::vector<bool> queued(net.size(), true);
    for (Agent i = 0; i < net.size(); ++i) queue.push_back(i);
    while (!queue.empty()) {
        const Agent i = queue.front();
        queue.pop_front();
        queued[i] = false;
        if (!eligible(net, h, r.end, i, direction, mode)) continue;
        r.end.set(i, target);
        r.path.steps.push_back({i, target});
        // A flip can only make other agents more eligible in the same direction.
        for (Agent j : net.in_neighbors(i)) {
            if (!queued[j] && r.end[j] != target) {
                queued[j] = true;
                queue.push_back(j);
            }
        }
    }
    return r;
}

Extremes ireachable_extremes(const Network& net, const Field& h, const Configuration& x, PathMode mode) {
    const auto up = closure(net, h, x, Direction::up, mode).end;
    const auto down = closure(net, h, x, Direction::down, mode).end;
    return {closure(net, h, down, Direction::up, PathMode::improvement).end,
            closure(net, h, up, Direction::down, PathMode::improvement).end};
}

JoinMeet lattice_ops(const Network& net, const Field& h, const Configuration& x_star, const Configuration& y_star) {
    if (!is_equilibrium(net, h, x_star) || !is_equilibrium(net, h, y_star))
        throw ContractError("lattice_ops requires two equilibria");
    return {closure(net, h, x_star.join(y_star), Direction::up, PathMode::improvement).end,
            closure(net, h, x_star.meet(y_star), Direction::down, PathMode::improvement).end};
}

EquilibriumSet enumerate_equilibria(const Network& net, const Field& h, const Limits& limits) {
    const std::size_t n = net.size();
    if (h.size() != n) throw ContractError("dimension mismatch");
    if (n > limits.max_enumeration_nodes)
        throw CapExceeded("equilibrium enumeration refused: " + std::to_string(n) + " agents exceeds cap " +
                          std::to_string(limits.max_enumeration_nodes));

    // x is an equilibrium iff no agent escapes the subset V+(x) with
    // lo = hi = w - h (u_i >= 0 rewritten as 2 w_i^+ >= w_i - h_i on V+, <= on V-).
    detail::ScanRequest req;
    req.net = &net;
    req.threads = limits.threads;
    for (Agent i = 0; i < n; ++i) req.universe.push_back(i);
    req.rule.lo.resize(n);
    req.rule.hi.resize(n);
    for (Agent i = 0; i < n; ++i) {
        const Rational t = net.out_degree(i) - h[i];
        req.rule.lo[i] = t;
        req.rule.hi[i] = t;
    }
    EquilibriumSet set;
    for (std::uint64_t mask : detail::all_blocked(req)) set.members.push_back(Configuration::from_mask(n, mask));
    if (set.members.empty()) throw std::logic_error("equilibrium set is empty; supermodularity violated");
    std::sort(set.members.begin(), set.members.end());
    set.least = set.members.front();
    set.greatest = set.members.front();
    for (const auto& m : set.members) {
        set.least = set.least.meet(m);
        set.greatest = set.greatest.join(m);
    }
    return set;
}

bool is_polarizable(const Network& net, const Field& h, const Limits& limits) {
    if (net.size() > limits.max_enumeration_nodes) return !is_indecomposable(net, FieldRange::point(h), limits);
    const auto set = enumerate_equilibria(net, h, limits);
    return std::any_of(set.members.begin(), set.members.end(), [](const Configuration& x) { return !x.is_consensus(); });
}

}  // namespace ltd
