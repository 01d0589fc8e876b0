#include "ltd/game.hpp"

#include "ltd/robustness.hpp"

namespace ltd {
namespace {

void check_dims(const Network& net, const Field& h, const Configuration& x) {
    if (h.size() != net.size() || x.size() != net.size()) throw ContractError("dimension mismatch");
}

// w >= v entrywise
bool dominates(std::span<const Rational> w, const Field& v) {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] < v[i]) return false;
    return true;
}

Field negated(const Field& h) {
    Field out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) out[i] = -h[i];
    return out;
}

}  // namespace

void FieldRange::validate(std::size_t n) const {
    if (lower.size() != n || upper.size() != n) throw ContractError("field range dimension mismatch");
    for (std::size_t i = 0; i < n; ++i)
        if (upper[i] < lower[i]) throw ContractError("field range has h_minus > h_plus at agent " + std::to_string(i + 1));
}

bool FieldRange::contains(const Field& h) const {
    if (h.size() != lower.size()) return false;
    for (std::size_t i = 0; i < h.size(); ++i)
        if (h[i] < lower[i] || upper[i] < h[i]) return false;
    return true;
}

Rational drive(const Network& net, const Field& h, const Configuration& x, Agent i) {
    check_dims(net, h, x);
    if (i >= net.size()) throw ContractError("agent id out of range");
    return neighbor_sum(net, i, x) + h[i];
}

Rational utility(const Network& net, const Field& h, const Configuration& x, Agent i) {
    const Rational d = drive(net, h, x, i);
    return x[i] == Action::plus ? d : -d;
}

BestResponse best_response(const Network& net, const Field& h, const Configuration& x, Agent i) {
    // w_i^+ > (w_i - h_i)/2  <=>  sum_j W_ij x_j + h_i > 0, which also covers w_i = 0.
    const int s = drive(net, h, x, i).sign();
    if (s > 0) return BestResponse::plus;
    if (s < 0) return BestResponse::minus;
    return BestResponse::both;
}

bool is_equilibrium(const Network& net, const Field& h, const Configuration& x, bool strict) {
    check_dims(net, h, x);
    for (Agent i = 0; i < net.size(); ++i) {
        const int s = utility(net, h, x, i).sign();
        if (s < 0 || (strict && s == 0)) return false;
    }
    return true;
}

NodeSet stubborn_set(const Network& net, const Field& h, Action a) {
    if (h.size() != net.size()) throw ContractError("dimension mismatch");
    NodeSet out;
    for (Agent i = 0; i < net.size(); ++i) {
        const Rational ah = a == Action::plus ? h[i] : -h[i];
        if (ah > net.out_degree(i)) out.push_back(i);
    }
    return out;
}

std::string to_string(ConsensusKind kind) {
    switch (kind) {
        case ConsensusKind::regular: return "Regular";
        case ConsensusKind::biased_plus: return "BiasedPlus";
        case ConsensusKind::biased_minus: return "BiasedMinus";
        case ConsensusKind::frustrated: return "Frustrated";
        case ConsensusKind::mixed: return "Mixed";
    }
    return "?";
}

ConsensusKind consensus_kind(const Network& net, const Field& h) {
    if (h.size() != net.size()) throw ContractError("dimension mismatch");
    const auto w = net.out_degrees();
    const bool up_ok = dominates(w, h);             // w >= h: -1 is an equilibrium
    const bool down_ok = dominates(w, negated(h));  // w >= -h: +1 is an equilibrium
    if (up_ok && down_ok) return ConsensusKind::regular;
    if (down_ok) return ConsensusKind::biased_plus;
    if (up_ok) return ConsensusKind::biased_minus;
    return ConsensusKind::frustrated;
}

ConsensusKind robust_consensus_kind(const Network& net, const FieldRange& range) {
    range.validate(net.size());
    const auto w = net.out_degrees();
    const bool w_ge_upper = dominates(w, range.upper);
    const bool w_ge_neg_lower = dominates(w, negated(range.lower));
    if (w_ge_upper && w_ge_neg_lower) return ConsensusKind::regular;
    // a = +1: w >= -h^-, w !>= h^-
    if (w_ge_neg_lower && !dominates(w, range.lower)) return ConsensusKind::biased_plus;
    // a = -1: w >= h^+, w !>= -h^+
    if (w_ge_upper && !dominates(w, negated(range.upper))) return ConsensusKind::biased_minus;
    if (!dominates(w, negated(range.upper)) && !dominates(w, range.lower)) return ConsensusKind::frustrated;
    return ConsensusKind::mixed;
}

GameClass classify_field(const Network& net, const Field& h) { return classify_field(net, h, Limits{}); }

GameClass classify_field(const Network& net, const Field& h, const Limits& limits) {
    GameClass c;
    c.consensus_kind = consensus_kind(net, h);
    c.polarizable = !is_indecomposable(net, FieldRange::point(h), limits);
    return c;
}

GameClass classify_range(const Network& net, const FieldRange& range) { return classify_range(net, range, Limits{}); }

GameClass classify_range(const Network& net, const FieldRange& range, const Limits& limits) {
    GameClass c;
    c.consensus_kind = robust_consensus_kind(net, range);
    c.polarizable = !is_indecomposable(net, range, limits);
    return c;
}

std::string describe(const GameClass& c, bool robust) {
    std::string kind = to_string(c.consensus_kind);
    std::string pol = c.polarizable ? "polarizable" : "unpolarizable";
    if (robust) {
        if (c.consensus_kind != ConsensusKind::mixed) kind = "Robustly " + kind;
        pol = c.polarizable ? "not robustly unpolarizable" : "robustly unpolarizable";
    }
    return kind + ", " + pol;
}

}  // namespace ltd
