#include "oracle.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "ltd/lattice.hpp"
#include "ltd/simulation.hpp"

namespace ltd::oracle {

Rational ref_drive(const Network& net, const Field& h, const Configuration& x, Agent i) {
    Rational s = h[i];
    for (Agent j = 0; j < net.size(); ++j)
        if (j != i) s = s + net.weight(i, j) * Rational(value(x[j]));
    return s;
}

Rational flip_loss(const Network& net, const Field& h, const Configuration& x, Agent i) {
    const Rational u = Rational(value(x[i])) * ref_drive(net, h, x, i);
    const Configuration y = x.flipped(i);
    const Rational v = Rational(value(y[i])) * ref_drive(net, h, y, i);
    return u - v;
}

bool ref_is_equilibrium(const Network& net, const Field& h, const Configuration& x) {
    for (Agent i = 0; i < net.size(); ++i)
        if (flip_loss(net, h, x, i).sign() < 0) return false;
    return true;
}

std::vector<Configuration> equilibria(const Network& net, const Field& h) {
    const std::size_t n = net.size();
    std::vector<Configuration> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        const auto x = Configuration::from_mask(n, m);
        if (ref_is_equilibrium(net, h, x)) out.push_back(x);
    }
    return out;
}

std::optional<Partition> violating_partition(const Network& net, const FieldRange& range) {
    const std::size_t n = net.size();
    if (n < 2) return std::nullopt;
    for (std::uint64_t m = 1; m + 1 < (std::uint64_t{1} << n); ++m) {
        const auto x = Configuration::from_mask(n, m);
        Field hs(n);
        for (Agent i = 0; i < n; ++i) hs[i] = x[i] == Action::plus ? range.upper[i] : range.lower[i];
        if (ref_is_equilibrium(net, hs, x)) return Partition{x.positive_part(), x.negative_part()};
    }
    return std::nullopt;
}

std::vector<bool> reachable(const Network& net, const Field& h, const Configuration& x, Move move, Monotonicity dir) {
    const std::size_t n = net.size();
    std::vector<bool> seen(std::size_t{1} << n, false);
    std::deque<std::uint64_t> queue{x.mask()};
    seen[x.mask()] = true;
    while (!queue.empty()) {
        const auto m = queue.front();
        queue.pop_front();
        const auto y = Configuration::from_mask(n, m);
        for (Agent i = 0; i < n; ++i) {
            if (dir == Monotonicity::up_only && y[i] == Action::plus) continue;
            if (dir == Monotonicity::down_only && y[i] == Action::minus) continue;
            const int loss = flip_loss(net, h, y, i).sign();
            if (move == Move::strict ? loss >= 0 : loss > 0) continue;
            const auto next = m ^ (std::uint64_t{1} << i);
            if (!seen[next]) {
                seen[next] = true;
                queue.push_back(next);
            }
        }
    }
    return seen;
}

namespace {

std::optional<Configuration> extreme_of(std::size_t n, const std::vector<bool>& set, bool least) {
    for (std::uint64_t c = 0; c < set.size(); ++c) {
        if (!set[c]) continue;
        bool bound = true;
        for (std::uint64_t d = 0; d < set.size() && bound; ++d)
            if (set[d]) bound = least ? (c & ~d) == 0 : (d & ~c) == 0;
        if (bound) return Configuration::from_mask(n, c);
    }
    return std::nullopt;
}

}  // namespace

std::optional<Configuration> least_of(std::size_t n, const std::vector<bool>& set) { return extreme_of(n, set, true); }
std::optional<Configuration> greatest_of(std::size_t n, const std::vector<bool>& set) {
    return extreme_of(n, set, false);
}

bool is_strict_improvement_path(const Network& net, const Field& h, const AdmissiblePath& path) {
    Configuration x = path.start;
    for (const auto& s : path.steps) {
        if (x[s.agent] == s.action) return false;
        if (flip_loss(net, h, x, s.agent).sign() >= 0) return false;
        x.set(s.agent, s.action);
    }
    return true;
}

// ---------------------------------------------------------------------------
// Random instances

namespace {

Rational random_fraction(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi, std::int64_t den) {
    std::uniform_int_distribution<std::int64_t> k(lo, hi);
    return Rational(k(rng), den);
}

}  // namespace

Network random_network(std::mt19937_64& rng, const RandomSpec& spec) {
    std::uniform_int_distribution<std::size_t> size(spec.min_n, spec.max_n);
    std::bernoulli_distribution edge(spec.density);
    std::uniform_int_distribution<std::int64_t> num(1, 4);
    std::uniform_int_distribution<std::int64_t> den(1, 3);
    const std::size_t n = size(rng);
    std::vector<Network::Link> links;
    for (Agent i = 0; i < n; ++i)
        for (Agent j = 0; j < n; ++j)
            if (i != j && edge(rng)) links.push_back({i, j, Rational(num(rng), den(rng))});
    return Network(n, links);
}

Field random_field(std::mt19937_64& rng, const Network& net) {
    std::uniform_int_distribution<int> mode(0, 5);
    std::bernoulli_distribution coin(0.5);
    Field h(net.size());
    for (Agent i = 0; i < net.size(); ++i) {
        const Rational& w = net.out_degree(i);
        const Rational sign(coin(rng) ? 1 : -1);
        switch (mode(rng)) {
            case 0: h[i] = Rational(0); break;
            case 1: h[i] = sign * w; break;                      // tie with the degree
            case 2: h[i] = sign * (w + Rational(1, 2)); break;   // stubborn
            default: h[i] = random_fraction(rng, -12, 12, 4); break;
        }
    }
    return h;
}

FieldRange random_range(std::mt19937_64& rng, const Network& net) {
    FieldRange r{random_field(rng, net), {}};
    std::bernoulli_distribution flat(0.3);
    r.upper = r.lower;
    for (Agent i = 0; i < net.size(); ++i)
        if (!flat(rng)) r.upper[i] = r.lower[i] + random_fraction(rng, 0, 8, 2);
    return r;
}

Field random_interior(std::mt19937_64& rng, const FieldRange& range) {
    std::uniform_int_distribution<std::int64_t> k(0, 4);
    Field h(range.lower.size());
    for (std::size_t i = 0; i < h.size(); ++i)
        h[i] = range.lower[i] + (range.upper[i] - range.lower[i]) * Rational(k(rng), 4);
    return h;
}

Configuration random_configuration(std::mt19937_64& rng, std::size_t n) {
    std::bernoulli_distribution coin(0.5);
    std::vector<Action> s(n);
    for (auto& a : s) a = coin(rng) ? Action::plus : Action::minus;
    return Configuration(std::move(s));
}

std::vector<Field> corners(const FieldRange& range) {
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < range.lower.size(); ++i)
        if (range.lower[i] != range.upper[i]) free.push_back(i);
    if (free.size() > 12) throw ContractError("too many free coordinates for corner enumeration");
    std::vector<Field> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << free.size()); ++m) {
        Field h = range.lower;
        for (std::size_t k = 0; k < free.size(); ++k)
            if ((m >> k) & 1U) h[free[k]] = range.upper[free[k]];
        out.push_back(std::move(h));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Suite

bool SuiteReport::passed() const { return total_failures() == 0 && total_checks() > 0; }

std::size_t SuiteReport::total_checks() const {
    std::size_t s = 0;
    for (const auto& [name, t] : properties) s += t.checks;
    return s;
}

std::size_t SuiteReport::total_failures() const {
    std::size_t s = 0;
    for (const auto& [name, t] : properties) s += t.failures;
    return s;
}

namespace {

std::string field_str(const Field& h) {
    std::string s = "(";
    for (std::size_t i = 0; i < h.size(); ++i) s += (i ? "," : "") + h[i].str();
    return s + ")";
}

class Recorder {
public:
    Recorder(SuiteReport& report, const std::string& context) : report_(report), context_(context) {}

    void check(const char* property, bool ok, const std::string& detail = {}) {
        auto& t = report_.properties[property];
        ++t.checks;
        if (ok) return;
        ++t.failures;
        if (report_.failures.size() < 20) report_.failures.push_back(std::string(property) + ": " + context_ + detail);
    }

private:
    SuiteReport& report_;
    std::string context_;
};

std::vector<bool> as_set(std::size_t n, const std::vector<Configuration>& xs) {
    std::vector<bool> s(std::size_t{1} << n, false);
    for (const auto& x : xs) s[x.mask()] = true;
    return s;
}

std::vector<bool> intersect(std::vector<bool> a, const std::vector<bool>& b) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = a[k] && b[k];
    return a;
}

void field_properties(Recorder& rec, std::mt19937_64& rng, const Network& net, const Field& h) {
    const std::size_t n = net.size();
    const auto ref = equilibria(net, h);
    const auto set = as_set(n, ref);
    const auto eq = enumerate_equilibria(net, h);

    auto sorted_ref = ref;
    std::sort(sorted_ref.begin(), sorted_ref.end());
    rec.check("equilibria.reference", eq.members == sorted_ref);
    rec.check("equilibria.nonempty", !eq.members.empty());
    rec.check("equilibria.extremes", least_of(n, set) == eq.least && greatest_of(n, set) == eq.greatest);

    // Pairwise join/meet stay inside the set and are its sup/inf there.
    const std::size_t stride = std::max<std::size_t>(1, ref.size() / 24);
    for (std::size_t a = 0; a < ref.size(); a += stride) {
        for (std::size_t b = a; b < ref.size(); b += stride) {
            const auto jm = lattice_ops(net, h, ref[a], ref[b]);
            std::vector<bool> above(set.size(), false);
            std::vector<bool> below(set.size(), false);
            for (const auto& z : ref) {
                if (ref[a].leq(z) && ref[b].leq(z)) above[z.mask()] = true;
                if (z.leq(ref[a]) && z.leq(ref[b])) below[z.mask()] = true;
            }
            rec.check("lattice.join", least_of(n, above) == jm.join, " x=" + ref[a].str() + " y=" + ref[b].str());
            rec.check("lattice.meet", greatest_of(n, below) == jm.meet, " x=" + ref[a].str() + " y=" + ref[b].str());
        }
    }

    const auto up = closure(net, h, Configuration::consensus(n, Action::minus), Direction::up, PathMode::improvement);
    const auto down = closure(net, h, Configuration::consensus(n, Action::plus), Direction::down, PathMode::improvement);
    rec.check("closure.least", up.end == eq.least);
    rec.check("closure.greatest", down.end == eq.greatest);
    rec.check("closure.path", up.path.end() == up.end && is_strict_improvement_path(net, h, up.path) &&
                                  down.path.end() == down.end && is_strict_improvement_path(net, h, down.path));

    for (int k = 0; k < 3; ++k) {
        const auto x = random_configuration(rng, n);
        for (PathMode mode : {PathMode::improvement, PathMode::best_response}) {
            const auto ex = ireachable_extremes(net, h, x, mode);
            rec.check("extremes.in_equilibria", set[ex.least.mask()] && set[ex.greatest.mask()], " x=" + x.str());
            const auto reach = reachable(net, h, x, mode == PathMode::improvement ? Move::strict : Move::weak);
            const auto eq_reach = intersect(reach, set);
            rec.check(mode == PathMode::improvement ? "extremes.i_reachable" : "extremes.br_reachable",
                      least_of(n, eq_reach) == ex.least && greatest_of(n, eq_reach) == ex.greatest, " x=" + x.str());
        }
        // Monotone closures are the top/bottom of the monotone reachable sets.
        const auto fplus = closure(net, h, x, Direction::up, PathMode::improvement).end;
        const auto gminus = closure(net, h, x, Direction::down, PathMode::best_response).end;
        rec.check("closure.f_plus", greatest_of(n, reachable(net, h, x, Move::strict, Monotonicity::up_only)) == fplus,
                  " x=" + x.str());
        rec.check("closure.g_minus",
                  least_of(n, reachable(net, h, x, Move::weak, Monotonicity::down_only)) == gminus, " x=" + x.str());

        // Zero rates exactly at equilibria.
        rec.check("rates.equilibrium", (transition_rates(net, h, x).total == 0) == set[x.mask()], " x=" + x.str());
    }

    const bool coexistent = std::any_of(ref.begin(), ref.end(), [](const auto& x) { return !x.is_consensus(); });
    const bool polarizable = is_polarizable(net, h);
    rec.check("polarizable.reference", polarizable == coexistent);
    rec.check("polarizable.indecomposable", polarizable == !is_indecomposable(net, FieldRange::point(h)));

    const auto cls = classify_field(net, h);
    const bool plus_stubborn = !stubborn_set(net, h, Action::plus).empty();
    const bool minus_stubborn = !stubborn_set(net, h, Action::minus).empty();
    ConsensusKind expected = ConsensusKind::regular;
    if (plus_stubborn && minus_stubborn)
        expected = ConsensusKind::frustrated;
    else if (plus_stubborn)
        expected = ConsensusKind::biased_plus;
    else if (minus_stubborn)
        expected = ConsensusKind::biased_minus;
    rec.check("classify.stubborn_pattern", cls.consensus_kind == expected, " kind=" + to_string(cls.consensus_kind));
    const bool has_plus = set[Configuration::consensus(n, Action::plus).mask()];
    const bool has_minus = set[Configuration::consensus(n, Action::minus).mask()];
    rec.check("classify.consensus_equilibria", (expected == ConsensusKind::regular) == (has_plus && has_minus) &&
                                                   (expected == ConsensusKind::biased_plus) == (has_plus && !has_minus) &&
                                                   (expected == ConsensusKind::frustrated) == (!has_plus && !has_minus));

    for (Action a : {Action::plus, Action::minus}) {
        const bool unique = ref.size() == 1 && ref.front().is_consensus(a);
        rec.check("biased.unique", unique_biased_check(net, h, a) == unique);
    }
}

void range_properties(Recorder& rec, std::mt19937_64& rng, const Network& net, const FieldRange& range) {
    const std::size_t n = net.size();
    const auto result = check_indecomposable(net, range);
    const auto ref = violating_partition(net, range);
    rec.check("indecomposable.reference", result.indecomposable == !ref.has_value());

    // Indecomposable iff no field in the box (corners and interior samples) is polarizable.
    bool any_polarizable = false;
    for (const auto& h : corners(range)) any_polarizable = any_polarizable || is_polarizable(net, h);
    std::vector<Field> interior;
    for (int k = 0; k < 20; ++k) interior.push_back(random_interior(rng, range));
    for (const auto& h : interior) any_polarizable = any_polarizable || is_polarizable(net, h);
    if (result.indecomposable) rec.check("indecomposable.no_polarizable_field", !any_polarizable);

    const auto witness = decomposition_witness(net, range);
    rec.check("witness.presence", witness.has_value() == !result.indecomposable);
    if (witness) {
        const auto& w = *witness;
        bool ok = range.contains(w.field_star) && !w.config_star.is_consensus() &&
                  ref_is_equilibrium(net, w.field_star, w.config_star) && w.partition.plus == w.config_star.positive_part() &&
                  w.partition.minus == w.config_star.negative_part() && result.violating == w.partition;
        rec.check("witness.valid", ok);
    }

    if (!result.indecomposable) return;
    for (int k = 0; k < 3; ++k) {
        const auto x = random_configuration(rng, n);
        AdmissiblePath path;
        try {
            path = robust_consensus_path(net, range, x);
        } catch (const std::exception& e) {
            rec.check("robust_path.exists", false, " x=" + x.str() + " " + e.what());
            continue;
        }
        rec.check("robust_path.exists", true);
        rec.check("robust_path.shape",
                  path.start == x && path.length() <= n && path.end().is_consensus(), " x=" + x.str());
        bool robust = true;
        for (const auto& h : corners(range)) robust = robust && is_strict_improvement_path(net, h, path);
        for (const auto& h : interior) robust = robust && is_strict_improvement_path(net, h, path);
        rec.check("robust_path.strict", robust, " x=" + x.str());
    }
}

}  // namespace

SuiteReport run_suite(std::size_t max_n, std::size_t instances, std::uint64_t seed) {
    if (max_n < 1 || max_n > 12) throw ContractError("max_n must lie in 1..12");
    SuiteReport report;
    report.instances = instances;
    std::mt19937_64 rng(seed);
    const RandomSpec spec{1, max_n, 0.4};
    for (std::size_t k = 0; k < instances; ++k) {
        const Network net = random_network(rng, spec);
        const Field h = random_field(rng, net);
        const FieldRange range = random_range(rng, net);
        std::ostringstream ctx;
        ctx << "instance " << k << " n=" << net.size() << " h=" << field_str(h) << " range=[" << field_str(range.lower)
            << "," << field_str(range.upper) << "]";
        Recorder rec(report, ctx.str());
        try {
            field_properties(rec, rng, net, h);
            range_properties(rec, rng, net, range);
        } catch (const std::exception& e) {
            rec.check("no_exceptions", false, std::string(" ") + e.what());
        }
    }
    return report;
}

}  // namespace ltd::oracle
