#include "ltd/simulation.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <thread>

#include "schedule_cursor.hpp"

namespace ltd {

RateMap transition_rates(const Network& net, const Field& h, const Configuration& x) {
    if (h.size() != net.size() || x.size() != net.size()) throw ContractError("dimension mismatch");
    RateMap m;
    m.rates.assign(net.size(), 0);
    for (Agent i = 0; i < net.size(); ++i) {
        // New state y_i = -x_i; rate 1 iff y_i * (sum_j W_ij x_j + h_i) > 0.
        const int s = drive(net, h, x, i).sign();
        if ((x[i] == Action::plus && s < 0) || (x[i] == Action::minus && s > 0)) {
            m.rates[i] = 1;
            ++m.total;
        }
    }
    return m;
}

namespace {

// A consensus is absorbing for every field in the envelope when the
// corresponding strict degree condition holds (w > -h- for +1, w > h+ for -1).
struct Invariance {
    bool plus = false;
    bool minus = false;
};

Invariance consensus_invariance(const Network& net, const FieldRange& env) {
    Invariance inv{true, true};
    for (Agent i = 0; i < net.size(); ++i) {
        if (!(net.out_degree(i) + env.lower[i] > Rational(0))) inv.plus = false;
        if (!(net.out_degree(i) - env.upper[i] > Rational(0))) inv.minus = false;
    }
    return inv;
}

}  // namespace

Trajectory simulate(const Network& net, const FieldSchedule& schedule, const Configuration& x0, double horizon,
                    std::uint64_t seed) {
    const std::size_t n = net.size();
    if (schedule.dimension() != n || x0.size() != n) throw ContractError("dimension mismatch");
    if (!(horizon >= 0)) throw ContractError("horizon must be nonnegative");

    Trajectory traj;
    traj.seed = seed;
    traj.horizon = horizon;
    traj.initial = x0;
    Configuration x = x0;
    traj.samples.push_back({0.0, x.magnetization()});

    const Invariance inv = consensus_invariance(net, schedule.envelope());
    detail::ScheduleCursor cursor(schedule);

    auto absorbed_in_consensus = [&](double t) {
        if (!x.is_consensus()) return false;
        if (!traj.hitting_time_consensus) traj.hitting_time_consensus = t;
        return x[0] == Action::plus ? inv.plus : inv.minus;
    };
    auto frozen = [&] { return cursor.settled() && transition_rates(net, cursor.field(), x).total == 0; };

    if (absorbed_in_consensus(0.0) || frozen()) {
        traj.absorbed = true;
        traj.final = x;
        return traj;
    }

    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> gap(static_cast<double>(n));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    double t = 0;
    while (true) {
        t += gap(rng);
        if (t > horizon) break;
        const bool field_changed = cursor.advance_to(t);
        const Agent i = pick(rng);
        ++traj.activations;

        const int s = drive(net, cursor.field(), x, i).sign();
        const Action next = s > 0 ? Action::plus : s < 0 ? Action::minus : x[i];
        if (next != x[i]) {
            x.set(i, next);
            traj.events.push_back({t, i, next});
            traj.samples.push_back({t, x.magnetization()});
            if (absorbed_in_consensus(t) || frozen()) {
                traj.absorbed = true;
                break;
            }
        } else if (field_changed && frozen()) {
            traj.absorbed = true;
            break;
        }
    }
    traj.final = x;
    return traj;
}

std::size_t consensus_visits(const Trajectory& traj, Action a) {
    Configuration x = traj.initial;
    std::size_t visits = x.is_consensus(a) ? 1 : 0;
    for (const auto& e : traj.events) {
        x.set(e.agent, e.new_state);
        if (e.new_state == a && x.is_consensus(a)) ++visits;
    }
    return visits;
}

std::optional<std::size_t> flips_to_consensus(const Trajectory& traj) {
    Configuration x = traj.initial;
    if (x.is_consensus()) return 0;
    for (std::size_t k = 0; k < traj.events.size(); ++k) {
        x.set(traj.events[k].agent, traj.events[k].new_state);
        if (x.is_consensus()) return k + 1;
    }
    return std::nullopt;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) noexcept {
    std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<Trajectory> run_batch(const Network& net, const FieldSchedule& schedule, const InitialState& initial,
                                  std::size_t runs, double horizon, std::uint64_t base_seed, unsigned threads) {
    if (runs == 0) throw ContractError("at least one run is required");
    const std::size_t n = net.size();
    std::vector<Trajectory> out(runs);
    auto one = [&](std::size_t k) {
        const std::uint64_t seed = mix_seed(base_seed, k);
        Configuration x0;
        if (initial.fixed) {
            x0 = *initial.fixed;
        } else {
            std::mt19937_64 start_rng(mix_seed(seed, 0));
            std::vector<Action> s(n);
            for (auto& a : s) a = (start_rng() >> 63) != 0U ? Action::plus : Action::minus;
            x0 = Configuration(std::move(s));
        }
        out[k] = simulate(net, schedule, x0, horizon, seed);
    };
    const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(runs)));
    if (workers == 1) {
        for (std::size_t k = 0; k < runs; ++k) one(k);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t k = w; k < runs; k += workers) one(k);
            });
        for (auto& th : pool) th.join();
    }
    return out;
}

HittingSummary summarize(std::span<const Trajectory> runs) {
    HittingSummary s;
    s.runs = runs.size();
    for (const auto& tr : runs) {
        if (tr.absorbed) {
            if (tr.final.is_consensus(Action::plus))
                ++s.absorbed_plus;
            else if (tr.final.is_consensus(Action::minus))
                ++s.absorbed_minus;
            else
                ++s.absorbed_other;
        } else {
            ++s.not_absorbed;
        }
        if (tr.hitting_time_consensus) {
            ++s.reached_consensus;
            s.hitting_times.push_back(*tr.hitting_time_consensus);
        }
    }
    std::sort(s.hitting_times.begin(), s.hitting_times.end());
    if (!s.hitting_times.empty()) {
        s.mean_hitting_time = std::accumulate(s.hitting_times.begin(), s.hitting_times.end(), 0.0) /
                              static_cast<double>(s.hitting_times.size());
        const std::size_t m = s.hitting_times.size();
        s.median_hitting_time =
            m % 2 == 1 ? s.hitting_times[m / 2] : 0.5 * (s.hitting_times[m / 2 - 1] + s.hitting_times[m / 2]);
    }
    return s;
}

HittingSummary hitting_stats(const Network& net, const FieldSchedule& schedule, const InitialState& initial,
                             std::size_t runs, double horizon, std::uint64_t base_seed, unsigned threads) {
    const auto trajectories = run_batch(net, schedule, initial, runs, horizon, base_seed, threads);
    return summarize(trajectories);
}

}  // namespace ltd
