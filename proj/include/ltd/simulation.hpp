#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ltd/game.hpp"

namespace ltd {

struct Breakpoint {
    Rational time;
    Field field;

    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Right-continuous piecewise-constant field signal.
///
/// h(t) is the field of the last breakpoint with time <= t. With a period P the
/// breakpoints describe [0, P) and repeat.
class FieldSchedule {
public:
    FieldSchedule() = default;
    /// Throws ContractError unless times start at 0, strictly increase, fields
    /// share one dimension and the period (if any) exceeds the last time.
    explicit FieldSchedule(std::vector<Breakpoint> breakpoints, std::optional<Rational> period = std::nullopt);

    static FieldSchedule constant(Field h);

    [[nodiscard]] std::span<const Breakpoint> breakpoints() const noexcept { return breakpoints_; }
    [[nodiscard]] const std::optional<Rational>& period() const noexcept { return period_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return breakpoints_.front().field.size(); }
    [[nodiscard]] bool is_constant() const noexcept { return breakpoints_.size() == 1; }

    [[nodiscard]] const Field& at(const Rational& t) const;
    /// Entrywise min/max of every field the schedule uses.
    [[nodiscard]] FieldRange envelope() const;

    /// Checks every field against the range and keeps it for reference.
    void attach_range(const FieldRange& range);
    [[nodiscard]] const std::optional<FieldRange>& attached_range() const noexcept { return range_; }

    friend bool operator==(const FieldSchedule& a, const FieldSchedule& b) {
        return a.breakpoints_ == b.breakpoints_ && a.period_ == b.period_;
    }

private:
    std::vector<Breakpoint> breakpoints_;
    std::optional<Rational> period_;
    std::optional<FieldRange> range_;
};

/// h+ on [2k tau, (2k+1) tau), h- on [(2k+1) tau, (2k+2) tau). A degenerate range gives a constant schedule.
FieldSchedule oscillation_schedule(const FieldRange& range, const Rational& tau);

/// Per-agent flip rates at (x, h): 1 iff flipping strictly improves, else 0.
struct RateMap {
    std::vector<int> rates;
    int total = 0;
};

RateMap transition_rates(const Network& net, const Field& h, const Configuration& x);

struct FlipEvent {
    double time;
    Agent agent;
    Action new_state;
};

struct MagnetizationSample {
    double time;
    long magnetization;
};

struct Trajectory {
    std::uint64_t seed = 0;
    double horizon = 0;
    Configuration initial;
    std::vector<FlipEvent> events;
    /// Initial sample, then one per flip event.
    std::vector<MagnetizationSample> samples;
    /// First time the state is a consensus, if within the horizon.
    std::optional<double> hitting_time_consensus;
    /// The run stopped in a configuration that can no longer change.
    bool absorbed = false;
    Configuration final;
    /// Clock ticks processed, flips or not.
    std::uint64_t activations = 0;
};

/// Event-driven simulation: superposed rate-n clock, uniform ticking agent,
/// threshold rule with h(t) at the tick. Same inputs and seed give the same
/// trajectory bit for bit.
Trajectory simulate(const Network& net, const FieldSchedule& schedule, const Configuration& x0, double horizon,
                    std::uint64_t seed);

/// Number of times the trajectory enters a*1 (counting the start).
std::size_t consensus_visits(const Trajectory& traj, Action a);
/// Flip events before the first consensus, if any.
std::optional<std::size_t> flips_to_consensus(const Trajectory& traj);

/// splitmix64 of base + (index + 1) * golden gamma.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// Fixed start, or a uniformly random one per run when `fixed` is empty.
struct InitialState {
    std::optional<Configuration> fixed;
};

/// Run k uses seed mix_seed(base_seed, k); a random start is drawn from an
/// independent stream seeded mix_seed(run seed, 0).
std::vector<Trajectory> run_batch(const Network& net, const FieldSchedule& schedule, const InitialState& initial,
                                  std::size_t runs, double horizon, std::uint64_t base_seed, unsigned threads = 1);

struct HittingSummary {
    std::size_t runs = 0;
    std::size_t absorbed_plus = 0;
    std::size_t absorbed_minus = 0;
    std::size_t absorbed_other = 0;
    std::size_t not_absorbed = 0;
    std::size_t reached_consensus = 0;
    /// Sorted hitting times of runs that reached a consensus.
    std::vector<double> hitting_times;
    double mean_hitting_time = 0;
    double median_hitting_time = 0;
};

HittingSummary summarize(std::span<const Trajectory> runs);

HittingSummary hitting_stats(const Network& net, const FieldSchedule& schedule, const InitialState& initial,
                             std::size_t runs, double horizon, std::uint64_t base_seed, unsigned threads = 1);

}  // namespace ltd
