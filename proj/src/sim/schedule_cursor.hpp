#pragma once

#include "ltd/simulation.hpp"

namespace ltd::detail {

/// Exact test d >= q for a finite or infinite double.
bool double_at_least(double d, const Rational& q);
/// Smallest double d with d >= q.
double ceil_to_double(const Rational& q);

/// Forward-only walk through a schedule driven by floating-point event times.
///
/// A breakpoint at exact time b takes effect for every event time t with
/// t >= b, decided exactly through the smallest double not below b.
class ScheduleCursor {
public:
    explicit ScheduleCursor(const FieldSchedule& schedule);

    [[nodiscard]] const Field& field() const;
    /// Moves to time t (never backwards). True if at least one breakpoint was crossed.
    bool advance_to(double t);
    /// No further breakpoints ahead.
    [[nodiscard]] bool settled() const noexcept { return !has_next_; }

private:
    void plan_next();

    const FieldSchedule* schedule_;
    std::size_t index_ = 0;
    std::uint64_t cycle_ = 0;
    bool has_next_ = false;
    Rational next_exact_;
    double next_threshold_ = 0;
};

}  // namespace ltd::detail
