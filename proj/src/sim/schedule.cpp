#include <algorithm>

#include "ltd/simulation.hpp"
#include "schedule_cursor.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>

namespace ltd {

FieldSchedule::FieldSchedule(std::vector<Breakpoint> breakpoints, std::optional<Rational> period)
    : breakpoints_(std::move(breakpoints)), period_(std::move(period)) {
    if (breakpoints_.empty()) throw ContractError("schedule needs at least one breakpoint");
    if (!breakpoints_.front().time.is_zero()) throw ContractError("first breakpoint must be at time 0");
    const std::size_t n = breakpoints_.front().field.size();
    for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
        if (breakpoints_[k].field.size() != n) throw ContractError("schedule fields differ in dimension");
        if (k > 0 && !(breakpoints_[k - 1].time < breakpoints_[k].time))
            throw ContractError("breakpoint times must be strictly increasing");
    }
    if (period_ && !(breakpoints_.back().time < *period_))
        throw ContractError("period must exceed the last breakpoint time");
}

FieldSchedule FieldSchedule::constant(Field h) { return FieldSchedule({Breakpoint{Rational(0), std::move(h)}}); }

const Field& FieldSchedule::at(const Rational& t) const {
    if (t.sign() < 0) throw ContractError("schedule queried at negative time");
    Rational local = t;
    if (period_) {
        // local = t - floor(t / P) * P
        const Rational q = t / *period_;
        std::int64_t whole = q.num() / q.den();
        local = t - Rational(whole) * *period_;
    }
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), local,
                               [](const Rational& v, const Breakpoint& b) { return v < b.time; });
    return std::prev(it)->field;
}

FieldRange FieldSchedule::envelope() const {
    FieldRange r{breakpoints_.front().field, breakpoints_.front().field};
    for (const auto& b : breakpoints_) {
        for (std::size_t i = 0; i < b.field.size(); ++i) {
            r.lower[i] = std::min(r.lower[i], b.field[i]);
            r.upper[i] = std::max(r.upper[i], b.field[i]);
        }
    }
    return r;
}

void FieldSchedule::attach_range(const FieldRange& range) {
    range.validate(dimension());
    for (const auto& b : breakpoints_)
        if (!range.contains(b.field)) throw ContractError("schedule field at t=" + b.time.str() + " lies outside the range");
    range_ = range;
}

FieldSchedule oscillation_schedule(const FieldRange& range, const Rational& tau) {
    if (tau.sign() <= 0) throw ContractError("oscillation half-period must be positive");
    range.validate(range.lower.size());
    if (range.degenerate()) return FieldSchedule::constant(range.upper);
    FieldSchedule s({Breakpoint{Rational(0), range.upper}, Breakpoint{tau, range.lower}}, tau + tau);
    s.attach_range(range);
    return s;
}

namespace detail {

bool double_at_least(double d, const Rational& q) {
    using boost::multiprecision::cpp_int;
    if (std::isinf(d)) return d > 0;
    int exp = 0;
    const double frac = std::frexp(d, &exp);
    // d = mant * 2^(exp - 53) exactly
    const auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
    const int shift = exp - 53;
    cpp_int lhs = mant;
    cpp_int rhs = q.num();
    lhs *= q.den();
    if (shift >= 0)
        lhs <<= shift;
    else
        rhs <<= -shift;
    return lhs >= rhs;
}

double ceil_to_double(const Rational& q) {
    double d = q.to_double();
    while (!double_at_least(d, q)) d = std::nextafter(d, std::numeric_limits<double>::infinity());
    for (double below = std::nextafter(d, -std::numeric_limits<double>::infinity()); double_at_least(below, q);
         below = std::nextafter(d, -std::numeric_limits<double>::infinity()))
        d = below;
    return d;
}

ScheduleCursor::ScheduleCursor(const FieldSchedule& schedule) : schedule_(&schedule) { plan_next(); }

const Field& ScheduleCursor::field() const { return schedule_->breakpoints()[index_].field; }

void ScheduleCursor::plan_next() {
    const auto bps = schedule_->breakpoints();
    const auto& period = schedule_->period();
    if (index_ + 1 < bps.size()) {
        next_exact_ = period ? Rational(static_cast<std::int64_t>(cycle_)) * *period + bps[index_ + 1].time
                             : bps[index_ + 1].time;
    } else if (period) {
        next_exact_ = Rational(static_cast<std::int64_t>(cycle_ + 1)) * *period;
    } else {
        has_next_ = false;
        return;
    }
    has_next_ = true;
    next_threshold_ = ceil_to_double(next_exact_);
}

bool ScheduleCursor::advance_to(double t) {
    bool changed = false;
    while (has_next_ && t >= next_threshold_) {
        if (index_ + 1 < schedule_->breakpoints().size()) {
            ++index_;
        } else {
            index_ = 0;
            ++cycle_;
        }
        changed = true;
        plan_next();
    }
    return changed;
}

}  // namespace detail
}  // namespace ltd
