#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "ltd/lattice.hpp"
#include "ltd/robustness.hpp"
#include "ltd/simulation.hpp"
#include "oracle.hpp"
#include "sim/schedule_cursor.hpp"

using namespace ltd;

namespace {

const Field kHstar{0, -1, 0, 0, 1};
const Configuration kXstar{-1, -1, -1, 1, 1};

// Replays the flips and checks each one strictly improves under h.
bool flips_are_improvements(const Network& net, const Field& h, const Trajectory& t) {
    Configuration x = t.initial;
    for (const auto& e : t.events) {
        if (x[e.agent] == e.new_state) return false;
        if (oracle::flip_loss(net, h, x, e.agent).sign() >= 0) return false;
        x.set(e.agent, e.new_state);
    }
    return x == t.final;
}

}  // namespace

TEST_CASE("transition rates") {
    const Network net = fixtures::graph5();
    CHECK(transition_rates(net, kHstar, kXstar).total == 0);
    const auto r = transition_rates(net, zero_field(5), Configuration{1, -1, -1, -1, -1});
    CHECK(r.rates == std::vector<int>{1, 0, 0, 0, 0});
    CHECK(transition_rates(net, zero_field(5), Configuration::consensus(5, Action::plus)).total == 0);
}

TEST_CASE("rate bounds and rate/equilibrium equivalence on random states") {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 1000; ++k) {
        const Network net = oracle::random_network(rng, {1, 8, 0.4});
        const Field h = oracle::random_field(rng, net);
        const auto x = oracle::random_configuration(rng, net.size());
        const auto r = transition_rates(net, h, x);
        int total = 0;
        for (int v : r.rates) {
            CHECK((v == 0 || v >= 1));
            total += v;
        }
        CHECK(total == r.total);
        CHECK(r.total <= static_cast<int>(net.size()));
        CHECK((r.total == 0) == oracle::ref_is_equilibrium(net, h, x));
    }
}

TEST_CASE("schedules are right-continuous and periodic") {
    const Field a{1, 0};
    const Field b{-1, 0};
    const FieldSchedule s({{Rational(0), a}, {Rational(5), b}}, Rational(10));
    CHECK(s.at(Rational(0)) == a);
    CHECK(s.at(Rational(49, 10)) == a);
    CHECK(s.at(Rational(5)) == b);
    CHECK(s.at(Rational(10)) == a);
    CHECK(s.at(Rational(15)) == b);
    CHECK(s.at(Rational(1234567, 100)) == b);  // 12345.67 mod 10 = 5.67
    CHECK_THROWS_AS(FieldSchedule({{Rational(1), a}}), ContractError);
    CHECK_THROWS_AS(FieldSchedule({{Rational(0), a}, {Rational(0), b}}), ContractError);
    CHECK_THROWS_AS(FieldSchedule({{Rational(0), a}, {Rational(5), Field{1}}}), ContractError);
    CHECK_THROWS_AS(FieldSchedule({{Rational(0), a}, {Rational(5), b}}, Rational(5)), ContractError);

    const FieldRange r{b, a};
    const auto osc = oscillation_schedule(r, Rational(5));
    REQUIRE(osc.breakpoints().size() == 2);
    CHECK(osc.breakpoints()[0].time == Rational(0));
    CHECK(osc.breakpoints()[0].field == a);
    CHECK(osc.breakpoints()[1].time == Rational(5));
    CHECK(osc.breakpoints()[1].field == b);
    CHECK(osc.period() == Rational(10));
    CHECK(oscillation_schedule(FieldRange::point(a), Rational(5)).is_constant());
    CHECK_THROWS_AS(oscillation_schedule(r, Rational(0)), ContractError);
    CHECK(osc.envelope().lower == b);
    CHECK(osc.envelope().upper == a);
}

TEST_CASE("breakpoint thresholds round up exactly") {
    for (const Rational& q : {Rational(1, 3), Rational(5), Rational(1, 10), Rational(123456789, 1000), Rational(2, 7)}) {
        const double d = detail::ceil_to_double(q);
        CHECK(detail::double_at_least(d, q));
        CHECK_FALSE(detail::double_at_least(std::nextafter(d, -INFINITY), q));
    }
    CHECK(detail::ceil_to_double(Rational(5)) == 5.0);
}

TEST_CASE("the schedule cursor follows a periodic schedule") {
    const FieldSchedule s({{Rational(0), Field{1}}, {Rational(1, 3), Field{2}}}, Rational(1));
    detail::ScheduleCursor c(s);
    CHECK(c.field() == Field{1});
    CHECK_FALSE(c.advance_to(0.3));
    CHECK(c.advance_to(0.34));
    CHECK(c.field() == Field{2});
    CHECK(c.advance_to(1.0));
    CHECK(c.field() == Field{1});
    CHECK(c.advance_to(7.5));
    CHECK(c.field() == Field{2});
    CHECK_FALSE(c.settled());
    const auto constant = FieldSchedule::constant(Field{1});
    detail::ScheduleCursor k(constant);
    CHECK(k.settled());
}

TEST_CASE("simulation examples") {
    const Network net = fixtures::graph5();
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto t = simulate(net, FieldSchedule::constant(kHstar), kXstar, 1e4, seed);
        CHECK(t.events.empty());
        CHECK(t.final == kXstar);
    }
    const Field stubborn{10, 10, 10, 10, 10};
    const auto t = simulate(net, FieldSchedule::constant(stubborn), Configuration::consensus(5, Action::minus), 1e3, 3);
    CHECK(t.final.is_consensus(Action::plus));
    CHECK(t.events.size() == 5);
    CHECK(t.samples.back().magnetization == 5);
    CHECK(t.absorbed);
    const auto zero = simulate(net, FieldSchedule::constant(zero_field(5)), Configuration{1, -1, 1, -1, 1}, 0, 9);
    CHECK(zero.events.empty());
    CHECK(zero.samples.size() == 1);
    CHECK(zero.final == Configuration{1, -1, 1, -1, 1});
}

TEST_CASE("trajectory invariants and seed determinism") {
    const Network net = fixtures::graph5();
    const auto sched = oscillation_schedule({zero_field(5), Field{0, 2, 0, 0, 2}}, Rational(1, 2));
    std::mt19937_64 rng(30);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Configuration x0 = oracle::random_configuration(rng, 5);
        const auto a = simulate(net, sched, x0, 100, seed);
        const auto b = simulate(net, sched, x0, 100, seed);
        REQUIRE(a.events.size() == b.events.size());
        for (std::size_t k = 0; k < a.events.size(); ++k) {
            CHECK(a.events[k].time == b.events[k].time);
            CHECK(a.events[k].agent == b.events[k].agent);
            if (k > 0) CHECK(a.events[k - 1].time < a.events[k].time);
            CHECK(std::labs(a.samples[k + 1].magnetization - a.samples[k].magnetization) == 2);
        }
        CHECK(a.final == b.final);
        CHECK(a.activations == b.activations);
    }
}

TEST_CASE("constant-field runs are improvement paths that end in an equilibrium") {
    std::mt19937_64 rng(32);
    for (int k = 0; k < 150; ++k) {
        const Network net = oracle::random_network(rng, {1, 8, 0.4});
        const Field h = oracle::random_field(rng, net);
        const auto x0 = oracle::random_configuration(rng, net.size());
        const auto t = simulate(net, FieldSchedule::constant(h), x0, 1e4, rng());
        CHECK(flips_are_improvements(net, h, t));
        CHECK(t.absorbed);
        CHECK(oracle::ref_is_equilibrium(net, h, t.final));
        const auto eq = enumerate_equilibria(net, h);
        CHECK(std::binary_search(eq.members.begin(), eq.members.end(), t.final));
    }
}

TEST_CASE("indecomposable ranges with strict degree margins end in a consensus") {
    std::mt19937_64 rng(33);
    int tested = 0;
    while (tested < 25) {
        const Network net = oracle::random_network(rng, {2, 8, 0.5});
        const FieldRange range = oracle::random_range(rng, net);
        bool margins = true;
        for (Agent i = 0; i < net.size(); ++i)
            margins = margins && net.out_degree(i) + range.lower[i] > Rational(0) &&
                      net.out_degree(i) - range.upper[i] > Rational(0);
        if (!margins || !is_indecomposable(net, range)) continue;
        ++tested;
        const auto sched = oscillation_schedule(range, Rational(1, 2));
        const auto runs = run_batch(net, sched, {}, 20, 5e3, rng());
        for (const auto& t : runs) {
            CHECK(t.absorbed);
            CHECK(t.final.is_consensus());
            // No field in the box can move the final consensus.
            for (const auto& h : oracle::corners(range)) CHECK(transition_rates(net, h, t.final).total == 0);
        }
    }
}

TEST_CASE("batch statistics") {
    const Network net = fixtures::graph5();
    const auto sched = FieldSchedule::constant(Field{10, 10, 10, 10, 10});
    const auto one = run_batch(net, sched, {}, 1, 100, 77);
    std::mt19937_64 start_rng(mix_seed(mix_seed(77, 0), 0));
    std::vector<Action> s(5);
    for (auto& a : s) a = (start_rng() >> 63) != 0U ? Action::plus : Action::minus;
    const auto direct = simulate(net, sched, Configuration(s), 100, mix_seed(77, 0));
    CHECK(one.front().events.size() == direct.events.size());
    CHECK(one.front().final == direct.final);
    CHECK(one.front().activations == direct.activations);

    const auto threaded = run_batch(net, sched, {}, 16, 100, 5, 4);
    const auto serial = run_batch(net, sched, {}, 16, 100, 5, 1);
    for (std::size_t k = 0; k < 16; ++k) CHECK(threaded[k].activations == serial[k].activations);
    CHECK_THROWS_AS(run_batch(net, sched, {}, 0, 100, 5), ContractError);
}

TEST_CASE("absorption time under an all-stubborn field is the maximum of n unit exponentials") {
    // Each agent flips at its first tick, so E[T] = H_5 = 1 + 1/2 + 1/3 + 1/4 + 1/5.
    const Network net = fixtures::graph5();
    InitialState start;
    start.fixed = Configuration::consensus(5, Action::minus);
    const std::size_t runs = 4000;
    const auto batch = run_batch(net, FieldSchedule::constant(Field{10, 10, 10, 10, 10}), start, runs, 1e3, 2024);
    double sum = 0;
    for (const auto& t : batch) {
        REQUIRE(t.events.size() == 5);
        CHECK(t.final.is_consensus(Action::plus));
        sum += t.events.back().time;
    }
    const double mean = sum / static_cast<double>(runs);
    const double h5 = 1.0 + 1.0 / 2 + 1.0 / 3 + 1.0 / 4 + 1.0 / 5;
    const double sd = std::sqrt(1.0 + 1.0 / 4 + 1.0 / 9 + 1.0 / 16 + 1.0 / 25);
    // Five standard errors.
    CHECK(std::abs(mean - h5) < 5 * sd / std::sqrt(static_cast<double>(runs)));

    const auto s = summarize(batch);
    CHECK(s.absorbed_plus == runs);
    CHECK(s.reached_consensus == runs);
    CHECK(s.mean_hitting_time == 0);  // the start is already a consensus
}
