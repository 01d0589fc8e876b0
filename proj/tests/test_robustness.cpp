#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "ltd/robustness.hpp"
#include "oracle.hpp"

using namespace ltd;

namespace {

FieldRange range5(Field lo, Field hi) { return {std::move(lo), std::move(hi)}; }

FieldRange node1_range(const Rational& alpha, const Rational& beta) {
    FieldRange r{zero_field(7), zero_field(7)};
    r.lower[0] = alpha;
    r.upper[0] = beta;
    return r;
}

bool robust_under(const Network& net, const FieldRange& range, const AdmissiblePath& path, std::mt19937_64& rng) {
    for (const auto& h : oracle::corners(range))
        if (!oracle::is_strict_improvement_path(net, h, path)) return false;
    for (int k = 0; k < 20; ++k)
        if (!oracle::is_strict_improvement_path(net, oracle::random_interior(rng, range), path)) return false;
    return true;
}

}  // namespace

TEST_CASE("indecomposability of the five-node graph") {
    const Network net = fixtures::graph5();
    CHECK(is_indecomposable(net, range5(zero_field(5), zero_field(5))));
    CHECK_FALSE(is_indecomposable(net, FieldRange::point(Field{1, 0, 0, 0, 0})));
    const auto iii = check_indecomposable(net, range5(Field{0, -1, 0, 0, 0}, Field{0, 0, 0, 0, 1}));
    REQUIRE_FALSE(iii.indecomposable);
    CHECK(iii.violating->minus == NodeSet{0, 1, 2});
    CHECK(iii.violating->plus == NodeSet{3, 4});
    // Each corner on its own is indecomposable.
    CHECK(is_indecomposable(net, FieldRange::point(Field{0, -1, 0, 0, 0})));
    CHECK(is_indecomposable(net, FieldRange::point(Field{0, 0, 0, 0, 1})));
    CHECK(is_indecomposable(net, range5(zero_field(5), Field{0, 2, 0, 0, 2})));

    Limits tight;
    tight.max_partition_nodes = 4;
    CHECK_THROWS_AS(check_indecomposable(net, FieldRange::point(zero_field(5)), tight), CapExceeded);
}

TEST_CASE("the orientation of a partition matters") {
    // V- = {1,2,3}, V+ = {4,5} violates; the mirrored split does not.
    const Network net = fixtures::graph5();
    const FieldRange r = range5(Field{0, -1, 0, 0, 0}, Field{0, 0, 0, 0, 1});
    const Configuration x{-1, -1, -1, 1, 1};
    const Configuration mirrored{1, 1, 1, -1, -1};
    auto h_star = [&](const Configuration& c) {
        Field h(5);
        for (Agent i = 0; i < 5; ++i) h[i] = c[i] == Action::plus ? r.upper[i] : r.lower[i];
        return h;
    };
    CHECK(oracle::ref_is_equilibrium(net, h_star(x), x));
    CHECK_FALSE(oracle::ref_is_equilibrium(net, h_star(mirrored), mirrored));
}

TEST_CASE("decomposition witnesses") {
    const Network net = fixtures::graph5();
    const auto w = decomposition_witness(net, range5(Field{0, -1, 0, 0, 0}, Field{0, 0, 0, 0, 1}));
    REQUIRE(w.has_value());
    CHECK(w->field_star == Field{0, -1, 0, 0, 1});
    CHECK(w->config_star == Configuration{-1, -1, -1, 1, 1});
    CHECK_FALSE(decomposition_witness(net, FieldRange::point(zero_field(5))).has_value());

    const Network two = fixtures::two_node(3, 1);
    const auto w2 = decomposition_witness(two, FieldRange::point(Field{4, -2}));
    REQUIRE(w2.has_value());
    CHECK(w2->config_star == Configuration{1, -1});
    for (Agent i = 0; i < 2; ++i) CHECK(oracle::flip_loss(two, w2->field_star, w2->config_star, i).sign() >= 0);
}

TEST_CASE("robust consensus paths") {
    std::mt19937_64 rng(4);
    const Network net = fixtures::graph5();
    const FieldRange iv = range5(zero_field(5), Field{0, 2, 0, 0, 2});

    const auto trivial = robust_consensus_path(net, iv, Configuration::consensus(5, Action::plus));
    CHECK(trivial.length() == 0);
    CHECK(trivial.end().is_consensus(Action::plus));

    // Under h- = 0 agent 2 already sees +1 > 0 at x, so the monotone cascade reaches +1.
    const Configuration x{-1, -1, -1, 1, 1};
    const auto path = robust_consensus_path(net, iv, x);
    CHECK(path.monotone);
    CHECK(path.end().is_consensus(Action::plus));
    CHECK(path.length() == 3);
    CHECK(path.steps.front().agent == 1);
    CHECK(robust_under(net, iv, path, rng));

    const Network g7 = fixtures::graph7();
    for (int k = 0; k < 20; ++k) {
        const auto x7 = oracle::random_configuration(rng, 7);
        const auto p7 = robust_consensus_path(g7, node1_range(0, 0), x7);
        CHECK(p7.length() <= 7);
        CHECK(p7.end().is_consensus());
        CHECK(robust_under(g7, node1_range(0, 0), p7, rng));
    }

    const FieldRange iii = range5(Field{0, -1, 0, 0, 0}, Field{0, 0, 0, 0, 1});
    try {
        (void)robust_consensus_path(net, iii, x);
        FAIL("expected NotIndecomposable");
    } catch (const NotIndecomposable& e) {
        CHECK(e.partition().plus == NodeSet{3, 4});
    }
}

TEST_CASE("the seven-node graph is indecomposable for every node-1 interval") {
    const Network g7 = fixtures::graph7();
    const std::vector<Rational> w{3, 1, 3, 3, 3, 3, 3};
    CHECK(std::vector<Rational>(g7.out_degrees().begin(), g7.out_degrees().end()) == w);
    for (auto [a, b] : std::vector<std::pair<Rational, Rational>>{
             {0, 0}, {Rational(-31, 10), Rational(31, 10)}, {Rational(7, 2), 5}, {-10, 10}, {-100, -50}, {4, 4}})
        CHECK(is_indecomposable(g7, node1_range(a, b)));
}

TEST_CASE("cohesiveness") {
    const Network net = fixtures::graph5();
    const std::vector<Agent> all{0, 1, 2, 3, 4};
    CHECK(cohesive_check(net, all, Rational(1, 3)).cohesive);
    CHECK(cohesive_check(net, std::vector<Agent>{1, 3, 4}, Rational(1, 2)).cohesive);
    CHECK_FALSE(cohesive_check(net, std::vector<Agent>{0}, Rational(1, 2)).cohesive);
    CHECK_THROWS_AS(cohesive_check(net, all, Rational(3, 2)), ContractError);
    CHECK_THROWS_AS(cohesive_check(net, all, Rational(-1)), ContractError);
}

TEST_CASE("homogeneous thresholds: indecomposable iff no cohesive and closed subset") {
    std::mt19937_64 rng(14);
    for (int k = 0; k < 60; ++k) {
        const Network net = oracle::random_network(rng, {2, 10, 0.35});
        const std::size_t n = net.size();
        for (const Rational& r : {Rational(0), Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(1)}) {
            Field h(n);
            for (Agent i = 0; i < n; ++i) h[i] = (Rational(1) - Rational(2) * r) * net.out_degree(i);
            bool cohesive_split = false;
            for (std::uint64_t m = 1; m + 1 < (std::uint64_t{1} << n) && !cohesive_split; ++m) {
                NodeSet s;
                for (Agent i = 0; i < n; ++i)
                    if ((m >> i) & 1U) s.push_back(i);
                const auto c = cohesive_check(net, s, r);
                cohesive_split = c.cohesive && c.closed;
            }
            CHECK(is_indecomposable(net, FieldRange::point(h)) == !cohesive_split);
        }
    }
}

TEST_CASE("unique biased check") {
    const Network g7 = fixtures::graph7();
    CHECK(unique_biased_check(g7, Field{4, 0, 0, 0, 0, 0, 0}, Action::plus));
    const Network g5 = fixtures::graph5();
    CHECK_FALSE(unique_biased_check(g5, zero_field(5), Action::plus));
    const auto eq = oracle::equilibria(g5, Field{2, 0, 0, 0, 0});
    const bool unique = eq.size() == 1 && eq.front().is_consensus(Action::plus);
    CHECK(unique_biased_check(g5, Field{2, 0, 0, 0, 0}, Action::plus) == unique);
}

TEST_CASE("robust paths on random indecomposable ranges up to ten nodes") {
    std::mt19937_64 rng(15);
    int tested = 0;
    while (tested < 60) {
        const Network net = oracle::random_network(rng, {2, 10, 0.5});
        const FieldRange range = oracle::random_range(rng, net);
        if (!is_indecomposable(net, range)) continue;
        ++tested;
        const auto x = oracle::random_configuration(rng, net.size());
        const auto path = robust_consensus_path(net, range, x);
        CHECK(path.length() <= net.size());
        CHECK(path.end().is_consensus());
        CHECK(robust_under(net, range, path, rng));
    }
}
