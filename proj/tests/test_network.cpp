#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "ltd/io.hpp"
#include "oracle.hpp"

using namespace ltd;

TEST_CASE("the five-node file has the printed out-degrees") {
    const Network net = parse_network(io::read_file(fixtures::data_path("graph5.net")));
    CHECK(net == fixtures::graph5());
    const std::vector<Rational> w{1, 3, 2, 2, 3};
    CHECK(std::vector<Rational>(net.out_degrees().begin(), net.out_degrees().end()) == w);
    CHECK(net.link_count() == 11);
}

TEST_CASE("parse errors carry line numbers") {
    auto line_of = [](const std::string& text) {
        try {
            (void)parse_network(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    CHECK(line_of("n 3\ne 1 2 1\ne 1 2 1\n") == 3);  // duplicate edge
    CHECK(line_of("n 3\ne 1 1 1\n") == 2);            // self-loop
    CHECK(line_of("n 3\ne 1 2 -1\n") == 2);           // negative weight
    CHECK(line_of("n 3\n# comment\ne 1 4 1\n") == 3); // out of range
    CHECK(line_of("e 1 2 1\n") == 1);                 // missing header
    CHECK(line_of("n 2\ne 1 2 x\n") == 2);
    CHECK_THROWS_AS((void)parse_network(""), ParseError);
}

TEST_CASE("zero weights are dropped and constructor rejects bad links") {
    const Network net(3, {{0, 1, 0}, {0, 2, Rational(1, 2)}});
    CHECK(net.link_count() == 1);
    CHECK(net.out_degree(0) == Rational(1, 2));
    CHECK_THROWS_AS(Network(2, {{0, 0, 1}}), ContractError);
    CHECK_THROWS_AS(Network(2, {{0, 5, 1}}), ContractError);
    CHECK_THROWS_AS(Network(2, {{0, 1, -1}}), ContractError);
    CHECK_THROWS_AS(Network(2, {{0, 1, 1}, {0, 1, 2}}), ContractError);
}

TEST_CASE("restricted degrees and split weights on the five-node graph") {
    const Network net = fixtures::graph5();
    const std::vector<Agent> s345{2, 3, 4};
    const std::vector<Agent> s24{1, 3};
    CHECK(restricted_out_degree(net, 1, s345) == Rational(3));
    CHECK(restricted_out_degree(net, 4, s24) == Rational(2));
    const Configuration x{-1, -1, -1, 1, 1};
    const auto w2 = split_weights(net, 1, x);
    CHECK(w2.minus == Rational(1));
    CHECK(w2.plus == Rational(2));
    const auto w5 = split_weights(net, 4, x);
    CHECK(w5.minus == Rational(2));
    CHECK(w5.plus == Rational(1));
    CHECK(neighbor_sum(net, 0, x) == Rational(-1));
}

TEST_CASE("weight invariants on random networks") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
        const Network net = oracle::random_network(rng, {1, 8, 0.5});
        const std::size_t n = net.size();
        const auto x = oracle::random_configuration(rng, n);
        std::vector<Agent> all(n);
        for (Agent i = 0; i < n; ++i) all[i] = i;
        // Split a random subset A and its complement.
        std::vector<Agent> a, b;
        for (Agent i = 0; i < n; ++i) (rng() & 1U ? a : b).push_back(i);
        for (Agent i = 0; i < n; ++i) {
            const auto sw = split_weights(net, i, x);
            CHECK(sw.minus + sw.plus == restricted_out_degree(net, i, all));
            CHECK(restricted_out_degree(net, i, a) + restricted_out_degree(net, i, b) == net.out_degree(i));
            CHECK(neighbor_sum(net, i, x) == sw.plus - sw.minus);
        }
        // parse . serialize is the identity on the canonical form.
        const std::string text = serialize_network(net);
        CHECK(parse_network(text) == net);
        CHECK(serialize_network(parse_network(text)) == text);
    }
}

TEST_CASE("configuration helpers") {
    const Configuration x{-1, 1, 1};
    CHECK(x.str() == "(-1,+1,+1)");
    CHECK(x.magnetization() == 1);
    CHECK(x.mask() == 0b110);
    CHECK(Configuration::from_mask(3, 0b110) == x);
    CHECK(Configuration::parse("-1, 1,+1") == x);
    CHECK_THROWS(Configuration::parse("1,0,1"));
    const Configuration y{1, -1, 1};
    CHECK(x.join(y) == Configuration{1, 1, 1});
    CHECK(x.meet(y) == Configuration{-1, -1, 1});
    CHECK(x.meet(y).leq(x));
    CHECK_FALSE(x.leq(y));
    CHECK(Configuration::consensus(4, Action::plus).is_consensus(Action::plus));
    CHECK(make_node_set(5, std::vector<Agent>{4, 1, 1}) == NodeSet{1, 4});
    CHECK_THROWS_AS(make_node_set(3, std::vector<Agent>{3}), ContractError);
}
