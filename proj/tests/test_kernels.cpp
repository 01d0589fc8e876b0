#include <doctest.h>

#include <random>

#include "kernels/subset_scan.hpp"
#include "ltd/kernels.hpp"
#include "oracle.hpp"

using namespace ltd;
namespace k = ltd::kernels;

namespace {

detail::ScanRequest random_request(std::mt19937_64& rng, const Network& net) {
    const std::size_t n = net.size();
    detail::ScanRequest req;
    req.net = &net;
    for (Agent i = 0; i < n; ++i)
        if (rng() % 4 != 0) req.universe.push_back(i);
    if (req.universe.empty()) req.universe.push_back(0);
    std::uniform_int_distribution<std::int64_t> num(-24, 24);
    std::uniform_int_distribution<std::int64_t> den(1, 6);
    req.rule.lo.resize(n);
    req.rule.hi.resize(n);
    for (Agent i = 0; i < n; ++i) {
        if (rng() % 5 != 0) req.rule.lo[i] = Rational(num(rng), den(rng));
        if (rng() % 5 != 0) req.rule.hi[i] = Rational(num(rng), den(rng));
    }
    req.skip_empty = (rng() & 1U) != 0;
    req.skip_full = (rng() & 2U) != 0;
    return req;
}

}  // namespace

TEST_CASE("vector kernels agree with the scalar reference lane by lane") {
    const k::ScanKernel* avx2 = k::avx2_kernel();
    if (avx2 == nullptr) {
        MESSAGE("AVX2 kernel unavailable on this machine; only the scalar kernel is exercised");
        return;
    }
    const k::ScanKernel& scalar = k::scalar_kernel();
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::int64_t> val(-(std::int64_t{1} << 40), std::int64_t{1} << 40);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t len = k::padded(1 + rng() % 37);
        std::vector<std::int64_t> p(len), col(len), member(len), lo(len), hi(len);
        for (std::size_t i = 0; i < len; ++i) {
            p[i] = val(rng);
            col[i] = val(rng);
            member[i] = (rng() & 1U) != 0 ? -1 : 0;
            lo[i] = rng() % 3 == 0 ? p[i] : val(rng);  // exact ties included
            hi[i] = rng() % 3 == 0 ? p[i] : val(rng);
        }
        auto p_scalar = p;
        auto p_vec = p;
        const bool add = (rng() & 1U) != 0;
        scalar.update(p_scalar.data(), col.data(), len, add);
        avx2->update(p_vec.data(), col.data(), len, add);
        CHECK(p_scalar == p_vec);
        CHECK(scalar.any_escape(p.data(), member.data(), lo.data(), hi.data(), len) ==
              avx2->any_escape(p.data(), member.data(), lo.data(), hi.data(), len));
    }
}

TEST_CASE("kernel dispatch") {
    CHECK(k::scalar_kernel().name == "scalar");
    const auto& active = k::active_kernel();
    CHECK((active.name == "scalar" || active.name == "avx2"));
    CHECK(k::padded(5) == 8);
    CHECK(k::padded(8) == 8);
}

TEST_CASE("subset scans agree across scalar, vector and exact back ends") {
    std::mt19937_64 rng(2);
    const k::ScanKernel* avx2 = k::avx2_kernel();
    for (int trial = 0; trial < 300; ++trial) {
        const Network net = oracle::random_network(rng, {1, 11, 0.5});
        const auto req = random_request(rng, net);
        const auto exact_all = detail::all_blocked_with(req, nullptr);
        const auto exact_first = detail::first_blocked_with(req, nullptr);
        CHECK(detail::all_blocked_with(req, &k::scalar_kernel()) == exact_all);
        CHECK(detail::first_blocked_with(req, &k::scalar_kernel()) == exact_first);
        if (avx2 != nullptr) {
            CHECK(detail::all_blocked_with(req, avx2) == exact_all);
            CHECK(detail::first_blocked_with(req, avx2) == exact_first);
        }
        CHECK(detail::all_blocked(req) == exact_all);
        if (exact_first) {
            REQUIRE_FALSE(exact_all.empty());
            CHECK(detail::gray(*exact_first) == exact_all.front());
        } else {
            CHECK(exact_all.empty());
        }
    }
}

TEST_CASE("parallel scans report the same lowest index as a single worker") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 6; ++trial) {
        const Network net = oracle::random_network(rng, {16, 16, 0.3});
        auto req = random_request(rng, net);
        req.universe.clear();
        for (Agent i = 0; i < 16; ++i) req.universe.push_back(i);
        req.threads = 1;
        const auto single = detail::first_blocked(req);
        const auto single_all = detail::all_blocked(req);
        req.threads = 4;
        CHECK(detail::first_blocked(req) == single);
        CHECK(detail::all_blocked(req) == single_all);
    }
}

TEST_CASE("huge denominators fall back to exact arithmetic") {
    // Pairwise coprime denominators push the common scale past the integer cap.
    const std::int64_t primes[] = {1000003, 1000033, 1000037, 1000039, 1000081};
    std::vector<Network::Link> links;
    for (Agent i = 0; i < 5; ++i) links.push_back({i, (i + 1) % 5, Rational(1, primes[i])});
    const Network net(5, links);
    detail::ScanRequest req;
    req.net = &net;
    req.universe = {0, 1, 2, 3, 4};
    req.rule.lo.assign(5, Rational(0));
    req.rule.hi.assign(5, Rational(0));
    req.skip_empty = true;
    req.skip_full = true;
    const auto got = detail::all_blocked(req);
    CHECK(got == detail::all_blocked_with(req, nullptr));
    // Brute force: S blocks when members keep p_i >= 0 (always) and outsiders p_i <= 0.
    std::vector<std::uint64_t> expected;
    for (std::uint64_t g = 0; g < 32; ++g) {
        const std::uint64_t m = detail::gray(g);
        if (m == 0 || m == 31) continue;
        bool blocked = true;
        for (Agent i = 0; i < 5; ++i) {
            const bool head_in = ((m >> ((i + 1) % 5)) & 1U) != 0;
            if (!((m >> i) & 1U) && head_in) blocked = false;  // outsider with positive p escapes
        }
        if (blocked) expected.push_back(m);
    }
    CHECK(got == expected);
}
