#include "subset_scan.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>
#include <numeric>
#include <thread>

namespace ltd::detail {
namespace {

constexpr std::int64_t kMagnitudeCap = std::int64_t{1} << 60;

struct ScaledScan {
    std::size_t len = 0;
    std::vector<std::int64_t> cols;  // universe.size() rows of len entries, each 2 * W[., u] * L
    std::vector<std::int64_t> lo;
    std::vector<std::int64_t> hi;
};

std::optional<std::int64_t> lcm_checked(std::int64_t a, std::int64_t b) {
    const __int128 l = static_cast<__int128>(a) / std::gcd(a, b) * b;
    if (l > kMagnitudeCap) return std::nullopt;
    return static_cast<std::int64_t>(l);
}

std::optional<std::int64_t> scale_exact(const Rational& v, std::int64_t scale) {
    const __int128 s = static_cast<__int128>(v.num()) * (scale / v.den());
    if (s > kMagnitudeCap || s < -kMagnitudeCap) return std::nullopt;
    return static_cast<std::int64_t>(s);
}

std::optional<ScaledScan> scale(const ScanRequest& req) {
    const Network& net = *req.net;
    const std::size_t n = net.size();
    std::int64_t scale = 1;
    auto absorb = [&](const Rational& v) {
        auto l = lcm_checked(scale, v.den());
        if (!l) return false;
        scale = *l;
        return true;
    };
    for (Agent i = 0; i < n; ++i)
        for (const auto& e : net.out_edges(i))
            if (!absorb(e.weight)) return std::nullopt;
    for (const auto* side : {&req.rule.lo, &req.rule.hi})
        for (const auto& v : *side)
            if (v && !absorb(*v)) return std::nullopt;

    ScaledScan s;
    s.len = kernels::padded(n);
    s.lo.assign(s.len, -kernels::kNeverEscapes);
    s.hi.assign(s.len, kernels::kNeverEscapes);
    for (Agent i = 0; i < n; ++i) {
        auto two_w = scale_exact(net.out_degree(i) + net.out_degree(i), scale);
        if (!two_w) return std::nullopt;
        if (req.rule.lo[i]) {
            auto v = scale_exact(*req.rule.lo[i], scale);
            if (!v) return std::nullopt;
            s.lo[i] = *v;
        }
        if (req.rule.hi[i]) {
            auto v = scale_exact(*req.rule.hi[i], scale);
            if (!v) return std::nullopt;
            s.hi[i] = *v;
        }
    }
    s.cols.assign(req.universe.size() * s.len, 0);
    for (std::size_t k = 0; k < req.universe.size(); ++k) {
        const Agent u = req.universe[k];
        for (Agent i : net.in_neighbors(u)) {
            const Rational w = net.weight(i, u);
            s.cols[k * s.len + i] = *scale_exact(w + w, scale);
        }
    }
    return s;
}

bool skipped(const ScanRequest& req, std::uint64_t mask, std::uint64_t full) {
    return (req.skip_empty && mask == 0) || (req.skip_full && mask == full);
}

std::uint64_t full_mask(std::size_t k) { return k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1; }

// Walks Gray indices [g0, g1); calls on_blocked(g) for subsets without escapers.
// on_blocked returns false to stop the walk.
template <typename OnBlocked, typename Stop>
void walk_scaled(const ScanRequest& req, const ScaledScan& s, const kernels::ScanKernel& kernel, std::uint64_t g0,
                 std::uint64_t g1, OnBlocked&& on_blocked, Stop&& stop) {
    const std::uint64_t full = full_mask(req.universe.size());
    std::vector<std::int64_t> p(s.len, 0);
    std::vector<std::int64_t> member(s.len, 0);
    const std::uint64_t start = gray(g0);
    for (std::size_t k = 0; k < req.universe.size(); ++k) {
        if ((start >> k) & 1U) {
            kernel.update(p.data(), s.cols.data() + k * s.len, s.len, true);
            member[req.universe[k]] = -1;
        }
    }
    for (std::uint64_t g = g0; g < g1; ++g) {
        if (g != g0) {
            const auto k = static_cast<std::size_t>(std::countr_zero(g));
            const bool now_in = (gray(g) >> k) & 1U;
            kernel.update(p.data(), s.cols.data() + k * s.len, s.len, now_in);
            member[req.universe[k]] = now_in ? -1 : 0;
            if ((g & 0xFFF) == 0 && stop(g)) return;
        }
        if (skipped(req, gray(g), full)) continue;
        if (!kernel.any_escape(p.data(), member.data(), s.lo.data(), s.hi.data(), s.len)) {
            if (!on_blocked(g)) return;
        }
    }
}

template <typename OnBlocked>
void walk_exact(const ScanRequest& req, OnBlocked&& on_blocked) {
    const Network& net = *req.net;
    const std::size_t n = net.size();
    const std::size_t k_count = req.universe.size();
    const std::uint64_t full = full_mask(k_count);
    const std::uint64_t end = k_count == 64 ? 0 : std::uint64_t{1} << k_count;
    std::vector<Rational> p(n);
    std::vector<bool> in_set(n, false);
    auto blocked = [&] {
        for (Agent i = 0; i < n; ++i) {
            const auto& bound = in_set[i] ? req.rule.lo[i] : req.rule.hi[i];
            if (!bound) continue;
            if (in_set[i] ? p[i] < *bound : p[i] > *bound) return false;
        }
        return true;
    };
    for (std::uint64_t g = 0; g < end; ++g) {
        if (g != 0) {
            const auto k = static_cast<std::size_t>(std::countr_zero(g));
            const Agent u = req.universe[k];
            const bool now_in = (gray(g) >> k) & 1U;
            in_set[u] = now_in;
            for (Agent i : net.in_neighbors(u)) {
                const Rational w = net.weight(i, u);
                if (now_in)
                    p[i] += w + w;
                else
                    p[i] -= w + w;
            }
        }
        if (skipped(req, gray(g), full)) continue;
        if (blocked() && !on_blocked(g)) return;
    }
}

void check_request(const ScanRequest& req) {
    if (req.net == nullptr) throw ContractError("scan without network");
    if (req.universe.size() >= 63) throw ContractError("subset scan universe too large");
    if (req.rule.lo.size() != req.net->size() || req.rule.hi.size() != req.net->size())
        throw ContractError("escape rule dimension mismatch");
}

unsigned worker_count(const ScanRequest& req) {
    const std::uint64_t total = std::uint64_t{1} << req.universe.size();
    if (total < (std::uint64_t{1} << 14)) return 1;
    unsigned t = req.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : req.threads;
    return static_cast<unsigned>(std::min<std::uint64_t>(t, total >> 12));
}

}  // namespace

std::optional<std::uint64_t> first_blocked_with(const ScanRequest& req, const kernels::ScanKernel* kernel) {
    check_request(req);
    const std::uint64_t total = std::uint64_t{1} << req.universe.size();
    std::optional<ScaledScan> scaled;
    if (kernel != nullptr) scaled = scale(req);
    if (!scaled) {
        std::optional<std::uint64_t> hit;
        walk_exact(req, [&](std::uint64_t g) {
            hit = g;
            return false;
        });
        return hit;
    }

    const unsigned workers = worker_count(req);
    constexpr std::uint64_t none = std::numeric_limits<std::uint64_t>::max();
    std::atomic<std::uint64_t> best{none};
    auto run_chunk = [&](std::uint64_t g0, std::uint64_t g1) {
        walk_scaled(
            req, *scaled, *kernel, g0, g1,
            [&](std::uint64_t g) {
                std::uint64_t cur = best.load();
                while (g < cur && !best.compare_exchange_weak(cur, g)) {
                }
                return false;
            },
            [&](std::uint64_t g) { return g > best.load(std::memory_order_relaxed); });
    };
    if (workers <= 1) {
        run_chunk(0, total);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = total / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t g0 = w * chunk;
            const std::uint64_t g1 = w + 1 == workers ? total : g0 + chunk;
            pool.emplace_back(run_chunk, g0, g1);
        }
        for (auto& t : pool) t.join();
    }
    const std::uint64_t found = best.load();
    if (found == none) return std::nullopt;
    return found;
}

std::vector<std::uint64_t> all_blocked_with(const ScanRequest& req, const kernels::ScanKernel* kernel) {
    check_request(req);
    const std::uint64_t total = std::uint64_t{1} << req.universe.size();
    std::optional<ScaledScan> scaled;
    if (kernel != nullptr) scaled = scale(req);
    std::vector<std::uint64_t> out;
    if (!scaled) {
        walk_exact(req, [&](std::uint64_t g) {
            out.push_back(gray(g));
            return true;
        });
        return out;
    }
    const unsigned workers = worker_count(req);
    std::vector<std::vector<std::uint64_t>> parts(workers);
    auto run_chunk = [&](unsigned w, std::uint64_t g0, std::uint64_t g1) {
        walk_scaled(
            req, *scaled, *kernel, g0, g1,
            [&](std::uint64_t g) {
                parts[w].push_back(gray(g));
                return true;
            },
            [](std::uint64_t) { return false; });
    };
    if (workers <= 1) {
        run_chunk(0, 0, total);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = total / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t g0 = w * chunk;
            const std::uint64_t g1 = w + 1 == workers ? total : g0 + chunk;
            pool.emplace_back(run_chunk, w, g0, g1);
        }
        for (auto& t : pool) t.join();
    }
    for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
    return out;
}

std::optional<std::uint64_t> first_blocked(const ScanRequest& req) {
    return first_blocked_with(req, &kernels::active_kernel());
}

std::vector<std::uint64_t> all_blocked(const ScanRequest& req) { return all_blocked_with(req, &kernels::active_kernel()); }

NodeSet subset_of(const std::vector<Agent>& universe, std::uint64_t mask) {
    NodeSet out;
    for (std::size_t k = 0; k < universe.size(); ++k)
        if ((mask >> k) & 1U) out.push_back(universe[k]);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace ltd::detail
