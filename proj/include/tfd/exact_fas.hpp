#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "tfd/digraph.hpp"

namespace tfd {

// Minimum feedback arc set, phrased through linear orders: the backward
// edges of any vertex order decycle the graph, and an acyclic graph has an
// order with no backward edges, so beta equals the minimum backward-edge
// count over all orders.
struct ExactResult {
    long long beta = 0;
    std::vector<Vertex> order; // optimal linear order
    std::vector<Edge> x_opt;   // the backward edges of `order`, sorted
};

namespace detail {

inline long long backward_edges(const Digraph& g, const std::vector<Vertex>& order,
                                std::vector<Edge>* out = nullptr) {
    std::vector<int> pos(static_cast<std::size_t>(g.n()), 0);
    for (std::size_t i = 0; i < order.size(); ++i)
        pos[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    long long count = 0;
    for (const auto& e : g.edges())
        if (pos[static_cast<std::size_t>(e.first)] > pos[static_cast<std::size_t>(e.second)]) {
            ++count;
            if (out) out->push_back(e);
        }
    return count;
}

} // namespace detail

// Enumerates all n! orders; the first optimum in lexicographic order wins,
// so ties break toward the lexicographically smallest optimal order.
inline ExactResult beta_bruteforce(const Digraph& g) {
    if (g.n() > 10)
        throw validation_error("beta_bruteforce: n = " + std::to_string(g.n()) +
                               " exceeds the factorial-enumeration cap of 10");
    ExactResult res;
    std::vector<Vertex> perm(static_cast<std::size_t>(g.n()));
    std::iota(perm.begin(), perm.end(), 0);
    res.order = perm;
    res.beta = detail::backward_edges(g, perm);
    while (std::next_permutation(perm.begin(), perm.end())) {
        const long long b = detail::backward_edges(g, perm);
        if (b < res.beta) {
            res.beta = b;
            res.order = perm;
        }
    }
    res.x_opt.clear();
    detail::backward_edges(g, res.order, &res.x_opt);
    std::sort(res.x_opt.begin(), res.x_opt.end());
    return res;
}

// Held-Karp style subset DP: f(S) = min over v in S of f(S \ {v}) plus the
// out-edges of v into S \ {v} (v placed last within the prefix S, so exactly
// those edges point backward). The table stores one integer per subset; the
// order is recovered by re-walking it instead of storing parents.
inline ExactResult beta_subset_dp(const Digraph& g) {
    const int n = g.n();
    if (n > 22)
        throw validation_error("beta_subset_dp: n = " + std::to_string(n) +
                               " exceeds the subset-table cap of 22");
    ExactResult res;
    if (n == 0) return res;

    std::vector<std::uint32_t> out_mask(static_cast<std::size_t>(n), 0);
    for (const auto& [u, v] : g.edges())
        out_mask[static_cast<std::size_t>(u)] |= std::uint32_t{1} << v;

    const std::uint32_t full = (n == 32) ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1;
    std::vector<std::int32_t> f(static_cast<std::size_t>(full) + 1,
                                std::numeric_limits<std::int32_t>::max());
    f[0] = 0;
    for (std::uint32_t s = 1; s <= full; ++s) {
        std::int32_t best = std::numeric_limits<std::int32_t>::max();
        for (std::uint32_t bits = s; bits != 0; bits &= bits - 1) {
            const int v = std::countr_zero(bits);
            const std::uint32_t rest = s & ~(std::uint32_t{1} << v);
            const std::int32_t cand =
                f[rest] + std::popcount(out_mask[static_cast<std::size_t>(v)] & rest);
            best = std::min(best, cand);
        }
        f[s] = best;
    }
    res.beta = f[full];

    // Walk back from the full set; the smallest vertex attaining the optimum
    // is taken at each step, which fixes the recovered order.
    res.order.assign(static_cast<std::size_t>(n), -1);
    std::uint32_t s = full;
    for (int slot = n - 1; slot >= 0; --slot) {
        for (std::uint32_t bits = s; bits != 0; bits &= bits - 1) {
            const int v = std::countr_zero(bits);
            const std::uint32_t rest = s & ~(std::uint32_t{1} << v);
            if (f[s] == f[rest] + std::popcount(out_mask[static_cast<std::size_t>(v)] & rest)) {
                res.order[static_cast<std::size_t>(slot)] = v;
                s = rest;
                break;
            }
        }
    }
    detail::backward_edges(g, res.order, &res.x_opt);
    std::sort(res.x_opt.begin(), res.x_opt.end());
    return res;
}

} // namespace tfd
