#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tfd/digraph.hpp"

namespace tfd {

// All randomness comes from std::mt19937_64, whose output sequence is fixed
// by the standard, through the explicit mappings below. std::*_distribution
// adapters are avoided because their mappings vary across standard
// libraries; with these helpers the same (spec, seed) yields the same graph
// on every platform.
namespace rng {

using Engine = std::mt19937_64;

// Unbiased integer in [0, bound) by rejection from the top of the range.
inline std::uint64_t bounded(Engine& eng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = eng();
    } while (x >= limit);
    return x % bound;
}

// Uniform double in [0, 1) with 53 random mantissa bits.
inline double unit_real(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline std::vector<Vertex> permutation(Engine& eng, int n) {
    std::vector<Vertex> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    for (std::size_t i = p.size(); i > 1; --i)
        std::swap(p[i - 1], p[bounded(eng, i)]);
    return p;
}

// splitmix64 step, used to derive independent per-trial seeds from a base
// seed so parallel trials stay reproducible in any execution order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace rng

enum class Family { circulant, cycle_blowup, random_repaired, random_dag };

inline std::string to_string(Family f) {
    switch (f) {
        case Family::circulant: return "circulant";
        case Family::cycle_blowup: return "cycle_blowup";
        case Family::random_repaired: return "random_repaired";
        case Family::random_dag: return "random_dag";
    }
    return "?";
}

struct FamilySpec {
    Family family = Family::random_dag;
    int n = 0;
    std::vector<int> steps;  // circulant
    std::vector<int> sizes;  // cycle_blowup
    double p = 0;            // random_repaired, random_dag
    std::uint64_t seed = 0;  // random_repaired, random_dag
};

// Largest step usable by a 3-free circulant on n vertices: with every step
// at most ceil(n/3) - 1, any one, two or three steps sum to something
// strictly between 0 and n, so no short cycle closes.
inline int circulant_step_bound(int n) { return (n + 2) / 3 - 1; }

// Edges i -> (i + j) mod n for every vertex i and step j.
inline Digraph gen_circulant(int n, const std::vector<int>& steps) {
    if (n < 1) throw validation_error("gen_circulant: n must be >= 1");
    if (steps.empty()) throw validation_error("gen_circulant: step set must be nonempty");
    const int bound = circulant_step_bound(n);
    std::vector<int> j(steps);
    std::sort(j.begin(), j.end());
    j.erase(std::unique(j.begin(), j.end()), j.end());
    for (int s : j)
        if (s < 1 || s > bound)
            throw validation_error("gen_circulant: step " + std::to_string(s) +
                                   " outside 1..ceil(n/3)-1 = 1.." + std::to_string(bound));
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) * j.size());
    for (Vertex i = 0; i < n; ++i)
        for (int s : j) edges.emplace_back(i, (i + s) % n);
    return Digraph::build(n, std::move(edges));
}

// Complete arcs from each part to the next around a directed k-cycle,
// k >= 4, so every directed cycle wraps the whole ring and has length >= 4.
inline Digraph gen_cycle_blowup(const std::vector<int>& sizes) {
    const int k = static_cast<int>(sizes.size());
    if (k < 4)
        throw validation_error("gen_cycle_blowup: need >= 4 parts, got " + std::to_string(k));
    for (int s : sizes)
        if (s < 1) throw validation_error("gen_cycle_blowup: every part size must be >= 1");
    std::vector<int> offset(sizes.size() + 1, 0);
    for (std::size_t i = 0; i < sizes.size(); ++i) offset[i + 1] = offset[i] + sizes[i];
    const int n = offset.back();
    std::vector<Edge> edges;
    for (int part = 0; part < k; ++part) {
        const int next = (part + 1) % k;
        for (int u = offset[static_cast<std::size_t>(part)]; u < offset[static_cast<std::size_t>(part) + 1]; ++u)
            for (int v = offset[static_cast<std::size_t>(next)]; v < offset[static_cast<std::size_t>(next) + 1]; ++v)
                edges.emplace_back(u, v);
    }
    return Digraph::build(n, std::move(edges));
}

// Each unordered pair becomes adjacent with probability p under a uniformly
// random orientation (so digons never appear); then while any directed
// triangle remains, one uniformly random edge of the first triangle in scan
// order is deleted. Every deletion shrinks the edge set, so the repair
// terminates.
inline Digraph gen_random_repaired(int n, double p, std::uint64_t seed) {
    if (n < 0) throw validation_error("gen_random_repaired: n must be >= 0");
    if (p < 0 || p > 1) throw validation_error("gen_random_repaired: p must lie in [0, 1]");
    rng::Engine eng(seed);
    std::vector<std::vector<char>> adj(static_cast<std::size_t>(n),
                                       std::vector<char>(static_cast<std::size_t>(n), 0));
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (rng::unit_real(eng) < p) {
                if (eng() & 1)
                    adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
                else
                    adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
            }

    auto first_triangle = [&]() -> std::vector<Edge> {
        for (Vertex a = 0; a < n; ++a)
            for (Vertex b = 0; b < n; ++b) {
                if (!adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) continue;
                for (Vertex c = 0; c < n; ++c)
                    if (adj[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)] &&
                        adj[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)])
                        return {{a, b}, {b, c}, {c, a}};
            }
        return {};
    };
    for (auto tri = first_triangle(); !tri.empty(); tri = first_triangle()) {
        const Edge victim = tri[rng::bounded(eng, 3)];
        adj[static_cast<std::size_t>(victim.first)][static_cast<std::size_t>(victim.second)] = 0;
    }

    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = 0; v < n; ++v)
            if (adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) edges.emplace_back(u, v);
    return Digraph::build(n, std::move(edges));
}

// A uniformly random permutation fixes the topological order; each forward
// pair becomes an edge with probability p. Acyclic by construction.
inline Digraph gen_random_dag(int n, double p, std::uint64_t seed) {
    if (n < 0) throw validation_error("gen_random_dag: n must be >= 0");
    if (p < 0 || p > 1) throw validation_error("gen_random_dag: p must lie in [0, 1]");
    rng::Engine eng(seed);
    const std::vector<Vertex> order = rng::permutation(eng, n);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng::unit_real(eng) < p)
                edges.emplace_back(order[static_cast<std::size_t>(i)],
                                   order[static_cast<std::size_t>(j)]);
    return Digraph::build(n, std::move(edges));
}

inline Digraph generate(const FamilySpec& spec) {
    switch (spec.family) {
        case Family::circulant: return gen_circulant(spec.n, spec.steps);
        case Family::cycle_blowup: return gen_cycle_blowup(spec.sizes);
        case Family::random_repaired: return gen_random_repaired(spec.n, spec.p, spec.seed);
        case Family::random_dag: return gen_random_dag(spec.n, spec.p, spec.seed);
    }
    throw validation_error("generate: unknown family");
}

// Canonical text form, e.g. "circulant:n=9:steps=1,2" or
// "random_repaired:n=12:p=0.4:seed=7".
inline std::string to_string(const FamilySpec& spec) {
    std::ostringstream os;
    os << to_string(spec.family);
    auto list = [&os](const std::vector<int>& xs) {
        for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
    };
    switch (spec.family) {
        case Family::circulant:
            os << ":n=" << spec.n << ":steps=";
            list(spec.steps);
            break;
        case Family::cycle_blowup:
            os << ":sizes=";
            list(spec.sizes);
            break;
        case Family::random_repaired:
        case Family::random_dag:
            os << ":n=" << spec.n << ":p=" << spec.p << ":seed=" << spec.seed;
            break;
    }
    return os.str();
}

} // namespace tfd
