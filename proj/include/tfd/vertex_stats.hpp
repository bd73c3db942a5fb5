#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "tfd/digraph.hpp"

namespace tfd {

// Per-vertex statistics around a pivot v of a 3-free digraph.
//
//   A = out-neighbors of v, B = in-neighbors, C = everything else.
//   3-freeness forces A and B disjoint and forbids every A->B edge, so the
//   number of nonadjacent {a, b} pairs is g = |A||B| - #edges(B->A).
//   For u in C: k = #edges from A into u, l = #edges from u into B,
//   m = min(k, l); M sums m over C. t counts the edges with both ends in C.
struct PerU {
    Vertex u;
    long long k = 0;
    long long l = 0;
    long long m = 0;
};

struct VertexStats {
    Vertex v = -1;
    std::vector<Vertex> A, B, C; // sorted
    long long g = 0;
    long long t = 0;
    long long M = 0;
    std::vector<PerU> per_u; // aligned with C
};

// The (V1, V2, {v}) split. V1 = B plus the C-vertices leaning toward B
// (C_B), V2 = A plus the rest (C_A). rho counts nonadjacent unordered pairs
// whose endpoints land in different parts, tau the edges from V2 to V1
// (removing them kills every cycle not inside one side), and e the edges
// from C_A to C_B.
struct Partition {
    Vertex v = -1;
    std::vector<Vertex> V1, V2, C_A, C_B; // sorted
    long long rho = 0;
    long long tau = 0;
    long long e = 0;
};

struct PartitionMetrics {
    long long rho = 0;
    long long tau = 0;
    long long e = 0;
};

inline VertexStats local_stats(const Digraph& g, Vertex v) {
    if (v < 0 || v >= g.n()) throw validation_error("local_stats: pivot out of range");
    VertexStats st;
    st.v = v;
    st.A = g.out(v);
    st.B = g.in(v);

    for (Vertex u : st.A)
        if (std::binary_search(st.B.begin(), st.B.end(), u))
            throw not_three_free_error({FreenessWitness::Kind::digon, {v, u}});
    for (Vertex a : st.A)
        for (Vertex b : g.out(a))
            if (std::binary_search(st.B.begin(), st.B.end(), b))
                throw not_three_free_error({FreenessWitness::Kind::triangle, {v, a, b}});

    std::vector<char> in_a(static_cast<std::size_t>(g.n()), 0), in_b(in_a), in_c(in_a);
    for (Vertex a : st.A) in_a[static_cast<std::size_t>(a)] = 1;
    for (Vertex b : st.B) in_b[static_cast<std::size_t>(b)] = 1;
    for (Vertex u = 0; u < g.n(); ++u)
        if (u != v && !in_a[static_cast<std::size_t>(u)] && !in_b[static_cast<std::size_t>(u)]) {
            st.C.push_back(u);
            in_c[static_cast<std::size_t>(u)] = 1;
        }

    long long b_to_a = 0;
    for (Vertex b : st.B)
        for (Vertex w : g.out(b))
            if (in_a[static_cast<std::size_t>(w)]) ++b_to_a;
    st.g = static_cast<long long>(st.A.size()) * static_cast<long long>(st.B.size()) - b_to_a;

    st.per_u.reserve(st.C.size());
    for (Vertex u : st.C) {
        PerU p;
        p.u = u;
        for (Vertex w : g.in(u))
            if (in_a[static_cast<std::size_t>(w)]) ++p.k;
        for (Vertex w : g.out(u)) {
            if (in_b[static_cast<std::size_t>(w)]) ++p.l;
            if (in_c[static_cast<std::size_t>(w)]) ++st.t;
        }
        p.m = std::min(p.k, p.l);
        st.M += p.m;
        st.per_u.push_back(p);
    }
    return st;
}

// rho, tau, e for an arbitrary (V1, V2, {v}) partition of V. C_A and C_B are
// read off as the intersections of C(v) with V2 and V1. Rejects anything
// that is not a partition.
inline PartitionMetrics partition_metrics(const Digraph& g, Vertex v,
                                          std::span<const Vertex> v1,
                                          std::span<const Vertex> v2) {
    const int n = g.n();
    if (v < 0 || v >= n) throw validation_error("partition_metrics: pivot out of range");
    // part id: 0 = {v}, 1 = V1, 2 = V2
    std::vector<int> part(static_cast<std::size_t>(n), -1);
    part[static_cast<std::size_t>(v)] = 0;
    auto assign = [&](std::span<const Vertex> side, int id) {
        for (Vertex u : side) {
            if (u < 0 || u >= n) throw validation_error("partition_metrics: vertex out of range");
            if (part[static_cast<std::size_t>(u)] != -1)
                throw validation_error("partition_metrics: vertex " + std::to_string(u) +
                                       " assigned twice");
            part[static_cast<std::size_t>(u)] = id;
        }
    };
    assign(v1, 1);
    assign(v2, 2);
    for (int id : part)
        if (id == -1) throw validation_error("partition_metrics: parts do not cover V");

    PartitionMetrics m;
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b)
            if (part[static_cast<std::size_t>(a)] != part[static_cast<std::size_t>(b)] &&
                !g.adjacent(a, b))
                ++m.rho;

    std::vector<char> in_c(static_cast<std::size_t>(n), 1);
    in_c[static_cast<std::size_t>(v)] = 0;
    for (Vertex a : g.out(v)) in_c[static_cast<std::size_t>(a)] = 0;
    for (Vertex b : g.in(v)) in_c[static_cast<std::size_t>(b)] = 0;

    for (const auto& [x, y] : g.edges()) {
        if (part[static_cast<std::size_t>(x)] == 2 && part[static_cast<std::size_t>(y)] == 1) {
            ++m.tau;
            if (in_c[static_cast<std::size_t>(x)] && in_c[static_cast<std::size_t>(y)]) ++m.e;
        }
    }
    return m;
}

// The split sending u in C to V1 exactly when l(u) > k(u); ties go to V2.
inline Partition canonical_partition(const Digraph& g, Vertex v) {
    const VertexStats st = local_stats(g, v);
    Partition p;
    p.v = v;
    p.V1 = st.B;
    p.V2 = st.A;
    for (const PerU& pu : st.per_u) {
        if (pu.l > pu.k) {
            p.C_B.push_back(pu.u);
            p.V1.push_back(pu.u);
        } else {
            p.C_A.push_back(pu.u);
            p.V2.push_back(pu.u);
        }
    }
    std::sort(p.V1.begin(), p.V1.end());
    std::sort(p.V2.begin(), p.V2.end());
    const PartitionMetrics m = partition_metrics(g, v, p.V1, p.V2);
    p.rho = m.rho;
    p.tau = m.tau;
    p.e = m.e;
    return p;
}

// Right-hand side of the local sufficiency test: a pivot with
//   g >= c^2 (1+mu) ( (1+mu + sqrt((1+mu)^2 + 4(1+mu) e / c^2)) / 2 + e / c^2 )
// certifies rho >= (1+mu) tau for its canonical partition. At e = c^2/4 this
// coincides with the fixed-radical variant
//   c^2 (1+mu) ( (1+mu + sqrt((1+mu)^2 + (1+mu))) / 2 + 1/4 ).
inline double sufficiency_threshold(long long c, long long e, double mu) {
    if (c < 1) throw validation_error("sufficiency_threshold: |C| must be >= 1");
    if (e < 0) throw validation_error("sufficiency_threshold: e must be >= 0");
    if (mu < 0) throw validation_error("sufficiency_threshold: mu must be >= 0");
    const double c2 = static_cast<double>(c) * static_cast<double>(c);
    const double op = 1.0 + mu;
    const double rad = std::sqrt(op * op + 4.0 * op * static_cast<double>(e) / c2);
    return c2 * op * ((op + rad) / 2.0 + static_cast<double>(e) / c2);
}

} // namespace tfd
