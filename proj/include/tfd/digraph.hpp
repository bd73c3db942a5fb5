#pragma once

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tfd/errors.hpp"

namespace tfd {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

// A digon is a directed 2-cycle u->w->u; a triangle is a directed 3-cycle
// a->b->c->a. Either one certifies that a digraph is not 3-free.
struct FreenessWitness {
    enum class Kind { digon, triangle };

    Kind kind;
    std::vector<Vertex> vertices; // 2 vertices for a digon, 3 for a triangle
};

inline std::string to_string(const FreenessWitness& w) {
    std::string s = w.kind == FreenessWitness::Kind::digon ? "digon (" : "triangle (";
    for (std::size_t i = 0; i < w.vertices.size(); ++i) {
        if (i > 0) s += ", ";
        s += std::to_string(w.vertices[i]);
    }
    return s + ")";
}

class not_three_free_error : public validation_error {
  public:
    explicit not_three_free_error(FreenessWitness w)
        : validation_error("digraph is not 3-free: contains " + to_string(w)),
          witness_(std::move(w)) {}

    const FreenessWitness& witness() const { return witness_; }

  private:
    FreenessWitness witness_;
};

// Simple finite digraph on vertices 0..n-1. Immutable after construction:
// all mutation is expressed by building a new graph. Edges are kept as a
// sorted set plus out- and in-adjacency lists (both sorted), so neighbor
// queries in either direction are cheap.
class Digraph {
  public:
    struct BuildReport {
        std::size_t duplicates_collapsed = 0;
    };

    Digraph() = default;

    Digraph(int n, std::span<const Edge> edges) { *this = build(n, {edges.begin(), edges.end()}); }

    Digraph(int n, std::initializer_list<Edge> edges)
        : Digraph(n, std::span<const Edge>(edges.begin(), edges.size())) {}

    // Validates and canonicalizes an edge list. Duplicate ordered pairs are
    // collapsed (count reported); self-loops and out-of-range endpoints are
    // rejected.
    static Digraph build(int n, std::vector<Edge> edges, BuildReport* report = nullptr) {
        if (n < 0) throw validation_error("vertex count must be non-negative");
        for (const auto& [u, v] : edges) {
            if (u == v)
                throw validation_error("self-loop (" + std::to_string(u) + ", " +
                                       std::to_string(v) + ") is not allowed");
            if (u < 0 || v < 0 || u >= n || v >= n)
                throw validation_error("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                       ") has an endpoint outside 0.." + std::to_string(n - 1));
        }
        std::sort(edges.begin(), edges.end());
        const auto last = std::unique(edges.begin(), edges.end());
        if (report) report->duplicates_collapsed = std::distance(last, edges.end());
        edges.erase(last, edges.end());

        Digraph g;
        g.n_ = n;
        g.edges_ = std::move(edges);
        g.out_.assign(static_cast<std::size_t>(n), {});
        g.in_.assign(static_cast<std::size_t>(n), {});
        for (const auto& [u, v] : g.edges_) {
            g.out_[static_cast<std::size_t>(u)].push_back(v);
            g.in_[static_cast<std::size_t>(v)].push_back(u);
        }
        for (auto& a : g.in_) std::sort(a.begin(), a.end());
        // out_ lists inherit sortedness from the sorted edge set
        return g;
    }

    int n() const { return n_; }
    long long m() const { return static_cast<long long>(edges_.size()); }

    const std::vector<Edge>& edges() const { return edges_; }

    const std::vector<Vertex>& out(Vertex u) const { return out_[check(u)]; }
    const std::vector<Vertex>& in(Vertex u) const { return in_[check(u)]; }

    bool has_edge(Vertex u, Vertex v) const {
        if (u < 0 || v < 0 || u >= n_ || v >= n_) return false;
        const auto& a = out_[static_cast<std::size_t>(u)];
        return std::binary_search(a.begin(), a.end(), v);
    }

    // Adjacent in the underlying undirected sense: an edge in either direction.
    bool adjacent(Vertex u, Vertex v) const { return has_edge(u, v) || has_edge(v, u); }

    bool operator==(const Digraph& other) const {
        return n_ == other.n_ && edges_ == other.edges_;
    }

  private:
    std::size_t check(Vertex u) const {
        if (u < 0 || u >= n_)
            throw validation_error("vertex " + std::to_string(u) + " outside 0.." +
                                   std::to_string(n_ - 1));
        return static_cast<std::size_t>(u);
    }

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Vertex>> out_;
    std::vector<std::vector<Vertex>> in_;
};

// Number of unordered pairs of nonadjacent vertices.
inline long long gamma(const Digraph& g) {
    const long long n = g.n();
    long long adjacent_pairs = 0;
    for (const auto& [u, v] : g.edges()) {
        // count each adjacent unordered pair once: a digon {u,v} is counted
        // only at its (min,max) edge
        if (u < v || !g.has_edge(v, u)) ++adjacent_pairs;
    }
    return n * (n - 1) / 2 - adjacent_pairs;
}

struct AcyclicityResult {
    bool acyclic = false;
    std::vector<Vertex> order; // when acyclic: every edge points forward
    std::vector<Vertex> cycle; // when not: a directed cycle, rotated to start at its min vertex
};

// Kahn peeling with a smallest-vertex-first tie break, so the returned
// topological order is canonical. When peeling stalls, the residual graph has
// min out- and in-degree >= 1 inside itself; walking smallest out-neighbors
// from its smallest vertex must close a cycle.
inline AcyclicityResult check_acyclic(const Digraph& g) {
    const int n = g.n();
    std::vector<int> indeg(static_cast<std::size_t>(n), 0);
    for (const auto& e : g.edges()) indeg[static_cast<std::size_t>(e.second)]++;

    AcyclicityResult res;
    std::vector<Vertex> ready;
    for (Vertex v = n - 1; v >= 0; --v)
        if (indeg[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
    // `ready` is kept as a descending heap-free stack; pop_back yields the min
    std::vector<char> done(static_cast<std::size_t>(n), 0);
    while (!ready.empty()) {
        const Vertex v = ready.back();
        ready.pop_back();
        res.order.push_back(v);
        done[static_cast<std::size_t>(v)] = 1;
        for (Vertex w : g.out(v)) {
            if (--indeg[static_cast<std::size_t>(w)] == 0) {
                auto it = std::lower_bound(ready.begin(), ready.end(), w, std::greater<>());
                ready.insert(it, w);
            }
        }
    }
    if (static_cast<int>(res.order.size()) == n) {
        res.acyclic = true;
        return res;
    }

    res.order.clear();
    Vertex start = -1;
    for (Vertex v = 0; v < n; ++v)
        if (!done[static_cast<std::size_t>(v)]) {
            start = v;
            break;
        }
    // Every residual vertex keeps a residual in-neighbor (its in-degree never
    // reached zero), so walking backward over smallest in-neighbors must
    // revisit a vertex. The closed segment, reversed, is a forward cycle.
    std::vector<int> seen_at(static_cast<std::size_t>(n), -1);
    std::vector<Vertex> walk;
    Vertex cur = start;
    while (seen_at[static_cast<std::size_t>(cur)] < 0) {
        seen_at[static_cast<std::size_t>(cur)] = static_cast<int>(walk.size());
        walk.push_back(cur);
        for (Vertex w : g.in(cur))
            if (!done[static_cast<std::size_t>(w)]) {
                cur = w;
                break;
            }
    }
    walk.erase(walk.begin(), walk.begin() + seen_at[static_cast<std::size_t>(cur)]);
    std::reverse(walk.begin(), walk.end());
    auto min_it = std::min_element(walk.begin(), walk.end());
    std::rotate(walk.begin(), min_it, walk.end());
    res.cycle = std::move(walk);
    return res;
}

inline bool is_acyclic(const Digraph& g) { return check_acyclic(g).acyclic; }

// No witness iff the graph has no digon and no directed triangle. Scans
// digons first, then triangles via out-neighbor chains; the first witness in
// vertex-index scan order wins.
inline std::optional<FreenessWitness> three_free_check(const Digraph& g) {
    for (Vertex u = 0; u < g.n(); ++u)
        for (Vertex w : g.out(u))
            if (g.has_edge(w, u))
                return FreenessWitness{FreenessWitness::Kind::digon, {u, w}};
    for (Vertex u = 0; u < g.n(); ++u)
        for (Vertex w : g.out(u))
            for (Vertex x : g.out(w))
                if (x != u && g.has_edge(x, u))
                    return FreenessWitness{FreenessWitness::Kind::triangle, {u, w, x}};
    return std::nullopt;
}

inline bool is_three_free(const Digraph& g) { return !three_free_check(g).has_value(); }

struct InducedSubgraph {
    Digraph graph;
    std::vector<Vertex> original_label; // original_label[new] = old; sorted ascending
};

// Subgraph induced by `keep`, relabeled to 0..|keep|-1 preserving vertex
// order. Duplicates in `keep` are collapsed.
inline InducedSubgraph induced(const Digraph& g, std::span<const Vertex> keep) {
    std::vector<Vertex> s(keep.begin(), keep.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (Vertex v : s)
        if (v < 0 || v >= g.n())
            throw validation_error("induced: vertex " + std::to_string(v) + " outside 0.." +
                                   std::to_string(g.n() - 1));
    std::vector<Vertex> to_new(static_cast<std::size_t>(g.n()), -1);
    for (std::size_t i = 0; i < s.size(); ++i) to_new[static_cast<std::size_t>(s[i])] = static_cast<Vertex>(i);

    std::vector<Edge> edges;
    for (const auto& [u, v] : g.edges()) {
        const Vertex nu = to_new[static_cast<std::size_t>(u)];
        const Vertex nv = to_new[static_cast<std::size_t>(v)];
        if (nu >= 0 && nv >= 0) edges.emplace_back(nu, nv);
    }
    return InducedSubgraph{Digraph::build(static_cast<int>(s.size()), std::move(edges)), std::move(s)};
}

// Same vertex set, edge set E minus `removed`. A member of `removed` that is
// not an edge signals a malformed certificate and is rejected.
inline Digraph remove_edges(const Digraph& g, std::span<const Edge> removed) {
    std::vector<Edge> x(removed.begin(), removed.end());
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
    for (const auto& [u, v] : x)
        if (!g.has_edge(u, v))
            throw validation_error("remove_edges: (" + std::to_string(u) + ", " +
                                   std::to_string(v) + ") is not an edge");
    std::vector<Edge> kept;
    kept.reserve(g.edges().size() - x.size());
    std::set_difference(g.edges().begin(), g.edges().end(), x.begin(), x.end(),
                        std::back_inserter(kept));
    return Digraph::build(g.n(), std::move(kept));
}

} // namespace tfd
