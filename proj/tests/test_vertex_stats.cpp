#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "tfd/families.hpp"
#include "tfd/vertex_stats.hpp"

using tfd::Digraph;
using tfd::Vertex;

TEST_CASE("local stats on C4") {
    const auto st = tfd::local_stats(oracle::c4(), 0);
    CHECK(st.A == std::vector<Vertex>{1});
    CHECK(st.B == std::vector<Vertex>{3});
    CHECK(st.C == std::vector<Vertex>{2});
    CHECK(st.g == 1);
    CHECK(st.t == 0);
    REQUIRE(st.per_u.size() == 1);
    CHECK(st.per_u[0].k == 1);
    CHECK(st.per_u[0].l == 1);
    CHECK(st.per_u[0].m == 1);
    CHECK(st.M == 1);
}

TEST_CASE("local stats on C5") {
    const auto st = tfd::local_stats(oracle::c5(), 0);
    CHECK(st.A == std::vector<Vertex>{1});
    CHECK(st.B == std::vector<Vertex>{4});
    CHECK(st.C == std::vector<Vertex>{2, 3});
    CHECK(st.g == 1);
    CHECK(st.t == 1); // the edge 2 -> 3
    REQUIRE(st.per_u.size() == 2);
    CHECK(st.per_u[0].k == 1);
    CHECK(st.per_u[0].l == 0);
    CHECK(st.per_u[1].k == 0);
    CHECK(st.per_u[1].l == 1);
    CHECK(st.M == 0);
}

TEST_CASE("local stats on circulant(9, {1,2})") {
    const auto st = tfd::local_stats(tfd::gen_circulant(9, {1, 2}), 0);
    CHECK(st.A == std::vector<Vertex>{1, 2});
    CHECK(st.B == std::vector<Vertex>{7, 8});
    CHECK(st.C == std::vector<Vertex>{3, 4, 5, 6});
    CHECK(st.g == 3); // missing pairs {1,7}, {2,7}, {2,8}
    CHECK(st.M == 0);
}

TEST_CASE("local stats reject non-3-free pivots") {
    CHECK_THROWS_AS(tfd::local_stats(Digraph(2, {{0, 1}, {1, 0}}), 0),
                    tfd::not_three_free_error);
    CHECK_THROWS_AS(tfd::local_stats(Digraph(3, {{0, 1}, {1, 2}, {2, 0}}), 0),
                    tfd::not_three_free_error);
}

TEST_CASE("canonical partition on C4 and C5") {
    const auto p4 = tfd::canonical_partition(oracle::c4(), 0);
    CHECK(p4.V1 == std::vector<Vertex>{3});
    CHECK(p4.V2 == std::vector<Vertex>{1, 2}); // tie l = k sends 2 to V2
    CHECK(p4.C_A == std::vector<Vertex>{2});
    CHECK(p4.C_B.empty());
    CHECK(p4.e == 0);
    CHECK(p4.tau == 1);
    CHECK(p4.rho == 2);

    const auto p5 = tfd::canonical_partition(oracle::c5(), 0);
    CHECK(p5.V1 == std::vector<Vertex>{3, 4});
    CHECK(p5.V2 == std::vector<Vertex>{1, 2});
    CHECK(p5.e == 1);
    CHECK(p5.tau == 1);
    CHECK(p5.rho == 5);
}

TEST_CASE("partition metrics on prescribed splits") {
    const Digraph c4 = oracle::c4();
    const auto canonical = tfd::partition_metrics(c4, 0, std::vector<Vertex>{3},
                                                  std::vector<Vertex>{1, 2});
    CHECK(canonical.rho == 2);
    CHECK(canonical.tau == 1);
    CHECK(canonical.e == 0);

    // force 2 into V1 instead
    const auto anti = tfd::partition_metrics(c4, 0, std::vector<Vertex>{2, 3},
                                             std::vector<Vertex>{1});
    const auto ref = oracle::partition_metrics_enumerated(c4, 0, {2, 3}, {1});
    CHECK(anti.rho == ref.rho);
    CHECK(anti.tau == ref.tau);
    CHECK(anti.e == ref.e);

    // edgeless graph: every cross pair is missing
    const Digraph empty(6, {});
    const auto em = tfd::partition_metrics(empty, 0, std::vector<Vertex>{1, 2},
                                           std::vector<Vertex>{3, 4, 5});
    CHECK(em.rho == 2 * 3 + 2 + 3);
    CHECK(em.tau == 0);
    CHECK(em.e == 0);

    CHECK_THROWS_AS(
        tfd::partition_metrics(c4, 0, std::vector<Vertex>{1}, std::vector<Vertex>{1, 2, 3}),
        tfd::validation_error);
    CHECK_THROWS_AS(tfd::partition_metrics(c4, 0, std::vector<Vertex>{1}, std::vector<Vertex>{2}),
                    tfd::validation_error);
}

TEST_CASE("sufficiency_threshold closed forms") {
    CHECK(tfd::sufficiency_threshold(3, 0, 0.0) == Catch::Approx(9.0).epsilon(1e-12));
    CHECK(tfd::sufficiency_threshold(7, 0, 0.0) == Catch::Approx(49.0).epsilon(1e-12));

    // e = c^2 / 4 collapses to the fixed-radical variant
    const double mu = 0.16065;
    const double op = 1.0 + mu;
    const double fixed = 4.0 * op * ((op + std::sqrt(op * op + op)) / 2.0 + 0.25);
    CHECK(tfd::sufficiency_threshold(2, 1, mu) == Catch::Approx(fixed).epsilon(1e-12));

    CHECK_THROWS_AS(tfd::sufficiency_threshold(0, 0, 0.1), tfd::validation_error);
    CHECK_THROWS_AS(tfd::sufficiency_threshold(2, -1, 0.1), tfd::validation_error);
    CHECK_THROWS_AS(tfd::sufficiency_threshold(2, 0, -0.1), tfd::validation_error);
}

TEST_CASE("sufficiency_threshold is nondecreasing in e") {
    for (long long c : {1, 2, 5, 9}) {
        double prev = tfd::sufficiency_threshold(c, 0, 0.16065);
        for (long long e = 1; e <= c * c; ++e) {
            const double cur = tfd::sufficiency_threshold(c, e, 0.16065);
            CAPTURE(c, e);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
    }
}

namespace {

std::vector<Digraph> three_free_corpus() {
    std::vector<Digraph> graphs;
    graphs.push_back(oracle::c4());
    graphs.push_back(oracle::c5());
    graphs.push_back(tfd::gen_circulant(9, {1, 2}));
    graphs.push_back(tfd::gen_circulant(13, {1, 2, 3}));
    graphs.push_back(tfd::gen_cycle_blowup({2, 3, 1, 2}));
    graphs.push_back(oracle::transitive_tournament(6));
    for (std::uint64_t seed = 0; seed < 25; ++seed)
        graphs.push_back(tfd::gen_random_repaired(9, 0.5, seed));
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        graphs.push_back(tfd::gen_random_dag(8, 0.4, seed));
    return graphs;
}

} // namespace

TEST_CASE("gamma splits across arbitrary C-splits, not only the canonical one") {
    std::mt19937_64 eng(4242);
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const Digraph g = tfd::gen_random_repaired(9, 0.5, seed + 300);
        const long long total = tfd::gamma(g);
        for (Vertex v = 0; v < g.n(); ++v) {
            const auto st = tfd::local_stats(g, v);
            std::vector<Vertex> v1 = st.B, v2 = st.A;
            for (Vertex u : st.C)
                (eng() & 1 ? v1 : v2).push_back(u);
            std::sort(v1.begin(), v1.end());
            std::sort(v2.begin(), v2.end());
            const auto m = tfd::partition_metrics(g, v, v1, v2);
            const auto ref = oracle::partition_metrics_enumerated(g, v, v1, v2);
            CAPTURE(seed, v);
            CHECK(m.rho == ref.rho);
            CHECK(m.tau == ref.tau);
            CHECK(m.e == ref.e);
            CHECK(total == tfd::gamma(tfd::induced(g, v1).graph) +
                               tfd::gamma(tfd::induced(g, v2).graph) + m.rho);
            CHECK(m.e <= st.t);
        }
    }
}

TEST_CASE("per-vertex structural invariants on a 3-free corpus") {
    for (const Digraph& g : three_free_corpus()) {
        const long long total_gamma = tfd::gamma(g);
        for (Vertex v = 0; v < g.n(); ++v) {
            CAPTURE(g.n(), g.m(), v);
            const tfd::VertexStats st = tfd::local_stats(g, v);

            // A and B disjoint, no A -> B edge
            for (Vertex a : st.A) {
                CHECK_FALSE(std::binary_search(st.B.begin(), st.B.end(), a));
                for (Vertex b : st.B) CHECK_FALSE(g.has_edge(a, b));
            }
            // g by definition
            long long missing_ab = 0;
            for (Vertex a : st.A)
                for (Vertex b : st.B)
                    if (!g.adjacent(a, b)) ++missing_ab;
            CHECK(st.g == missing_ab);

            // counting chain: g >= sum(k l)/|C| >= sum(m^2)/|C| >= (M/|C|)^2
            const long long c = static_cast<long long>(st.C.size());
            long long sum_kl = 0, sum_m2 = 0;
            for (const auto& pu : st.per_u) {
                CHECK(pu.m == std::min(pu.k, pu.l));
                sum_kl += pu.k * pu.l;
                sum_m2 += pu.m * pu.m;
            }
            if (c > 0) {
                CHECK(st.g * c >= sum_kl);
                CHECK(sum_kl >= sum_m2);
                CHECK(c * sum_m2 >= st.M * st.M);
                CHECK(st.g * c * c >= st.M * st.M);
            }

            const tfd::Partition p = tfd::canonical_partition(g, v);
            CHECK(p.tau == st.M + p.e);
            CHECK(p.rho >= st.g + c);
            CHECK(p.e <= st.t);
            CHECK(4 * p.e <= c * c);
            CHECK(p.e <=
                  static_cast<long long>(p.C_A.size()) * static_cast<long long>(p.C_B.size()));

            // gamma identity across the partition
            const auto g1 = tfd::induced(g, p.V1).graph;
            const auto g2 = tfd::induced(g, p.V2).graph;
            CHECK(total_gamma == tfd::gamma(g1) + tfd::gamma(g2) + p.rho);

            // metrics agree with the naive oracle
            const auto ref = oracle::partition_metrics_enumerated(g, v, p.V1, p.V2);
            CHECK(p.rho == ref.rho);
            CHECK(p.tau == ref.tau);
            CHECK(p.e == ref.e);

            // threshold implication
            if (c > 0) {
                const double mu = 0.16065;
                if (static_cast<double>(st.g) >= tfd::sufficiency_threshold(c, p.e, mu))
                    CHECK(static_cast<double>(p.rho) >= (1.0 + mu) * static_cast<double>(p.tau));
            }
        }
    }
}
