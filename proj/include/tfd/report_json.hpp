#pragma once

#include <json.hpp>

#include "tfd/decycle.hpp"
#include "tfd/digraph.hpp"
#include "tfd/exact_fas.hpp"
#include "tfd/mu_certify.hpp"
#include "tfd/vertex_stats.hpp"

// JSON report schemas. Every numeric field is recomputable from the input
// graph alone; reports carry no state a verifier would have to trust.
namespace tfd {

inline constexpr int kReportSchemaVersion = 1;

using json = nlohmann::json;

inline json to_json(const FreenessWitness& w) {
    return {{"kind", w.kind == FreenessWitness::Kind::digon ? "digon" : "triangle"},
            {"vertices", w.vertices}};
}

inline json graph_facts(const Digraph& g) {
    json j{{"n", g.n()}, {"m", g.m()}, {"gamma", gamma(g)}};
    const auto witness = three_free_check(g);
    j["three_free"] = !witness.has_value();
    if (witness) j["witness"] = to_json(*witness);
    const auto acyclic = check_acyclic(g);
    j["acyclic"] = acyclic.acyclic;
    if (!acyclic.acyclic) j["cycle"] = acyclic.cycle;
    return j;
}

inline json to_json(const MuReport& r) {
    return {{"mu", r.mu},           {"p1", r.p1}, {"p2", r.p2}, {"p3", r.p3}, {"p4", r.p4},
            {"feasible", r.feasible}, {"constant", r.constant}};
}

inline json to_json(const AnalyticCheck& c) {
    return {{"name", c.name},
            {"grid", {{"lo", c.grid_lo}, {"hi", c.grid_hi}, {"points", c.grid_points}}},
            {"tolerance", c.tolerance},
            {"pass", c.pass},
            {"worst_violation", c.worst_violation}};
}

inline json to_json(const ExactResult& r) {
    json edges = json::array();
    for (const auto& [u, v] : r.x_opt) edges.push_back({u, v});
    return {{"beta", r.beta}, {"order", r.order}, {"x_opt", edges}};
}

inline json to_json(const StepRecord& s) {
    json j{{"pivot", s.pivot},
           {"V1", s.V1},
           {"V2", s.V2},
           {"rho", s.rho},
           {"tau", s.tau},
           {"e", s.e},
           {"ratio", {{"num", s.rho}, {"den", s.tau}}}, // den = 0 encodes +infinity
           {"method", to_string(s.method)},
           {"certified", s.certified}};
    return j;
}

inline json to_json(const DecyclingCertificate& cert) {
    json x = json::array();
    for (const auto& [u, v] : cert.X) x.push_back({u, v});
    json steps = json::array();
    for (const auto& s : cert.steps) steps.push_back(to_json(s));
    return {{"mu", cert.mu},
            {"constant_from_mu", 1.0 / (1.0 + cert.mu)},
            {"gamma_total", cert.gamma_total},
            {"bound", cert.bound},
            {"bound_constant", kHeadlineConstant},
            {"X", x},
            {"X_size", cert.X.size()},
            {"steps", steps},
            {"checks",
             {{"acyclic_after_removal", cert.checks.acyclic_after_removal},
              {"bound_satisfied", cert.checks.bound_satisfied},
              {"exact_fallback_used", cert.checks.exact_fallback_used}}},
            {"rung_hits",
             {{"canonical", cert.rung_hits.canonical},
              {"exhaustive_split", cert.rung_hits.exhaustive_split},
              {"exact_fallback", cert.rung_hits.exact_fallback},
              {"uncertified", cert.rung_hits.uncertified}}}};
}

inline StepMethod step_method_from_string(const std::string& s) {
    if (s == "canonical") return StepMethod::canonical;
    if (s == "exhaustive-split") return StepMethod::exhaustive_split;
    if (s == "exact-fallback") return StepMethod::exact_fallback;
    throw validation_error("unknown step method \"" + s + "\"");
}

inline DecyclingCertificate certificate_from_json(const json& j) {
    DecyclingCertificate cert;
    cert.mu = j.at("mu").get<double>();
    cert.gamma_total = j.at("gamma_total").get<long long>();
    cert.bound = j.at("bound").get<double>();
    for (const auto& e : j.at("X"))
        cert.X.emplace_back(e.at(0).get<Vertex>(), e.at(1).get<Vertex>());
    for (const auto& sj : j.at("steps")) {
        StepRecord s;
        s.pivot = sj.at("pivot").get<Vertex>();
        s.V1 = sj.at("V1").get<std::vector<Vertex>>();
        s.V2 = sj.at("V2").get<std::vector<Vertex>>();
        s.rho = sj.at("rho").get<long long>();
        s.tau = sj.at("tau").get<long long>();
        s.e = sj.at("e").get<long long>();
        s.method = step_method_from_string(sj.at("method").get<std::string>());
        s.certified = sj.at("certified").get<bool>();
        cert.steps.push_back(std::move(s));
    }
    const auto& checks = j.at("checks");
    cert.checks.acyclic_after_removal = checks.at("acyclic_after_removal").get<bool>();
    cert.checks.bound_satisfied = checks.at("bound_satisfied").get<bool>();
    cert.checks.exact_fallback_used = checks.at("exact_fallback_used").get<bool>();
    if (j.contains("rung_hits")) {
        const auto& rh = j.at("rung_hits");
        cert.rung_hits.canonical = rh.at("canonical").get<long long>();
        cert.rung_hits.exhaustive_split = rh.at("exhaustive_split").get<long long>();
        cert.rung_hits.exact_fallback = rh.at("exact_fallback").get<long long>();
        cert.rung_hits.uncertified = rh.at("uncertified").get<long long>();
    }
    return cert;
}

inline json to_json(const VerifyReport& r) {
    return {{"x_subset", r.x_subset},
            {"acyclic_after_removal", r.acyclic_after_removal},
            {"gamma_zero_implies_empty", r.gamma_zero_implies_empty},
            {"bound_ok", r.bound_ok},
            {"steps_partition_ok", r.steps_partition_ok},
            {"steps_metrics_ok", r.steps_metrics_ok},
            {"steps_ratio_ok", r.steps_ratio_ok},
            {"all_passed", r.all_passed()},
            {"failures", r.failures}};
}

inline json to_json(const VertexStats& st) {
    json per_u = json::array();
    for (const auto& p : st.per_u)
        per_u.push_back({{"u", p.u}, {"k", p.k}, {"l", p.l}, {"m", p.m}});
    return {{"v", st.v}, {"A", st.A}, {"B", st.B}, {"C", st.C},
            {"g", st.g}, {"t", st.t}, {"M", st.M}, {"per_u", per_u}};
}

inline json to_json(const Partition& p) {
    return {{"v", p.v},     {"V1", p.V1},   {"V2", p.V2}, {"C_A", p.C_A},
            {"C_B", p.C_B}, {"rho", p.rho}, {"tau", p.tau}, {"e", p.e}};
}

// Envelope shared by all single-run reports.
inline json make_report(const std::string& mode, json input, json payload) {
    return {{"schema_version", kReportSchemaVersion},
            {"mode", mode},
            {"input", std::move(input)},
            {"payload", std::move(payload)}};
}

} // namespace tfd
