#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout only
};

RunResult run_raw(const std::string& cmd_line) {
    const std::string cmd = cmd_line + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) res.output.append(buf.data(), got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

RunResult run(const std::string& args) { return run_raw(std::string(TFD_CLI_PATH) + " " + args); }

fs::path temp_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "tfd_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string fixture(const std::string& name) {
    return (fs::path(TFD_FIXTURE_DIR) / name).string();
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    REQUIRE(is);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("cli gen writes canonical edge lists") {
    const auto out = temp_dir() / "circ.el";
    const auto res = run("gen --family circulant --n 9 --steps 1,2 -o " + out.string());
    CHECK(res.exit_code == 0);
    CHECK(slurp(out).rfind("9 18\n", 0) == 0);

    const auto dag = temp_dir() / "dag.el";
    const auto res2 = run("gen --family dag --n 10 --p 0 --seed 1 -o " + dag.string());
    CHECK(res2.exit_code == 0);
    CHECK(slurp(dag) == "10 0\n");
}

TEST_CASE("cli gen rejects invalid parameters with the validation exit code") {
    const auto out = temp_dir() / "bad.el";
    CHECK(run("gen --family circulant --n 6 --steps 2 -o " + out.string()).exit_code == 3);
    CHECK(run("gen --family blowup --sizes 1,1,1 -o " + out.string()).exit_code == 3);
}

TEST_CASE("cli verify reports graph facts") {
    const auto res = run("verify " + fixture("c4.el") + " --json");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.output);
    CHECK(j["graph"]["gamma"] == 2);
    CHECK(j["graph"]["three_free"] == true);
    CHECK(j["graph"]["acyclic"] == false);
    CHECK(j["schema_version"] == 1);

    const auto digon = run("verify " + fixture("digon.el") + " --json");
    REQUIRE(digon.exit_code == 0);
    const auto dj = nlohmann::json::parse(digon.output);
    CHECK(dj["graph"]["three_free"] == false);
    CHECK(dj["graph"]["witness"]["kind"] == "digon");

    const auto empty = run("verify " + fixture("empty3.el") + " --json");
    const auto ej = nlohmann::json::parse(empty.output);
    CHECK(ej["graph"]["gamma"] == 3);
    CHECK(ej["graph"]["acyclic"] == true);
}

TEST_CASE("cli verify exits 2 on malformed input") {
    const auto bad = temp_dir() / "malformed.el";
    std::ofstream(bad) << "3 5\n0 1\n";
    CHECK(run("verify " + bad.string()).exit_code == 2);
    CHECK(run("verify " + (temp_dir() / "missing.el").string()).exit_code == 2);
}

TEST_CASE("cli decycle on the C4 fixture") {
    const auto res = run("decycle " + fixture("c4.el") + " --json");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.output);
    const auto& cert = j["payload"]["certificate"];
    CHECK(cert["X_size"] == 1);
    CHECK(cert["bound"] == Catch::Approx(1.7232));
    CHECK(cert["checks"]["acyclic_after_removal"] == true);
    CHECK(cert["checks"]["bound_satisfied"] == true);
    CHECK(j["payload"]["verification"]["all_passed"] == true);
}

TEST_CASE("cli decycle error paths") {
    CHECK(run("decycle " + fixture("digon.el")).exit_code == 3);
    CHECK(run("decycle " + fixture("c4.el") + " --mu 0.5").exit_code == 4);
    // acyclic input: empty certificate, still fine
    const auto res = run("decycle " + fixture("tt5.el") + " --json");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.output);
    CHECK(j["payload"]["certificate"]["X_size"] == 0);
    CHECK(j["payload"]["certificate"]["steps"].empty());
}

TEST_CASE("cli exact on C5") {
    const auto res = run("exact " + fixture("c5.el") + " --json");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.output);
    CHECK(j["payload"]["result"]["beta"] == 1);
}

TEST_CASE("cli certify-mu") {
    const auto res = run("certify-mu --mu 0.16065 --json");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.output);
    CHECK(j["payload"]["report"]["feasible"] == true);

    const auto max = run("certify-mu --maximize --json");
    REQUIRE(max.exit_code == 0);
    const auto mj = nlohmann::json::parse(max.output);
    const double mu_star = mj["payload"]["maximize"]["mu_star"].get<double>();
    CHECK(mu_star > 0.16065);
    CHECK(mu_star < 0.16070);
    CHECK(mj["payload"]["maximize"]["constant"].get<double>() < 0.8616);

    const auto checks = run("certify-mu --mu 0.16065 --checks --json");
    const auto cj = nlohmann::json::parse(checks.output);
    for (const auto& c : cj["payload"]["analytic_checks"]) CHECK(c["pass"] == true);
}

TEST_CASE("cli bench emits one CSV row per trial") {
    const auto out = temp_dir() / "bench.csv";
    const auto res = run("bench --family random_repaired --n 12 --p 0.4 --trials 20 --seed 7 -o " +
                         out.string());
    REQUIRE(res.exit_code == 0);
    const std::string csv = slurp(out);
    std::size_t lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 21); // header + 20 rows
    CHECK(csv.rfind("trial,n,m,gamma,X_size,beta_exact,ratio_to_gamma,ratio_to_beta,rung_hits",
                    0) == 0);

    // identical invocation reproduces the rows bit for bit
    const auto out2 = temp_dir() / "bench2.csv";
    run("bench --family random_repaired --n 12 --p 0.4 --trials 20 --seed 7 -o " + out2.string());
    CHECK(slurp(out2) == csv);
}

TEST_CASE("cli verify-cert round trip and tamper detection") {
    const auto report = temp_dir() / "c4_report.json";
    REQUIRE(run("decycle " + fixture("c4.el") + " --json -o " + report.string()).exit_code == 0);
    CHECK(run("verify-cert --graph " + fixture("c4.el") + " --report " + report.string())
              .exit_code == 0);

    auto j = nlohmann::json::parse(slurp(report));
    j["payload"]["certificate"]["X"] = nlohmann::json::array();
    const auto tampered = temp_dir() / "c4_tampered.json";
    std::ofstream(tampered) << j.dump();
    CHECK(run("verify-cert --graph " + fixture("c4.el") + " --report " + tampered.string())
              .exit_code == 5);
}

TEST_CASE("cli flags uncertified steps but keeps sound certificates") {
    const auto graph = temp_dir() / "b48.el";
    REQUIRE(run("gen --family blowup --sizes 12,12,12,12 -o " + graph.string()).exit_code == 0);
    const auto report = temp_dir() / "b48.json";
    const auto res = run("decycle " + graph.string() + " --json -o " + report.string());
    CHECK(res.exit_code == 0); // final checks hold, so no failure
    const auto j = nlohmann::json::parse(slurp(report));
    const auto& cert = j["payload"]["certificate"];
    CHECK(cert["rung_hits"]["uncertified"].get<long long>() >= 1);
    CHECK(cert["checks"]["bound_satisfied"] == true);
    // the paranoid re-verifier cannot tell flagged from forged and says so
    CHECK(run("verify-cert --graph " + graph.string() + " --report " + report.string())
              .exit_code == 5);
}

TEST_CASE("cli bench output is independent of the thread count") {
    const auto base = temp_dir() / "bench_t1.csv";
    const auto multi = temp_dir() / "bench_t4.csv";
    const std::string args = "bench --family random_repaired --n 10 --p 0.5 --trials 16 --seed 3";
    REQUIRE(run_raw("env TFD_THREADS=1 " + std::string(TFD_CLI_PATH) + " " + args + " -o " +
                    base.string())
                .exit_code == 0);
    REQUIRE(run_raw("env TFD_THREADS=4 " + std::string(TFD_CLI_PATH) + " " + args + " -o " +
                    multi.string())
                .exit_code == 0);
    CHECK(slurp(base) == slurp(multi));
}

TEST_CASE("cli stats rejects non-3-free inputs") {
    CHECK(run("stats " + fixture("digon.el")).exit_code == 3);
    const auto res = run("stats " + fixture("c5.el") + " --json");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.output);
    REQUIRE(j["payload"]["vertices"].size() == 5);
    CHECK(j["payload"]["vertices"][0]["stats"]["g"] == 1);
    CHECK(j["payload"]["vertices"][0]["canonical"]["rho"] == 5);
}

TEST_CASE("cli usage errors exit 2") {
    CHECK(run("decycle").exit_code == 2);
    CHECK(run("nonsense-subcommand").exit_code == 2);
}
