#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lpstab/cli.hpp"

using namespace lpstab::cli;

namespace {

const std::filesystem::path kFixtures = LPSTAB_FIXTURES;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "lpstab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const char* name) { return (kFixtures / name).string(); }

std::string slurp(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

struct TempDir {
    std::filesystem::path path;
    TempDir() : path(std::filesystem::temp_directory_path() / "lpstab_cli_test") {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("command names") {
    CHECK(parse_command("verify-theorem1") == Command::VerifyTheorem1);
    CHECK(parse_command("sharpness-scan") == Command::SharpnessScan);
    CHECK_FALSE(parse_command("verify").has_value());
}

TEST_CASE("verify-theorem1 suite") {
    const auto r = run_cli({"verify-theorem1", "--p", "2", "--instances", "100", "--seed", "7"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("seed,p,lhs,rhs,margin,A,sigma,N\n", 0) == 0);
    CHECK(count_lines(r.out) == 101);
    CHECK(r.err.find("0 violation(s)") != std::string::npos);
}

TEST_CASE("mixed-volume prints the Steiner value") {
    const auto r = run_cli({"mixed-volume", "--p", "1", fixture("square.json"), fixture("ball.json")});
    CHECK(r.code == kExitOk);
    CHECK(std::stod(r.out) == 4.0);
    const auto j = run_cli({"mixed-volume", "--p", "1", "--format", "json", fixture("square.json"), fixture("ball.json")});
    CHECK(nlohmann::json::parse(j.out)["mixed_volume"].get<double>() == 4.0);
}

TEST_CASE("sharpness-scan summary") {
    TempDir tmp;
    const auto csv = tmp.path / "scan.csv";
    const auto r = run_cli({"sharpness-scan", "--n", "2", "--p", "2", "-o", csv.string()});
    CHECK(r.code == kExitOk);
    const auto summary = nlohmann::json::parse(slurp(csv.string() + ".summary.json"));
    CHECK(std::abs(summary["delta_slope"].get<double>() - 2) <= 0.05);
    CHECK(std::abs(summary["asymmetry_sq_slope"].get<double>() - 2) <= 0.05);
    CHECK(summary["sharp"].get<bool>());
    CHECK(nlohmann::json::parse(r.out) == summary);
    const auto table = slurp(csv);
    CHECK(table.rfind("n,p,epsilon,delta_p,asymmetry,asymmetry_sq,beta_p\n", 0) == 0);
    CHECK(count_lines(table) == 18);
    CHECK_FALSE(std::filesystem::exists(csv.string() + ".tmp"));
}

TEST_CASE("other commands succeed on valid input") {
    const auto psi = run_cli({"psi-scan", "--p", "0.5"});
    CHECK(psi.code == kExitOk);
    CHECK(nlohmann::json::parse(psi.out)["argmin_on_diagonal"].get<bool>());

    const auto chain = run_cli({"proof-chain", "--p", "2", fixture("square.json"), fixture("hexagon.json")});
    CHECK(chain.code == kExitOk);
    const auto report = nlohmann::json::parse(chain.out)["reports"][0];
    CHECK(report["steps"].size() > 10);
    CHECK(report["min_margin"].get<double>() >= -1e-9);

    const auto t2 = run_cli({"verify-theorem2", "--p", "1.5", "--instances", "4", "-N", "512"});
    CHECK(t2.code == kExitOk);
    CHECK(count_lines(t2.out) == 5);

    const auto jensen = run_cli({"jensen-check", "--p", "0.5", "--instances", "200", "--format", "json"});
    CHECK(jensen.code == kExitOk);
    CHECK(nlohmann::json::parse(jensen.out)["reports"].size() == 200);
}

TEST_CASE("exit 1 on an inflated right-hand side") {
    const auto ok = run_cli({"jensen-check", "--p", "1", fixture("near_pinsker.json")});
    CHECK(ok.code == kExitOk);
    const auto bad = run_cli({"jensen-check", "--p", "1", "--rhs-scale", "10", fixture("near_pinsker.json")});
    CHECK(bad.code == kExitViolation);
    CHECK(bad.err.find("1 violation(s)") != std::string::npos);

    const auto t1 = run_cli({"verify-theorem1", "--p", "2", "--rhs-scale", "1e4", fixture("square.json"),
                             fixture("hexagon.json")});
    CHECK(t1.code == kExitViolation);
}

TEST_CASE("exit 2 on usage and input errors") {
    const auto malformed = run_cli({"mixed-volume", "--p", "1", fixture("malformed.json"), fixture("ball.json")});
    CHECK(malformed.code == kExitUsage);
    CHECK(malformed.err.find("malformed.json") != std::string::npos);

    const auto field = run_cli({"mixed-volume", "--p", "1", fixture("bad_vertex.json"), fixture("ball.json")});
    CHECK(field.code == kExitUsage);
    CHECK(field.err.find("$.vertices[1][1]") != std::string::npos);

    const auto nonconvex = run_cli({"proof-chain", "--p", "2", fixture("nonconvex.json"), fixture("square.json")});
    CHECK(nonconvex.code == kExitUsage);
    CHECK(nonconvex.err.find("vertex triple (2, 0), (0.2") != std::string::npos);

    CHECK(run_cli({"verify-theorem1", "--instances", "3"}).code == kExitUsage);
    CHECK(run_cli({"verify-theorem1", "--p", "1"}).code == kExitUsage);
    CHECK(run_cli({"bogus", "--p", "2"}).code == kExitUsage);
    CHECK(run_cli({"psi-scan", "--p", "1"}).code == kExitUsage);
    CHECK(run_cli({"mixed-volume", "--p", "1", fixture("square.json")}).code == kExitUsage);
    CHECK(run_cli({"verify-theorem1", "--p", "2", "--format", "xml"}).code == kExitUsage);
    CHECK(run_cli({"sharpness-scan", "--p", "2", "--n", "1"}).code == kExitUsage);
    CHECK(run_cli({"jensen-check", "--p", "2", fixture("bad_weights.json")}).code == kExitUsage);
    CHECK(run_cli({"mixed-volume", "--p", "1", fixture("square.json"), fixture("missing.json")}).code == kExitUsage);
    CHECK(run_cli({}).code == kExitUsage);
}

TEST_CASE("determinism and seeding") {
    TempDir tmp;
    const auto a = tmp.path / "a.csv";
    const auto b = tmp.path / "b.csv";
    CHECK(run_cli({"verify-theorem1", "--p", "1.5", "--instances", "50", "--seed", "11", "-o", a.string()}).code == 0);
    CHECK(run_cli({"verify-theorem1", "--p", "1.5", "--instances", "50", "--seed", "11", "-o", b.string()}).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).size() > 100);

    const auto other = run_cli({"verify-theorem1", "--p", "1.5", "--instances", "50", "--seed", "12"});
    CHECK(other.out != slurp(a));

    ::setenv(kSeedEnv, "11", 1);
    const auto env = run_cli({"verify-theorem1", "--p", "1.5", "--instances", "50"});
    ::unsetenv(kSeedEnv);
    CHECK(env.out == slurp(a));

    ::setenv(kSeedEnv, "not-a-number", 1);
    CHECK(run_cli({"verify-theorem1", "--p", "1.5", "--instances", "5"}).code == kExitUsage);
    ::unsetenv(kSeedEnv);

    const auto s1 = run_cli({"sharpness-scan", "--p", "3", "--n", "5"});
    const auto s2 = run_cli({"sharpness-scan", "--p", "3", "--n", "5"});
    CHECK(s1.out == s2.out);
}
