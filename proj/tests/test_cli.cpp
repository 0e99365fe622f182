#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wallforge/grid1d.hpp"
#include "wallforge/model.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out, err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Fresh scratch directory under the test working directory.
std::string scratch(const std::string& name) {
    const std::string dir = "cli_scratch/" + name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

CliResult run_cli(const std::string& args, const std::string& dir) {
    const char* bin = std::getenv("WALLFORGE_CLI");
    REQUIRE_MESSAGE(bin != nullptr, "WALLFORGE_CLI must point at the executable");
    CliResult r;
    const std::string out_path = dir + "/stdout.txt", err_path = dir + "/stderr.txt";
    const std::string cmd =
        std::string(bin) + " " + args + " > " + out_path + " 2> " + err_path;
    const int status = std::system(cmd.c_str());
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve writes a parsable profile and a trace") {
    const std::string dir = scratch("solve");
    const CliResult r =
        run_cli("solve --alpha 2 --omega 0.5 --R 3 6 12 --h 0.02 -o " + dir, dir);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("solved alpha=2 omega=0.5") != std::string::npos);
    CHECK(r.out.find("residual=") != std::string::npos);

    const wallforge::Profile prof = wallforge::read_profile_csv(dir + "/profile.csv");
    CHECK(prof.grid.R == 12.0);
    const wallforge::Equilibria eq = wallforge::equilibria({2.0, 0.5});
    CHECK(std::abs(prof.u.front() - eq.a) <= 1e-12);
    CHECK(std::abs(prof.u.back() - eq.b) <= 1e-12);

    const std::string trace = slurp(dir + "/trace.txt");
    CHECK(trace.rfind("stage R iter residual step_length\n", 0) == 0);
    CHECK(trace.find("\n1 ") != std::string::npos);
}

TEST_CASE("solve refuses what it cannot do") {
    SUBCASE("constant-only parameters") {
        const std::string dir = scratch("solve_constant");
        const CliResult r = run_cli("solve --alpha 1 --omega 1 -o " + dir, dir);
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("ConstantOnly") != std::string::npos);
    }
    SUBCASE("invalid coupling") {
        const std::string dir = scratch("solve_invalid");
        const CliResult r = run_cli("solve --alpha -1 --omega 0.5 -o " + dir, dir);
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("alpha") != std::string::npos);
    }
}

TEST_CASE("certify judges a profile and honors tolerance overrides") {
    const std::string dir = scratch("certify");
    REQUIRE(run_cli("solve --alpha 2 --omega 0.5 --R 5 10 20 --h 0.01 -o " + dir, dir)
                .exit_code == 0);
    const std::string prof = dir + "/profile.csv";
    const std::string args =
        " --alpha 2 --omega 0.5 --R 5 10 20 --h 0.01 -o " + dir;

    SUBCASE("a good profile passes every check") {
        const CliResult r = run_cli("certify " + prof + args, dir);
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("overall pass") != std::string::npos);
        const auto cert = nlohmann::json::parse(slurp(dir + "/certificate.json"));
        CHECK(cert.at("overall_pass").get<bool>());
        CHECK(cert.at("checks").size() == 17);
        CHECK(cert.at("params").at("alpha").get<double>() == 2.0);
    }
    SUBCASE("an impossible tolerance fails with the check named") {
        const CliResult r =
            run_cli("certify " + prof + args + " --tol hamiltonian_sup=1e-12", dir);
        CHECK(r.exit_code == 1);
        CHECK(r.err.find("hamiltonian_sup") != std::string::npos);
        const auto cert = nlohmann::json::parse(slurp(dir + "/certificate.json"));
        CHECK_FALSE(cert.at("overall_pass").get<bool>());
    }
    SUBCASE("parameters that do not match the profile are refused") {
        const CliResult r = run_cli("certify " + prof + " --alpha 2 --omega 0.3 -o " + dir, dir);
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("boundary") != std::string::npos);
    }
    SUBCASE("a malformed profile is refused") {
        const std::string bad = dir + "/bad.csv";
        std::ofstream(bad) << "not,a,profile\n1,2,3\n";
        const CliResult r = run_cli("certify " + bad + " --alpha 2 --omega 0.5 -o " + dir, dir);
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("ParseError") != std::string::npos);
    }
}

TEST_CASE("tail fits from a fresh solve and from a saved profile") {
    SUBCASE("heteroclinic fit matches the linearization") {
        const std::string dir = scratch("asympt");
        const CliResult r =
            run_cli("asympt --alpha 2 --omega 0.5 --R 5 10 20 --h 0.01 -o " + dir, dir);
        CHECK(r.exit_code == 0);
        const auto fit = nlohmann::json::parse(slurp(dir + "/fit.json"));
        CHECK(std::abs(fit.at("rate_u").get<double>() - 1.0) <= 0.02);
        CHECK(fit.at("mu_theory").get<double>() == 1.0);
        CHECK(fit.at("window").at("count").get<int>() >= 20);
    }
    SUBCASE("zero Rabi frequency gets the branch report") {
        const std::string dir = scratch("asympt_w0");
        REQUIRE(run_cli("solve --alpha 4 --omega 0 --R 4 8 16 --h 0.005 -o " + dir, dir)
                    .exit_code == 0);
        const CliResult r =
            run_cli("asympt " + dir + "/profile.csv --alpha 4 --omega 0 -o " + dir, dir);
        CHECK(r.exit_code == 0);
        const auto fit = nlohmann::json::parse(slurp(dir + "/fit.json"));
        CHECK(fit.at("branch").get<std::string>() == "alpha_above_half");
        CHECK(std::abs(fit.at("rate_v").get<double>() - 2.0) <= 0.08);
        CHECK(fit.at("relation_ok").get<bool>());
    }
}

TEST_CASE("sweep artifacts are deterministic and deduplicated") {
    const std::string base_args = "sweep --alphas 2 --ratios 0.25 --h 0.01 --workers 1 -o ";
    const std::string d1 = scratch("sweep1");
    const CliResult r1 = run_cli(base_args + d1, d1);
    CHECK(r1.exit_code == 0);
    CHECK(r1.out.find("sweep: 1 points, 1 ok") != std::string::npos);

    const std::string d2 = scratch("sweep2");
    REQUIRE(run_cli(base_args + d2, d2).exit_code == 0);
    CHECK(slurp(d1 + "/sweep.json") == slurp(d2 + "/sweep.json"));

    SUBCASE("duplicate points collapse with a warning") {
        const std::string d3 = scratch("sweep_dup");
        const CliResult r3 =
            run_cli("sweep --alphas 2 2 --ratios 0.25 --h 0.01 --workers 1 -o " + d3, d3);
        CHECK(r3.exit_code == 0);
        CHECK(r3.err.find("duplicate") != std::string::npos);
        CHECK(slurp(d3 + "/sweep.json") == slurp(d1 + "/sweep.json"));
    }
    SUBCASE("an empty grid is an empty artifact, not an error") {
        const std::string d4 = scratch("sweep_empty");
        const std::string cfg_path = d4 + "/cfg.json";
        std::ofstream(cfg_path) << "{\"alphas\": []}\n";
        const CliResult r4 = run_cli("sweep --config " + cfg_path + " -o " + d4, d4);
        CHECK(r4.exit_code == 0);
        CHECK(r4.out.find("sweep: 0 points, 0 ok") != std::string::npos);
        const auto j = nlohmann::json::parse(slurp(d4 + "/sweep.json"));
        CHECK(j.at("points").empty());
    }
}

TEST_CASE("explicit flags win over the config file") {
    const std::string dir = scratch("config");
    const std::string cfg_path = dir + "/cfg.json";
    std::ofstream(cfg_path) << "{\"alpha\": 1.0, \"omega\": 0.3, \"R_schedule\": [3, 6], "
                               "\"h\": 0.05, \"output_dir\": \"" + dir + "\"}\n";
    const CliResult r =
        run_cli("solve --config " + cfg_path + " --alpha 2 --omega 0.5", dir);
    CHECK(r.exit_code == 0);
    // alpha/omega from the flags, schedule and output directory from the file
    CHECK(r.out.find("solved alpha=2 omega=0.5") != std::string::npos);
    CHECK(r.out.find("R=6 ") != std::string::npos);
    CHECK(fs::exists(dir + "/profile.csv"));
}

TEST_CASE("strip relaxation end to end") {
    const std::string dir = scratch("strip");
    const CliResult r = run_cli(
        "strip2d --alpha 2 --omega 0.5 --Lprime 8 --R 10 --np 8 --nN 100 "
        "--amplitude 0.02 --seed 3 -o " + dir,
        dir);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("columns monotone: u=yes v=yes") != std::string::npos);

    std::ifstream in(dir + "/field.csv");
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "xp,xN,u,v");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 100 * 8);
}

}  // TEST_SUITE
