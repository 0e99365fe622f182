// Command-line front end: solve walls, certify profiles, fit tails, sweep the
// parameter grid, and relax the 2D strip. All numeric output is printed with
// %.17g so repeated runs are byte-identical.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wallforge/asymptotics.hpp"
#include "wallforge/certifier.hpp"
#include "wallforge/errors.hpp"
#include "wallforge/grid1d.hpp"
#include "wallforge/jsonio.hpp"
#include "wallforge/model.hpp"
#include "wallforge/solver1d.hpp"
#include "wallforge/strip2d.hpp"

namespace fs = std::filesystem;
using namespace wallforge;

namespace {

struct RunConfig {
    double alpha = 1.0;
    double omega = 0.0;
    std::vector<double> R_schedule;  // empty: derive from the decay rate
    double h = 0.0;                  // 0: derive from the decay rate
    double guess_steepness = 0.0;    // 0: lambda_minus
    std::string output_dir = ".";
    std::uint64_t seed = 1;
    CertTolerances tol;

    // sweep grid
    std::vector<double> alphas = {0.5, 1.0, 2.0, 4.0, 8.0};
    std::vector<double> ratios = {0.05, 0.2, 0.4};

    // strip
    double L_prime = 16.0;
    double strip_R = 20.0;
    int n_prime = 64;
    int n_N = 800;
    double amplitude = 0.05;
};

void apply_tolerance(CertTolerances& t, const std::string& key, double val) {
    if (key == "bounds") t.bounds = val;
    else if (key == "monotone_well_gap") t.monotone_well_gap = val;
    else if (key == "monotone_slack") t.monotone_slack = val;
    else if (key == "hamiltonian_sup") t.hamiltonian_sup = val;
    else if (key == "hamiltonian_mean") t.hamiltonian_mean = val;
    else if (key == "hamiltonian_spread_factor") t.hamiltonian_spread_factor = val;
    else if (key == "sliding_sup") t.sliding_sup = val;
    else if (key == "constant_dev") t.constant_dev = val;
    else if (key == "trichotomy_dist") t.trichotomy_dist = val;
    else if (key == "decay_rate_rel") t.decay_rate_rel = val;
    else if (key == "decay_ratio_rel") t.decay_ratio_rel = val;
    else if (key == "lower_bound_rate_rel") t.lower_bound_rate_rel = val;
    else throw Error(ErrorCode::ParseError, "unknown tolerance override: " + key);
}

void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ParseError, "config " + path + ": " + e.what());
    }
    const auto get = [&](const char* key, auto& slot) {
        if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
    };
    get("alpha", cfg.alpha);
    get("omega", cfg.omega);
    get("R_schedule", cfg.R_schedule);
    get("h", cfg.h);
    get("guess_steepness", cfg.guess_steepness);
    get("output_dir", cfg.output_dir);
    get("seed", cfg.seed);
    get("alphas", cfg.alphas);
    get("ratios", cfg.ratios);
    get("L_prime", cfg.L_prime);
    get("strip_R", cfg.strip_R);
    get("n_prime", cfg.n_prime);
    get("n_N", cfg.n_N);
    get("amplitude", cfg.amplitude);
    if (j.contains("tolerances"))
        for (const auto& [key, val] : j.at("tolerances").items())
            apply_tolerance(cfg.tol, key, val.get<double>());
}

ContinuationSchedule schedule_for(const Params& p, const RunConfig& cfg) {
    ContinuationSchedule sched;
    if (cfg.R_schedule.empty()) {
        sched = default_schedule(p);
        if (cfg.h > 0.0) sched.target_h = cfg.h;
    } else {
        sched.R_values = cfg.R_schedule;
        sched.target_h = cfg.h > 0.0 ? cfg.h : default_schedule(p).target_h;
    }
    return sched;
}

void write_trace(const std::string& path, const std::vector<TraceEntry>& trace) {
    std::string out = "stage R iter residual step_length\n";
    for (const auto& t : trace)
        out += std::to_string(t.stage) + " " + fmt17(t.R) + " " + std::to_string(t.iter) + " " +
               fmt17(t.residual) + " " + fmt17(t.step) + "\n";
    write_text_file(path, out);
}

// The independent solve used for the translation-uniqueness record: same
// schedule, twice the guess steepness.
Profile independent_wall(const Params& p, const ContinuationSchedule& sched) {
    return continue_in_R(p, sched, {}, 2.0 * default_steepness(p)).final();
}

int worker_count(int explicit_count, size_t jobs) {
    int n = explicit_count;
    if (n <= 0) {
        if (const char* env = std::getenv("WALLFORGE_WORKERS")) n = std::atoi(env);
    }
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    return static_cast<int>(std::min<size_t>(n, jobs > 0 ? jobs : 1));
}

std::string indent_block(const std::string& s, const std::string& pad) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        out += c;
        if (c == '\n') out += pad;
    }
    // drop the padding after the final newline
    if (out.size() >= pad.size() && out.compare(out.size() - pad.size(), pad.size(), pad) == 0)
        out.erase(out.size() - pad.size());
    return out;
}

void check_profile_matches(const Params& p, const Profile& prof) {
    const Equilibria eq = equilibria(p);
    const size_t N = prof.u.size();
    bool ok;
    if (classify(p) == Regime::ConstantOnly) {
        ok = std::abs(prof.u.front() - eq.c) <= 1e-6 && std::abs(prof.v.front() - eq.c) <= 1e-6 &&
             std::abs(prof.u[N - 1] - eq.c) <= 1e-6 && std::abs(prof.v[N - 1] - eq.c) <= 1e-6;
    } else {
        ok = std::abs(prof.u.front() - eq.a) <= 1e-6 && std::abs(prof.v.front() - eq.b) <= 1e-6 &&
             std::abs(prof.u[N - 1] - eq.b) <= 1e-6 && std::abs(prof.v[N - 1] - eq.a) <= 1e-6;
    }
    if (!ok)
        throw Error(ErrorCode::IncompatibleParams,
                    "profile boundary values do not match alpha/omega");
}

int cmd_solve(const RunConfig& cfg) {
    const Params p{cfg.alpha, cfg.omega};
    validate(p);
    if (classify(p) == Regime::ConstantOnly)
        throw Error(ErrorCode::WrongRegime,
                    "omega/alpha >= 1/2 is the ConstantOnly regime; no wall to solve");
    const auto sched = schedule_for(p, cfg);
    const auto res = continue_in_R(p, sched, {}, cfg.guess_steepness);
    fs::create_directories(cfg.output_dir);
    write_profile_csv(cfg.output_dir + "/profile.csv", res.final());
    write_trace(cfg.output_dir + "/trace.txt", res.trace);
    std::printf("solved alpha=%s omega=%s R=%s h=%s iterations=%d residual=%s\n",
                fmt17(p.alpha).c_str(), fmt17(p.omega).c_str(), fmt17(res.final().grid.R).c_str(),
                fmt17(res.final().grid.h()).c_str(), res.iterations,
                fmt17(res.residual_sup).c_str());
    return 0;
}

int cmd_certify(const RunConfig& cfg, const std::string& profile_path) {
    const Params p{cfg.alpha, cfg.omega};
    validate(p);
    const Profile prof = read_profile_csv(profile_path);
    check_profile_matches(p, prof);

    Certificate cert;
    if (classify(p) == Regime::ConstantOnly) {
        cert = certify_all(p, prof, nullptr, cfg.tol);
    } else {
        const Profile indep = independent_wall(p, schedule_for(p, cfg));
        cert = certify_all(p, prof, &indep, cfg.tol);
    }
    fs::create_directories(cfg.output_dir);
    write_text_file(cfg.output_dir + "/certificate.json", certificate_to_json(cert));
    if (cert.overall_pass) {
        std::printf("certificate: %zu checks, overall pass\n", cert.checks.size());
        return 0;
    }
    std::fprintf(stderr, "certificate failed; failing checks:\n");
    for (const auto& c : cert.checks)
        if (!c.pass)
            std::fprintf(stderr, "  %s: measured %s, target [%s, %s], tolerance %s\n",
                         c.name.c_str(), fmt17(c.measured).c_str(), fmt17(c.target_lo).c_str(),
                         fmt17(c.target_hi).c_str(), fmt17(c.tolerance).c_str());
    return 1;
}

int cmd_asympt(const RunConfig& cfg, const std::string& profile_path) {
    const Params p{cfg.alpha, cfg.omega};
    validate(p);
    Profile prof;
    if (profile_path.empty()) {
        prof = continue_in_R(p, schedule_for(p, cfg), {}, cfg.guess_steepness).final();
    } else {
        prof = read_profile_csv(profile_path);
        check_profile_matches(p, prof);
    }
    std::string json;
    if (p.omega > 0.0) {
        const TailFit fit = fit_decay(p, prof);
        json = tail_fit_to_json(p, fit, prof.grid.R, prof.grid.h());
        std::printf("rate_u=%s rate_v=%s lambda_minus=%s ell2/ell1=%s mu=%s\n",
                    fmt17(fit.rate_u).c_str(), fmt17(fit.rate_v).c_str(),
                    fmt17(fit.lambda_minus_theory).c_str(), fmt17(fit.ell2 / fit.ell1).c_str(),
                    fmt17(fit.mu_theory).c_str());
    } else {
        const OmegaZeroReport rep = omega_zero_asymptotics(p.alpha, prof);
        json = omega_zero_to_json(rep, prof.grid.R, prof.grid.h());
        std::printf("rate_v=%s rate_u=%s expected=%s amplitude=%s\n", fmt17(rep.rate_v).c_str(),
                    fmt17(rep.rate_u).c_str(), fmt17(rep.rate_u_expected).c_str(),
                    fmt17(rep.amplitude_u).c_str());
    }
    fs::create_directories(cfg.output_dir);
    write_text_file(cfg.output_dir + "/fit.json", json);
    return 0;
}

int cmd_sweep(const RunConfig& cfg, int workers_flag) {
    std::vector<Params> points;
    for (const double a : cfg.alphas)
        for (const double r : cfg.ratios) points.push_back({a, r * a});
    std::sort(points.begin(), points.end(), [](const Params& x, const Params& y) {
        return x.alpha != y.alpha ? x.alpha < y.alpha : x.omega < y.omega;
    });
    std::vector<Params> grid;
    for (const Params& p : points) {
        if (!grid.empty() && grid.back().alpha == p.alpha && grid.back().omega == p.omega) {
            std::fprintf(stderr, "warning: duplicate sweep point alpha=%s omega=%s skipped\n",
                         fmt17(p.alpha).c_str(), fmt17(p.omega).c_str());
            continue;
        }
        grid.push_back(p);
    }

    std::vector<std::string> slots(grid.size());
    std::atomic<size_t> cursor{0};
    const auto run_point = [&](size_t i) {
        const Params p = grid[i];
        std::string entry = "{\n      \"alpha\": " + fmt17(p.alpha) +
                            ",\n      \"omega\": " + fmt17(p.omega) + ",\n";
        try {
            const auto sched = schedule_for(p, cfg);
            const auto res = continue_in_R(p, sched, {}, cfg.guess_steepness);
            const Profile indep = independent_wall(p, sched);
            const Certificate cert = certify_all(p, res.final(), &indep, cfg.tol);
            const TailFit fit = fit_decay(p, res.final());
            entry += "      \"status\": \"ok\",\n";
            entry += "      \"certificate\": " +
                     indent_block(certificate_to_json(cert), "      ") + ",\n";
            entry += "      \"fit\": " +
                     indent_block(tail_fit_to_json(p, fit, res.final().grid.R,
                                                   res.final().grid.h()),
                                  "      ");
        } catch (const Error& e) {
            entry += "      \"status\": \"" + json_escape(e.what()) + "\",\n";
            entry += "      \"certificate\": null,\n      \"fit\": null";
        }
        entry += "\n    }";
        slots[i] = std::move(entry);
    };
    const int nw = worker_count(workers_flag, grid.size());
    if (nw <= 1) {
        for (size_t i = 0; i < grid.size(); ++i) run_point(i);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w)
            pool.emplace_back([&] {
                for (size_t i = cursor.fetch_add(1); i < grid.size(); i = cursor.fetch_add(1))
                    run_point(i);
            });
        for (auto& th : pool) th.join();
    }

    std::string out = "{\n  \"points\": [";
    for (size_t i = 0; i < slots.size(); ++i) {
        out += i == 0 ? "\n    " : ",\n    ";
        out += slots[i];
    }
    out += slots.empty() ? "]\n}\n" : "\n  ]\n}\n";
    fs::create_directories(cfg.output_dir);
    write_text_file(cfg.output_dir + "/sweep.json", out);
    size_t ok = 0;
    for (const auto& s : slots)
        if (s.find("\"status\": \"ok\"") != std::string::npos) ++ok;
    std::printf("sweep: %zu points, %zu ok\n", slots.size(), ok);
    return 0;
}

int cmd_strip2d(const RunConfig& cfg) {
    const Params p{cfg.alpha, cfg.omega};
    validate(p);
    StripGrid grid;
    grid.L_prime = cfg.L_prime;
    grid.R = cfg.strip_R;
    grid.n_prime = cfg.n_prime;
    grid.n_N = cfg.n_N;
    const StripResult res = relax_strip(p, grid, cfg.amplitude, cfg.seed);
    fs::create_directories(cfg.output_dir);
    write_field_csv(cfg.output_dir + "/field.csv", res.field);

    const RowStats rs = row_stats(res.field);
    const ColumnMonotonicity cm = column_monotonicity(res.field);
    std::printf("strip: iterations=%d residual=%s\n", res.iterations,
                fmt17(res.residual_sup).c_str());
    std::printf("row variance: u=%s v=%s\n", fmt17(rs.max_variance_u).c_str(),
                fmt17(rs.max_variance_v).c_str());
    std::printf("row spread: u=%s v=%s\n", fmt17(rs.max_spread_u).c_str(),
                fmt17(rs.max_spread_v).c_str());
    std::printf("columns monotone: u=%s v=%s\n", cm.u_increasing ? "yes" : "no",
                cm.v_decreasing ? "yes" : "no");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"domain-wall solver and certifier for the coupled condensate system"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path, profile_path;
    int workers_flag = 0;

    // Every subcommand shares the config-file-then-flags merge; bind flag
    // storage separately so explicit flags can win over the file.
    struct FlagSet {
        std::optional<double> alpha, omega, h, k, Lp, Rstrip, amplitude;
        std::optional<std::string> out;
        std::optional<std::vector<double>> R, alphas, ratios;
        std::optional<std::uint64_t> seed;
        std::optional<int> np, nN;
        std::vector<std::string> tol_overrides;
    } fl;

    // --h is a real option (grid spacing), so help is --help only.
    app.set_help_flag("--help", "print help");

    const auto add_common = [&](CLI::App* sub) {
        sub->set_help_flag("--help", "print help");
        sub->add_option("--config", config_path, "JSON config file; explicit flags win");
        sub->add_option("--alpha", fl.alpha, "coupling alpha > 0");
        sub->add_option("--omega", fl.omega, "Rabi frequency omega >= 0");
        sub->add_option("--out,-o", fl.out, "output directory");
        sub->add_option("--tol", fl.tol_overrides, "tolerance override name=value")
            ->expected(-1);
    };

    CLI::App* solve = app.add_subcommand("solve", "continue the wall profile in R");
    add_common(solve);
    solve->add_option("--R", fl.R, "continuation half-widths, e.g. --R 5 10 20 40")->expected(-1);
    solve->add_option("--h", fl.h, "target grid spacing");
    solve->add_option("--k,--steepness", fl.k, "tanh steepness of the initial guess");

    CLI::App* certify = app.add_subcommand("certify", "run every check against a profile");
    add_common(certify);
    certify->add_option("profile", profile_path, "profile.csv to certify")->required();
    certify->add_option("--R", fl.R, "half-widths for the independent comparison solve")
        ->expected(-1);
    certify->add_option("--h", fl.h, "target grid spacing for the comparison solve");

    CLI::App* asympt = app.add_subcommand("asympt", "fit tail decay rates and amplitudes");
    add_common(asympt);
    asympt->add_option("profile", profile_path, "profile.csv to fit (default: solve fresh)");
    asympt->add_option("--R", fl.R, "continuation half-widths for the fresh solve")
        ->expected(-1);
    asympt->add_option("--h", fl.h, "target grid spacing");

    CLI::App* sweep = app.add_subcommand("sweep", "solve+certify+fit over a parameter grid");
    add_common(sweep);
    sweep->add_option("--alphas", fl.alphas, "alpha values")->expected(-1);
    sweep->add_option("--ratios", fl.ratios, "omega/alpha values")->expected(-1);
    sweep->add_option("--workers", workers_flag, "worker threads (0: WALLFORGE_WORKERS or cores)");
    sweep->add_option("--h", fl.h, "target grid spacing");

    CLI::App* strip = app.add_subcommand("strip2d", "relax the periodic strip");
    add_common(strip);
    strip->add_option("--Lprime", fl.Lp, "period in x'");
    strip->add_option("--R", fl.Rstrip, "half-length in x_N");
    strip->add_option("--np", fl.np, "columns in x'");
    strip->add_option("--nN", fl.nN, "rows in x_N");
    strip->add_option("--amplitude", fl.amplitude, "perturbation amplitude");
    strip->add_option("--seed", fl.seed, "perturbation seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) load_config_file(config_path, cfg);
        if (fl.alpha) cfg.alpha = *fl.alpha;
        if (fl.omega) cfg.omega = *fl.omega;
        if (fl.h) cfg.h = *fl.h;
        if (fl.k) cfg.guess_steepness = *fl.k;
        if (fl.out) cfg.output_dir = *fl.out;
        if (fl.R) cfg.R_schedule = *fl.R;
        if (fl.alphas) cfg.alphas = *fl.alphas;
        if (fl.ratios) cfg.ratios = *fl.ratios;
        if (fl.seed) cfg.seed = *fl.seed;
        if (fl.Lp) cfg.L_prime = *fl.Lp;
        if (fl.Rstrip) cfg.strip_R = *fl.Rstrip;
        if (fl.np) cfg.n_prime = *fl.np;
        if (fl.nN) cfg.n_N = *fl.nN;
        if (fl.amplitude) cfg.amplitude = *fl.amplitude;
        for (const std::string& ov : fl.tol_overrides) {
            const size_t eq_pos = ov.find('=');
            if (eq_pos == std::string::npos)
                throw Error(ErrorCode::ParseError, "tolerance override must be name=value");
            apply_tolerance(cfg.tol, ov.substr(0, eq_pos), std::stod(ov.substr(eq_pos + 1)));
        }

        if (solve->parsed()) return cmd_solve(cfg);
        if (certify->parsed()) return cmd_certify(cfg, profile_path);
        if (asympt->parsed()) return cmd_asympt(cfg, profile_path);
        if (sweep->parsed()) return cmd_sweep(cfg, workers_flag);
        if (strip->parsed()) return cmd_strip2d(cfg);
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
    return 2;
}
