// Acceptance gate: every release criterion in one binary, one line each.
// Exit status is the number of failed criteria, so a clean run exits 0.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wallforge/asymptotics.hpp"
#include "wallforge/certifier.hpp"
#include "wallforge/errors.hpp"
#include "wallforge/grid1d.hpp"
#include "wallforge/model.hpp"
#include "wallforge/solver1d.hpp"
#include "wallforge/strip2d.hpp"

using namespace wallforge;
namespace fs = std::filesystem;

namespace {

int failures = 0;

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!ok) ++failures;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::vector<double> kAlphas = {0.5, 1.0, 2.0, 4.0, 8.0};
const std::vector<double> kRatios = {0.05, 0.2, 0.4};

// ---- criterion 1: closed forms vs an independent eigensolver ---------------

void criterion_1() {
    const Stopwatch sw;
    double worst_id = 0.0, worst_eig = 0.0, worst_mu = 0.0, worst_mu_a2 = 0.0;
    for (const double alpha : kAlphas)
        for (const double ratio : kRatios) {
            const Params p{alpha, ratio * alpha};
            const Equilibria eq = equilibria(p);
            worst_id = std::max(worst_id, std::abs(eq.a * eq.a + eq.b * eq.b - 1.0));
            worst_id = std::max(worst_id, std::abs(eq.a * eq.b - ratio));
            const LinearData ld = linear_data(p);
            const auto [lo, hi] = oracle::sym_eigs(ld.a11, ld.a12, ld.a22);
            worst_eig = std::max(worst_eig,
                                 std::abs(lo - ld.lambda_minus * ld.lambda_minus));
            worst_eig = std::max(worst_eig,
                                 std::abs(hi - ld.lambda_plus * ld.lambda_plus));
            const double mu_ref = oracle::eigvec_ratio(ld.a11, ld.a12, lo);
            worst_mu = std::max(worst_mu, std::abs(*ld.mu - mu_ref));
            if (alpha == 2.0) worst_mu_a2 = std::max(worst_mu_a2, std::abs(*ld.mu - 1.0));
        }
    const double t = sw.seconds();
    const bool ok = worst_id <= 1e-12 && worst_eig <= 1e-10 && worst_mu <= 1e-10 &&
                    worst_mu_a2 <= 1e-12 && t < 1.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "15-point closed forms: identity_err=%.2e eig_err=%.2e mu_err=%.2e "
                  "alpha2_mu_err=%.2e elapsed=%.3fs (limit 1s)",
                  worst_id, worst_eig, worst_mu, worst_mu_a2, t);
    report(1, ok, buf);
}

// ---- criteria 2-5 and 7 share the alpha=2, omega=0.5 continuation ----------

ContinuationSchedule reference_schedule() {
    ContinuationSchedule sched;
    sched.R_values = {5.0, 10.0, 20.0, 40.0};
    sched.target_h = 0.01;
    return sched;
}

ContinuationResult criterion_2(const Params& p) {
    const Stopwatch sw;
    ContinuationResult res = continue_in_R(p, reference_schedule());
    const double t = sw.seconds();

    int worst_stage_iters = 0;
    for (const TraceEntry& e : res.trace)
        worst_stage_iters = std::max(worst_stage_iters, e.iter);
    const bool ok = res.residual_sup <= 1e-10 && worst_stage_iters <= 15 && t < 10.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "continuation to R=40 at h=0.01: residual=%.2e (<=1e-10) "
                  "stage_iters<=%d (<=15) elapsed=%.2fs (limit 10s)",
                  res.residual_sup, worst_stage_iters, t);
    report(2, ok, buf);
    return res;
}

void criterion_3(const Params& p, const Profile& prof) {
    const Equilibria eq = equilibria(p);
    auto recs = certify_bounds(p, eq, prof);
    const auto mono = certify_monotone(prof);
    recs.insert(recs.end(), mono.begin(), mono.end());
    bool cert_ok = true;
    std::string failing;
    for (const auto& r : recs)
        if (!r.pass) {
            cert_ok = false;
            failing += " " + r.name;
        }

    // Strict interior bounds are checked on the transition core. In the far
    // tails the values saturate onto the wells within double rounding, so a
    // node can sit an ulp past a well; those plateaus are covered by the
    // toleranced wells_lower/wells_upper records above.
    double min_gap = 1e300;
    int core = 0;
    for (int i = 1; i + 1 < prof.grid.n_nodes(); ++i) {
        for (const double w : {prof.u[i], prof.v[i]}) {
            const double da = w - eq.a, db = eq.b - w;
            if (da > 1e-12 && db > 1e-12) {
                ++core;
                min_gap = std::min({min_gap, da, db});
            }
        }
    }
    const bool ok = cert_ok && core > 0 && min_gap > 0.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "pointwise bounds and strict monotonicity: %zu checks%s%s, "
                  "core_nodes=%d core_gap=%.2e (>0)",
                  recs.size(), cert_ok ? " all pass" : " failing:", failing.c_str(), core,
                  min_gap);
    report(3, ok, buf);
}

void criterion_4(const Params& p, const Profile& prof) {
    const std::vector<double> hn = hamiltonian_nodes(p, prof);
    double habs = 0.0, hmin = 1e300, hmax = -1e300;
    for (const double v : hn) {
        habs = std::max(habs, std::abs(v));
        hmin = std::min(hmin, v);
        hmax = std::max(hmax, v);
    }

    ContinuationSchedule fine = reference_schedule();
    fine.target_h = 0.005;
    const Profile prof5 = continue_in_R(p, fine).final();
    const std::vector<double> hn5 = hamiltonian_nodes(p, prof5);
    double hmin5 = 1e300, hmax5 = -1e300;
    for (const double v : hn5) {
        hmin5 = std::min(hmin5, v);
        hmax5 = std::max(hmax5, v);
    }
    const double ratio = (hmax - hmin) / (hmax5 - hmin5);
    const bool ok = habs <= 1e-6 && ratio >= 3.5;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "first integral: max|h|=%.2e (<=1e-6) spread_ratio(h/2)=%.2f (>=3.5)",
                  habs, ratio);
    report(4, ok, buf);
}

void criterion_5(const Params& p, const Profile& prof) {
    const LinearData ld = linear_data(p);
    const TailFit fit = fit_decay(p, prof);
    const LowerBoundCheck lb = check_lower_bound(p, prof);
    const double eru = std::abs(fit.rate_u - ld.lambda_minus) / ld.lambda_minus;
    const double erv = std::abs(fit.rate_v - ld.lambda_minus) / ld.lambda_minus;
    const double erm = std::abs(fit.ell2 / fit.ell1 - *ld.mu) / *ld.mu;
    const bool ok = eru <= 0.02 && erv <= 0.02 && erm <= 0.02 && lb.pass &&
                    ld.lambda_minus < lb.rate_cap;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "tail decay: rate_u_err=%.2e rate_v_err=%.2e ratio_err=%.2e (<=0.02) "
                  "lower_bound(%s, cap=%.4f) %s",
                  eru, erv, erm, lb.pass ? "pass" : "fail", lb.rate_cap,
                  ld.lambda_minus < lb.rate_cap ? "rate<cap" : "rate>=cap");
    report(5, ok, buf);
}

void criterion_6() {
    const Stopwatch sw;
    bool ok = true;
    double e4u = 0.0, e4v = 0.0, e25r = 0.0, e25a = 0.0, e5a = 0.0;
    {
        const Params p{4.0, 0.0};
        const OmegaZeroReport rep =
            omega_zero_asymptotics(4.0, continue_in_R(p, default_schedule(p)).final());
        e4u = std::abs(rep.rate_u - std::sqrt(2.0)) / std::sqrt(2.0);
        e4v = std::abs(rep.rate_v - 2.0) / 2.0;
        ok = ok && rep.branch == OmegaZeroBranch::AlphaAboveHalf && e4u <= 0.02 && e4v <= 0.02;
    }
    {
        const Params p{0.25, 0.0};
        const OmegaZeroReport rep =
            omega_zero_asymptotics(0.25, continue_in_R(p, default_schedule(p)).final());
        e25r = std::abs(rep.rate_u - 1.0);  // 2 sqrt(alpha) = 1
        e25a = std::abs(rep.amplitude_u - rep.amplitude_expected) / rep.amplitude_expected;
        ok = ok && rep.branch == OmegaZeroBranch::AlphaBelowHalf && e25r <= 0.02 && e25a <= 0.05;
    }
    {
        const Params p{0.5, 0.0};
        const OmegaZeroReport rep =
            omega_zero_asymptotics(0.5, continue_in_R(p, default_schedule(p)).final());
        e5a = std::abs(rep.amplitude_u - rep.amplitude_expected) / rep.amplitude_expected;
        ok = ok && rep.branch == OmegaZeroBranch::AlphaEqualHalf && e5a <= 0.05;
    }
    const double t = sw.seconds();
    ok = ok && t < 30.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "omega=0 branches: a4_rate_errs=(%.2e,%.2e) a0.25_rate_err=%.2e "
                  "a0.25_amp_err=%.2e a0.5_amp_err=%.2e elapsed=%.2fs (limit 30s)",
                  e4u, e4v, e25r, e25a, e5a, t);
    report(6, ok, buf);
}

void criterion_7(const Params& p) {
    const ContinuationSchedule sched = reference_schedule();
    const Profile A = continue_in_R(p, sched, {}, 0.5).final();
    const Profile B = continue_in_R(p, sched, {}, 2.0).final();
    double dk = 0.0, dswap = 0.0;
    const int N = A.grid.n_nodes();
    for (int i = 0; i < N; ++i) {
        dk = std::max({dk, std::abs(A.u[i] - B.u[i]), std::abs(A.v[i] - B.v[i])});
        dswap = std::max(dswap, std::abs(A.u[i] - A.v[N - 1 - i]));
    }
    const bool ok = dk <= 1e-6 && dswap <= 1e-6;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "uniqueness: steepness k=0.5 vs k=2 sup-dev=%.2e, swap-reflection "
                  "sup-dev=%.2e (<=1e-6)",
                  dk, dswap);
    report(7, ok, buf);
}

void criterion_8() {
    const Stopwatch sw;
    const Params p{1.0, 1.0};
    const double c = std::sqrt(2.0 / 3.0);
    const Grid g = make_grid(12.0, 0.05);
    double worst = 0.0;
    bool converged = true;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> amp(0.2, 1.5);
        Profile guess = make_profile(g);
        for (int i = 0; i < g.n_nodes(); ++i) {
            guess.u[i] = amp(rng);
            guess.v[i] = amp(rng);
        }
        try {
            const Profile prof = relax_neumann(p, guess).profile;
            for (int i = 0; i < g.n_nodes(); ++i)
                worst = std::max(
                    {worst, std::abs(prof.u[i] - c), std::abs(prof.v[i] - c)});
        } catch (const Error&) {
            converged = false;
        }
    }
    const double t = sw.seconds();
    const bool ok = converged && worst <= 1e-8 && t < 5.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "zero-flux basin: 10 random starts -> (c,c), worst_dev=%.2e (<=1e-8) "
                  "elapsed=%.2fs (limit 5s)",
                  worst, t);
    report(8, ok, buf);
}

void criterion_9() {
    const Stopwatch sw;
    const Params p{2.0, 0.5};
    StripGrid grid;  // defaults: L'=16, R=20, 64 x 800
    const Equilibria eq = equilibria(p);
    const double mid = 0.5 * (eq.a + eq.b);
    const Grid g1{grid.R, grid.n_N - 2};
    const Profile wall =
        recenter(solve_bvp(p, initial_guess(eq, g1, default_steepness(p)), {}).profile, mid);

    double worst_var = 0.0, worst_avg = 0.0;
    bool monotone = true, converged = true;
    for (const std::uint64_t seed : {1, 2, 3}) {
        try {
            const StripResult res = relax_strip(p, grid, 0.05, seed);
            const RowStats rs = row_stats(res.field);
            worst_var = std::max({worst_var, rs.max_variance_u, rs.max_variance_v});
            const ColumnMonotonicity cm = column_monotonicity(res.field);
            monotone = monotone && cm.u_increasing && cm.v_decreasing;
            // The relaxed wall may sit translated along x_N (translation is a
            // free mode), so pin both profiles at the same midpoint crossing.
            const Profile avg = recenter(xprime_average(res.field), mid);
            for (int i = 0; i < grid.n_N; ++i)
                worst_avg = std::max(
                    {worst_avg, std::abs(avg.u[i] - wall.u[i]), std::abs(avg.v[i] - wall.v[i])});
        } catch (const Error&) {
            converged = false;
        }
    }
    const double t = sw.seconds();
    const bool ok = converged && worst_var <= 1e-6 && monotone && worst_avg <= 1e-6 && t < 60.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "strip relaxation, 3 seeds at 64x800: row_variance=%.2e (<=1e-6) "
                  "columns_monotone=%s avg_vs_1d_recentered=%.2e (<=1e-6) elapsed=%.2fs "
                  "(limit 60s)",
                  worst_var, monotone ? "yes" : "no", worst_avg, t);
    report(9, ok, buf);
}

void criterion_10() {
    const char* bin = std::getenv("WALLFORGE_CLI");
    if (!bin) {
        report(10, false, "sweep determinism: WALLFORGE_CLI not set");
        return;
    }
    const std::string d1 = "acceptance_sweep_a", d2 = "acceptance_sweep_b";
    fs::remove_all(d1);
    fs::remove_all(d2);
    bool ran = true;
    for (const std::string& d : {d1, d2}) {
        const std::string cmd =
            std::string(bin) + " sweep --workers 1 -o " + d + " > " + d + ".log 2>&1";
        ran = ran && std::system(cmd.c_str()) == 0;
    }
    const std::string a = slurp(d1 + "/sweep.json"), b = slurp(d2 + "/sweep.json");
    const bool ok = ran && !a.empty() && a == b;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "sweep determinism: two runs over the default grid, %zu bytes, %s",
                  a.size(), !ran ? "cli failed" : (a == b ? "byte-identical" : "DIFFER"));
    report(10, ok, buf);
}

}  // namespace

int main() {
    criterion_1();
    const Params p{2.0, 0.5};
    const ContinuationResult ref = criterion_2(p);
    criterion_3(p, ref.final());
    criterion_4(p, ref.final());
    criterion_5(p, ref.final());
    criterion_6();
    criterion_7(p);
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("acceptance: %d of 10 criteria passed\n", 10 - failures);
    return failures;
}
