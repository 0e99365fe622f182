#include "wallforge/solver1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wallforge/errors.hpp"

namespace wallforge {
namespace {

struct Inv2 {
    double i11, i12, i21, i22;
};

Inv2 invert(const Mat2& m) {
    const double det = m.a11 * m.a22 - m.a12 * m.a21;
    const double scale =
        (std::abs(m.a11) + std::abs(m.a12)) * (std::abs(m.a21) + std::abs(m.a22));
    if (std::abs(det) <= 1e-14 * scale + 1e-300)
        throw Error(ErrorCode::SingularJacobian, "block pivot not invertible");
    const double inv = 1.0 / det;
    return {m.a22 * inv, -m.a12 * inv, -m.a21 * inv, m.a11 * inv};
}

// 2x2-block tridiagonal solve: diagonal blocks D, scalar couplings lower[i]
// (to i-1) and upper[i] (to i+1). rhs is interleaved and overwritten by the
// solution. No pivoting: the -2/h^2 diagonal keeps pivots well away from zero.
void solve_block_tridiag(const std::vector<Mat2>& D, const std::vector<double>& lower,
                         const std::vector<double>& upper, std::vector<double>& rhs) {
    const size_t N = D.size();
    std::vector<Inv2> Cinv(N);
    Cinv[0] = invert(D[0]);
    for (size_t i = 1; i < N; ++i) {
        const double f = lower[i] * upper[i - 1];
        const Inv2& P = Cinv[i - 1];
        Mat2 C = D[i];
        C.a11 -= f * P.i11;
        C.a12 -= f * P.i12;
        C.a21 -= f * P.i21;
        C.a22 -= f * P.i22;
        Cinv[i] = invert(C);
        const double y1 = rhs[2 * (i - 1)], y2 = rhs[2 * (i - 1) + 1];
        rhs[2 * i] -= lower[i] * (P.i11 * y1 + P.i12 * y2);
        rhs[2 * i + 1] -= lower[i] * (P.i21 * y1 + P.i22 * y2);
    }
    {
        const Inv2& P = Cinv[N - 1];
        const double y1 = rhs[2 * (N - 1)], y2 = rhs[2 * (N - 1) + 1];
        rhs[2 * (N - 1)] = P.i11 * y1 + P.i12 * y2;
        rhs[2 * (N - 1) + 1] = P.i21 * y1 + P.i22 * y2;
    }
    for (size_t i = N - 1; i-- > 0;) {
        const Inv2& P = Cinv[i];
        const double y1 = rhs[2 * i] - upper[i] * rhs[2 * (i + 1)];
        const double y2 = rhs[2 * i + 1] - upper[i] * rhs[2 * (i + 1) + 1];
        rhs[2 * i] = P.i11 * y1 + P.i12 * y2;
        rhs[2 * i + 1] = P.i21 * y1 + P.i22 * y2;
    }
}

// Interior-node residual (Dirichlet unknowns); returns the sup-norm.
double eval_dirichlet(const Params& p, const Grid& g, const std::vector<double>& u,
                      const std::vector<double>& v, std::vector<double>* out) {
    const int n = g.n_interior;
    const double h2 = g.h() * g.h();
    if (out) out->resize(2 * static_cast<size_t>(n));
    double sup = 0.0;
    for (int i = 1; i <= n; ++i) {
        const auto F = rhs(p, u[i], v[i]);
        const double ru = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / h2 - F[0];
        const double rv = (v[i - 1] - 2.0 * v[i] + v[i + 1]) / h2 - F[1];
        if (out) {
            (*out)[2 * (i - 1)] = ru;
            (*out)[2 * (i - 1) + 1] = rv;
        }
        sup = std::max(sup, std::max(std::abs(ru), std::abs(rv)));
    }
    return sup;
}

// All-node residual with reflected ghost nodes (zero-flux ends).
double eval_neumann(const Params& p, const Grid& g, const std::vector<double>& u,
                    const std::vector<double>& v, std::vector<double>* out) {
    const int N = g.n_nodes();
    const double h2 = g.h() * g.h();
    if (out) out->resize(2 * static_cast<size_t>(N));
    double sup = 0.0;
    for (int i = 0; i < N; ++i) {
        const auto F = rhs(p, u[i], v[i]);
        double lu, lv;
        if (i == 0) {
            lu = 2.0 * (u[1] - u[0]) / h2;
            lv = 2.0 * (v[1] - v[0]) / h2;
        } else if (i == N - 1) {
            lu = 2.0 * (u[N - 2] - u[N - 1]) / h2;
            lv = 2.0 * (v[N - 2] - v[N - 1]) / h2;
        } else {
            lu = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / h2;
            lv = (v[i - 1] - 2.0 * v[i] + v[i + 1]) / h2;
        }
        const double ru = lu - F[0];
        const double rv = lv - F[1];
        if (out) {
            (*out)[2 * i] = ru;
            (*out)[2 * i + 1] = rv;
        }
        sup = std::max(sup, std::max(std::abs(ru), std::abs(rv)));
    }
    return sup;
}

void check_profile_shape(const Profile& prof) {
    const size_t N = static_cast<size_t>(prof.grid.n_nodes());
    if (prof.u.size() != N || prof.v.size() != N)
        throw Error(ErrorCode::InvalidParams, "profile arrays do not match the grid");
}

SolveResult newton_dirichlet(const Params& p, Profile prof, const SolveOptions& opt, int stage,
                             std::vector<TraceEntry>& trace) {
    const Grid g = prof.grid;
    const int n = g.n_interior;
    const double h2 = g.h() * g.h();

    std::vector<double> lower(n, 1.0 / h2), upper(n, 1.0 / h2);
    lower[0] = 0.0;
    upper[n - 1] = 0.0;

    std::vector<double> r, r_trial, delta;
    std::vector<Mat2> D(n);
    std::vector<double> ut(prof.u), vt(prof.v);

    double rn = eval_dirichlet(p, g, prof.u, prof.v, &r);
    int iter = 0;
    while (rn > opt.residual_tol) {
        if (iter >= opt.max_iters)
            throw Error(ErrorCode::MaxIters, "no convergence in " + std::to_string(opt.max_iters) +
                                                 " Newton iterations (R=" + std::to_string(g.R) +
                                                 ")");
        for (int i = 1; i <= n; ++i) {
            const Mat2 J = jacobian(p, prof.u[i], prof.v[i]);
            D[i - 1] = {-2.0 / h2 - J.a11 - opt.jacobian_shift, -J.a12, -J.a21,
                        -2.0 / h2 - J.a22 - opt.jacobian_shift};
        }
        delta.assign(r.size(), 0.0);
        for (size_t k = 0; k < r.size(); ++k) delta[k] = -r[k];
        solve_block_tridiag(D, lower, upper, delta);

        double t = 1.0;
        bool accepted = false, positivity_blocked = false;
        double rn_t = 0.0;
        while (t >= opt.min_step) {
            double mn = 0.0;
            for (int i = 1; i <= n; ++i) {
                ut[i] = prof.u[i] + t * delta[2 * (i - 1)];
                vt[i] = prof.v[i] + t * delta[2 * (i - 1) + 1];
                mn = std::min(mn, std::min(ut[i], vt[i]));
            }
            if (mn < -opt.positivity_floor) {
                positivity_blocked = true;
                t *= 0.5;
                continue;
            }
            rn_t = eval_dirichlet(p, g, ut, vt, &r_trial);
            if (rn_t <= (1.0 - 1e-4 * t) * rn) {
                accepted = true;
                break;
            }
            positivity_blocked = false;
            t *= 0.5;
        }
        if (!accepted)
            throw Error(positivity_blocked ? ErrorCode::PositivityLost : ErrorCode::MaxIters,
                        "line search stalled at iteration " + std::to_string(iter + 1) +
                            " (R=" + std::to_string(g.R) + ")");
        prof.u.swap(ut);
        prof.v.swap(vt);
        r.swap(r_trial);
        ++iter;
        trace.push_back({stage, g.R, iter, rn, t});
        rn = rn_t;
    }
    trace.push_back({stage, g.R, iter, rn, 0.0});

    SolveResult res;
    res.profile = std::move(prof);
    res.iterations = iter;
    res.residual_sup = rn;
    return res;
}

}  // namespace

std::vector<double> residual(const Params& p, const Profile& prof) {
    validate(p);
    check_profile_shape(prof);
    std::vector<double> r;
    eval_dirichlet(p, prof.grid, prof.u, prof.v, &r);
    return r;
}

double residual_sup(const Params& p, const Profile& prof) {
    validate(p);
    check_profile_shape(prof);
    return eval_dirichlet(p, prof.grid, prof.u, prof.v, nullptr);
}

Profile initial_guess(const Equilibria& eq, const Grid& g, double k) {
    if (!(k > 0.0))
        throw Error(ErrorCode::InvalidParams, "guess steepness must be positive");
    const double m = 0.5 * (eq.a + eq.b);
    const double d = 0.5 * (eq.b - eq.a);
    Profile prof = make_profile(g);
    const int N = g.n_nodes();
    // Fill the left half and mirror it so v[i] = u[N-1-i] holds exactly,
    // independent of rounding in the node abscissas or in tanh.
    for (int i = 0; 2 * i <= N - 1; ++i) {
        const double ramp = std::tanh(k * g.x(i));
        const double ui = m + d * ramp;
        const double vi = m - d * ramp;
        prof.u[i] = ui;
        prof.v[i] = vi;
        prof.u[N - 1 - i] = vi;
        prof.v[N - 1 - i] = ui;
    }
    prof.u[0] = eq.a;
    prof.v[0] = eq.b;
    prof.u[N - 1] = eq.b;
    prof.v[N - 1] = eq.a;
    return prof;
}

double default_steepness(const Params& p) {
    if (classify(p) == Regime::ConstantOnly) return 0.5;
    const LinearData ld = linear_data(p);
    return ld.lambda_minus > 1e-8 ? ld.lambda_minus : 0.5;
}

SolveResult solve_bvp(const Params& p, const Profile& guess, const SolveOptions& opt) {
    validate(p);
    check_profile_shape(guess);
    const Equilibria eq = equilibria(p);
    if (!eq.has_wall_pair)
        throw Error(ErrorCode::WrongRegime,
                    "Dirichlet wall problem needs omega/alpha <= 1/2 (ConstantOnly regime)");
    Profile prof = guess;
    const int N = prof.grid.n_nodes();
    prof.u[0] = eq.a;
    prof.v[0] = eq.b;
    prof.u[N - 1] = eq.b;
    prof.v[N - 1] = eq.a;

    std::vector<TraceEntry> trace;
    SolveResult res = newton_dirichlet(p, std::move(prof), opt, 0, trace);
    res.trace = std::move(trace);
    return res;
}

ContinuationSchedule default_schedule(const Params& p) {
    const LinearData ld = linear_data(p);
    if (ld.lambda_minus <= 1e-8)
        throw Error(ErrorCode::WrongRegime, "degenerate wall (omega/alpha = 1/2)");
    // Half-width: enough slow-rate decades for the tail fit, plus room for
    // the fast mode to clear the fit window. Near alpha = 2 the spectral gap
    // closes but the fast amplitude vanishes with it, hence the cap.
    const double gap = std::max(ld.lambda_plus - ld.lambda_minus, 0.4 * ld.lambda_minus);
    const double Rf = std::ceil(std::max({20.0, 22.0 / ld.lambda_minus, 18.0 / gap}));
    ContinuationSchedule sched;
    sched.R_values = {Rf / 8.0, Rf / 4.0, Rf / 2.0, Rf};
    // Spacing: the discretization error of the conserved quantity grows with
    // the potential curvature, roughly alpha^{3/2} h^2, so large alpha needs
    // finer grids to hold the |h| <= 1e-6 certificate line.
    sched.target_h = 0.01 / std::max({1.0, ld.lambda_minus, 0.5 * p.alpha});
    return sched;
}

ContinuationResult continue_in_R(const Params& p, const ContinuationSchedule& sched,
                                 const SolveOptions& opt, double guess_k) {
    const Regime regime = classify(p);
    if (regime == Regime::ConstantOnly)
        throw Error(ErrorCode::WrongRegime,
                    "omega/alpha >= 1/2 is the ConstantOnly regime; no wall to continue");
    if (sched.R_values.empty())
        throw Error(ErrorCode::InvalidParams, "empty continuation schedule");
    for (size_t s = 0; s < sched.R_values.size(); ++s)
        if (sched.R_values[s] <= 0.0 || (s > 0 && sched.R_values[s] <= sched.R_values[s - 1]))
            throw Error(ErrorCode::InvalidParams, "schedule half-widths must increase");

    const Equilibria eq = equilibria(p);
    const double mid = 0.5 * (eq.a + eq.b);
    const double k = guess_k > 0.0 ? guess_k : default_steepness(p);

    ContinuationResult out;
    // The rolling seed stays in solver coordinates; recentering shifts the
    // boundary layer and would poison the next stage, so only stored stages
    // are recentered.
    Profile seed = initial_guess(eq, make_grid(sched.R_values[0], sched.target_h), k);

    for (size_t s = 0; s < sched.R_values.size(); ++s) {
        const int stage = static_cast<int>(s) + 1;
        if (s > 0) {
            // Widen the box: resample inside the old one, wells outside.
            const Grid g = make_grid(sched.R_values[s], sched.target_h);
            const Profile& prev = seed;
            Profile next = make_profile(g);
            const int N = g.n_nodes();
            for (int j = 0; j < N; ++j) {
                const double x = g.x(j);
                if (std::abs(x) < prev.grid.R) {
                    auto [uj, vj] = sample(prev, x);
                    next.u[j] = uj;
                    next.v[j] = vj;
                } else {
                    next.u[j] = x < 0.0 ? eq.a : eq.b;
                    next.v[j] = x < 0.0 ? eq.b : eq.a;
                }
            }
            next.u[0] = eq.a;
            next.v[0] = eq.b;
            next.u[N - 1] = eq.b;
            next.v[N - 1] = eq.a;
            seed = std::move(next);
        }
        try {
            SolveResult stage_res = newton_dirichlet(p, std::move(seed), opt, stage, out.trace);
            out.iterations += stage_res.iterations;
            seed = std::move(stage_res.profile);
        } catch (const Error& e) {
            throw Error(e.code(), "stage " + std::to_string(stage) + ": " + e.what());
        }

        if (s + 1 < sched.R_values.size()) {
            out.stages.push_back(recenter(seed, mid));
            continue;
        }

        // Final stage: recentering spoils the discrete residual through the
        // resampling error, so alternate polish and recenter until the
        // midpoint pin and the tolerance hold together. Resampled values
        // carry rounding noise of a few ulp, and the second difference
        // amplifies that by 1/h^2; below that floor no recentered profile
        // can hold the Newton tolerance, so the acceptance threshold is
        // widened accordingly (values stay in (0,1), so the ulp scale is
        // machine epsilon).
        const double resample_floor =
            64.0 * std::numeric_limits<double>::epsilon() /
            (seed.grid.h() * seed.grid.h());
        const double accept_tol = std::max(opt.residual_tol, resample_floor);
        Profile cur = recenter(seed, mid);
        bool settled = false;
        for (int round = 0; round <= 5; ++round) {
            const int imid = (cur.grid.n_nodes() - 1) / 2;
            const double rn = eval_dirichlet(p, cur.grid, cur.u, cur.v, nullptr);
            if (rn <= accept_tol && std::abs(cur.u[imid] - mid) <= 1e-10) {
                settled = true;
                break;
            }
            if (round == 5) break;
            try {
                SolveResult pol = newton_dirichlet(p, std::move(cur), opt, stage, out.trace);
                out.iterations += pol.iterations;
                cur = recenter(pol.profile, mid);
            } catch (const Error& e) {
                throw Error(e.code(), "stage " + std::to_string(stage) + ": " + e.what());
            }
        }
        if (!settled)
            throw Error(ErrorCode::MaxIters,
                        "stage " + std::to_string(stage) +
                            ": recentering and polish did not stabilize");
        out.stages.push_back(std::move(cur));
    }
    out.residual_sup =
        eval_dirichlet(p, out.final().grid, out.final().u, out.final().v, nullptr);
    return out;
}

SolveResult relax_neumann(const Params& p, const Profile& guess, const SolveOptions& opt) {
    validate(p);
    check_profile_shape(guess);
    for (size_t i = 0; i < guess.u.size(); ++i)
        if (!(guess.u[i] > 0.0) || !(guess.v[i] > 0.0))
            throw Error(ErrorCode::InvalidParams, "relaxation guess must be strictly positive");
    Profile prof = guess;
    const Grid g = prof.grid;
    const int N = g.n_nodes();
    const double h2 = g.h() * g.h();

    std::vector<double> lower(N, 1.0 / h2), upper(N, 1.0 / h2);
    lower[0] = 0.0;
    upper[0] = 2.0 / h2;
    lower[N - 1] = 2.0 / h2;
    upper[N - 1] = 0.0;

    std::vector<double> r, r_trial, delta;
    std::vector<Mat2> D(N);
    std::vector<double> ut(prof.u), vt(prof.v);
    std::vector<TraceEntry> trace;

    double rn = eval_neumann(p, g, prof.u, prof.v, &r);
    double dtau = 1.0;  // pseudo-timestep; grows as the residual drops
    int iter = 0, attempts = 0;
    while (rn > opt.residual_tol) {
        if (iter >= opt.max_iters || ++attempts > 8 * opt.max_iters)
            throw Error(ErrorCode::MaxIters,
                        "relaxation did not converge in " + std::to_string(iter) + " steps");
        const double shift = opt.jacobian_shift + 1.0 / dtau;
        for (int i = 0; i < N; ++i) {
            const Mat2 J = jacobian(p, prof.u[i], prof.v[i]);
            D[i] = {-2.0 / h2 - J.a11 - shift, -J.a12, -J.a21, -2.0 / h2 - J.a22 - shift};
        }
        delta.assign(r.size(), 0.0);
        for (size_t k = 0; k < r.size(); ++k) delta[k] = -r[k];
        solve_block_tridiag(D, lower, upper, delta);

        double t = 1.0;
        bool accepted = false, positivity_blocked = false;
        double rn_t = 0.0;
        while (t >= opt.min_step) {
            double mn = 0.0;
            for (int i = 0; i < N; ++i) {
                ut[i] = prof.u[i] + t * delta[2 * i];
                vt[i] = prof.v[i] + t * delta[2 * i + 1];
                mn = std::min(mn, std::min(ut[i], vt[i]));
            }
            if (mn < -opt.positivity_floor) {
                positivity_blocked = true;
                t *= 0.5;
                continue;
            }
            rn_t = eval_neumann(p, g, ut, vt, &r_trial);
            if (rn_t <= (1.0 - 1e-4 * t) * rn) {
                accepted = true;
                break;
            }
            positivity_blocked = false;
            t *= 0.5;
        }
        if (!accepted) {
            dtau *= 0.1;  // stronger damping, retry the step
            if (dtau < 1e-10)
                throw Error(positivity_blocked ? ErrorCode::PositivityLost : ErrorCode::MaxIters,
                            "relaxation stalled");
            continue;
        }
        prof.u.swap(ut);
        prof.v.swap(vt);
        r.swap(r_trial);
        ++iter;
        trace.push_back({0, g.R, iter, rn, t});
        dtau = std::min(1e10, dtau * std::max(1.5, rn / std::max(rn_t, 1e-300)));
        rn = rn_t;
    }
    trace.push_back({0, g.R, iter, rn, 0.0});

    SolveResult res;
    res.profile = std::move(prof);
    res.iterations = iter;
    res.residual_sup = rn;
    res.trace = std::move(trace);
    return res;
}

}  // namespace wallforge
