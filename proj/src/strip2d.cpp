#include "wallforge/strip2d.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wallforge/errors.hpp"
#include "wallforge/solver1d.hpp"

namespace wallforge {
namespace {

// Deterministic stream for the seeded perturbation; the usual 64-bit
// split-mix recurrence, mapped to [0, 1).
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

void validate_grid(const StripGrid& g) {
    if (!(g.L_prime > 0.0) || !(g.R > 0.0) || g.n_prime < 4 || g.n_N < 5)
        throw Error(ErrorCode::InvalidParams, "strip grid needs positive extents, >=4 columns "
                                              "and >=5 rows");
}

// Interior-row residual, interleaved (u, v) per node; returns the sup norm.
double eval_strip(const Params& p, const Field& f, std::vector<double>* out) {
    const StripGrid& g = f.grid;
    const int np = g.n_prime, nn = g.n_N;
    const double ihp2 = 1.0 / (g.hp() * g.hp()), ihN2 = 1.0 / (g.hN() * g.hN());
    if (out) out->resize(2 * static_cast<size_t>(nn - 2) * np);
    double sup = 0.0;
    for (int i = 1; i + 1 < nn; ++i) {
        for (int j = 0; j < np; ++j) {
            const int jl = j == 0 ? np - 1 : j - 1;
            const int jr = j + 1 == np ? 0 : j + 1;
            const double u = f.uat(i, j), v = f.vat(i, j);
            const auto F = rhs(p, u, v);
            const double ru = (f.uat(i - 1, j) - 2.0 * u + f.uat(i + 1, j)) * ihN2 +
                              (f.uat(i, jl) - 2.0 * u + f.uat(i, jr)) * ihp2 - F[0];
            const double rv = (f.vat(i - 1, j) - 2.0 * v + f.vat(i + 1, j)) * ihN2 +
                              (f.vat(i, jl) - 2.0 * v + f.vat(i, jr)) * ihp2 - F[1];
            if (out) {
                const size_t k = 2 * (static_cast<size_t>(i - 1) * np + j);
                (*out)[k] = ru;
                (*out)[k + 1] = rv;
            }
            sup = std::max(sup, std::max(std::abs(ru), std::abs(rv)));
        }
    }
    return sup;
}

using SpMat = Eigen::SparseMatrix<double>;

void assemble(const Params& p, const Field& f, double shift, SpMat& A) {
    const StripGrid& g = f.grid;
    const int np = g.n_prime, nn = g.n_N;
    const double ihp2 = 1.0 / (g.hp() * g.hp()), ihN2 = 1.0 / (g.hN() * g.hN());
    const int M = (nn - 2) * np;

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(M) * 12);
    const auto idx = [np](int i, int j) { return (i - 1) * np + j; };
    for (int i = 1; i + 1 < nn; ++i) {
        for (int j = 0; j < np; ++j) {
            const int k = idx(i, j);
            const int jl = j == 0 ? np - 1 : j - 1;
            const int jr = j + 1 == np ? 0 : j + 1;
            const Mat2 J = jacobian(p, f.uat(i, j), f.vat(i, j));
            const double diag = -2.0 * ihN2 - 2.0 * ihp2 - shift;
            for (int c = 0; c < 2; ++c) {
                const int row = 2 * k + c;
                trip.emplace_back(row, row, diag - (c == 0 ? J.a11 : J.a22));
                trip.emplace_back(row, 2 * k + (1 - c), -(c == 0 ? J.a12 : J.a21));
                trip.emplace_back(row, 2 * idx(i, jl) + c, ihp2);
                trip.emplace_back(row, 2 * idx(i, jr) + c, ihp2);
                if (i > 1) trip.emplace_back(row, 2 * idx(i - 1, j) + c, ihN2);
                if (i + 2 < nn) trip.emplace_back(row, 2 * idx(i + 1, j) + c, ihN2);
            }
        }
    }
    A.resize(2 * M, 2 * M);
    A.setFromTriplets(trip.begin(), trip.end());
}

}  // namespace

double strip_residual_sup(const Params& p, const Field& f) {
    validate(p);
    validate_grid(f.grid);
    return eval_strip(p, f, nullptr);
}

StripResult relax_strip(const Params& p, const StripGrid& grid, double perturbation_amplitude,
                        std::uint64_t seed, const StripOptions& opt) {
    validate(p);
    validate_grid(grid);
    const Equilibria eq = equilibria(p);
    if (!eq.has_wall_pair || classify(p) == Regime::ConstantOnly)
        throw Error(ErrorCode::WrongRegime, "strip relaxation needs the wall regime");
    if (perturbation_amplitude < 0.0 || perturbation_amplitude > 0.1 * (eq.b - eq.a))
        throw Error(ErrorCode::InvalidParams,
                    "perturbation amplitude must stay within a tenth of the wall height");

    // 1D wall on the strip's x_N node set; the strip seeds from it and the
    // x'-average is compared back against it.
    const Grid g1{grid.R, grid.n_N - 2};
    SolveOptions sopt;
    const Profile wall =
        solve_bvp(p, initial_guess(eq, g1, default_steepness(p)), sopt).profile;

    StripResult res;
    Field& f = res.field;
    f.grid = grid;
    const int np = grid.n_prime, nn = grid.n_N;
    f.u.resize(static_cast<size_t>(np) * nn);
    f.v.resize(static_cast<size_t>(np) * nn);
    for (int i = 0; i < nn; ++i)
        for (int j = 0; j < np; ++j) {
            f.uat(i, j) = wall.u[i];
            f.vat(i, j) = wall.v[i];
        }

    if (perturbation_amplitude > 0.0) {
        SplitMix64 rng(seed);
        for (int i = 1; i + 1 < nn; ++i)
            for (int j = 0; j < np; ++j) {
                f.uat(i, j) = std::max(
                    f.uat(i, j) + perturbation_amplitude * (2.0 * rng.uniform() - 1.0), 1e-12);
                f.vat(i, j) = std::max(
                    f.vat(i, j) + perturbation_amplitude * (2.0 * rng.uniform() - 1.0), 1e-12);
            }
    }

    std::vector<double> r, r_trial;
    double rn = eval_strip(p, f, &r);
    if (rn <= opt.residual_tol) {
        res.residual_sup = rn;
        return res;
    }

    SpMat A;
    Eigen::SparseLU<SpMat> lu;
    bool analyzed = false, fresh = false, want_refactor = true;
    const size_t M = r.size();
    Eigen::VectorXd rhs_vec(M), delta(M);
    std::vector<double> ut(f.u), vt(f.v);

    int iter = 0;
    while (rn > opt.residual_tol) {
        if (iter >= opt.max_iters)
            throw Error(ErrorCode::MaxIters,
                        "strip relaxation did not converge in " + std::to_string(opt.max_iters) +
                            " iterations");
        if (want_refactor) {
            assemble(p, f, opt.jacobian_shift, A);
            if (!analyzed) {
                lu.analyzePattern(A);
                analyzed = true;
            }
            lu.factorize(A);
            if (lu.info() != Eigen::Success)
                throw Error(ErrorCode::SingularJacobian, "strip Jacobian factorization failed");
            ++res.factorizations;
            fresh = true;
            want_refactor = false;
        }
        for (size_t k = 0; k < M; ++k) rhs_vec[static_cast<Eigen::Index>(k)] = -r[k];
        delta = lu.solve(rhs_vec);

        double t = 1.0;
        bool accepted = false, positivity_blocked = false;
        double rn_t = 0.0;
        while (t >= opt.min_step) {
            double mn = 0.0;
            for (int i = 1; i + 1 < nn; ++i)
                for (int j = 0; j < np; ++j) {
                    const size_t k = 2 * (static_cast<size_t>(i - 1) * np + j);
                    const size_t node = static_cast<size_t>(i) * np + j;
                    ut[node] = f.u[node] + t * delta[static_cast<Eigen::Index>(k)];
                    vt[node] = f.v[node] + t * delta[static_cast<Eigen::Index>(k + 1)];
                    mn = std::min(mn, std::min(ut[node], vt[node]));
                }
            if (mn < -opt.positivity_floor) {
                positivity_blocked = true;
                t *= 0.5;
                continue;
            }
            Field trial;
            trial.grid = grid;
            trial.u = ut;
            trial.v = vt;
            rn_t = eval_strip(p, trial, &r_trial);
            if (rn_t <= (1.0 - 1e-4 * t) * rn) {
                accepted = true;
                break;
            }
            positivity_blocked = false;
            t *= 0.5;
        }
        if (!accepted) {
            if (!fresh) {
                want_refactor = true;  // stale direction; rebuild and retry
                continue;
            }
            throw Error(positivity_blocked ? ErrorCode::PositivityLost : ErrorCode::MaxIters,
                        "strip line search stalled at iteration " + std::to_string(iter + 1));
        }
        f.u.swap(ut);
        f.v.swap(vt);
        r.swap(r_trial);
        fresh = false;
        if (rn_t > opt.refactor_ratio * rn) want_refactor = true;
        rn = rn_t;
        ++iter;
    }
    res.iterations = iter;
    res.residual_sup = rn;
    return res;
}

RowStats row_stats(const Field& f) {
    RowStats s;
    const int np = f.grid.n_prime, nn = f.grid.n_N;
    for (int i = 0; i < nn; ++i) {
        for (const bool comp_u : {true, false}) {
            double mean = 0.0, mn = 1e300, mx = -1e300;
            for (int j = 0; j < np; ++j) {
                const double x = comp_u ? f.uat(i, j) : f.vat(i, j);
                mean += x;
                mn = std::min(mn, x);
                mx = std::max(mx, x);
            }
            mean /= np;
            double var = 0.0;
            for (int j = 0; j < np; ++j) {
                const double d = (comp_u ? f.uat(i, j) : f.vat(i, j)) - mean;
                var += d * d;
            }
            var /= np;
            if (comp_u) {
                s.max_variance_u = std::max(s.max_variance_u, var);
                s.max_spread_u = std::max(s.max_spread_u, mx - mn);
            } else {
                s.max_variance_v = std::max(s.max_variance_v, var);
                s.max_spread_v = std::max(s.max_spread_v, mx - mn);
            }
        }
    }
    return s;
}

ColumnMonotonicity column_monotonicity(const Field& f, double well_gap, double slack) {
    ColumnMonotonicity m;
    const int np = f.grid.n_prime, nn = f.grid.n_N;
    double u_core_min = 1e300, v_core_max = -1e300;
    double u_global_min = 1e300, v_global_max = -1e300;
    bool u_core = false, v_core = false;
    for (int j = 0; j < np; ++j) {
        const double u0 = f.uat(0, j), uN = f.uat(nn - 1, j);
        const double v0 = f.vat(0, j), vN = f.vat(nn - 1, j);
        for (int i = 0; i + 1 < nn; ++i) {
            const double du = f.uat(i + 1, j) - f.uat(i, j);
            const double dv = f.vat(i + 1, j) - f.vat(i, j);
            u_global_min = std::min(u_global_min, du);
            v_global_max = std::max(v_global_max, dv);
            if (std::min(f.uat(i, j) - u0, uN - f.uat(i + 1, j)) > well_gap) {
                u_core = true;
                u_core_min = std::min(u_core_min, du);
            }
            if (std::min(v0 - f.vat(i, j), f.vat(i + 1, j) - vN) > well_gap) {
                v_core = true;
                v_core_max = std::max(v_core_max, dv);
            }
        }
    }
    m.min_core_diff_u = u_core ? u_core_min : 0.0;
    m.max_core_diff_v = v_core ? v_core_max : 0.0;
    m.u_increasing = u_core && u_core_min > 0.0 && u_global_min >= -slack;
    m.v_decreasing = v_core && v_core_max < 0.0 && v_global_max <= slack;
    return m;
}

Profile xprime_average(const Field& f) {
    Profile prof;
    prof.grid = Grid{f.grid.R, f.grid.n_N - 2};
    const int np = f.grid.n_prime, nn = f.grid.n_N;
    prof.u.resize(nn);
    prof.v.resize(nn);
    for (int i = 0; i < nn; ++i) {
        double su = 0.0, sv = 0.0;
        for (int j = 0; j < np; ++j) {
            su += f.uat(i, j);
            sv += f.vat(i, j);
        }
        prof.u[i] = su / np;
        prof.v[i] = sv / np;
    }
    return prof;
}

void write_field_csv(const std::string& path, const Field& f) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw Error(ErrorCode::ParseError, "cannot open " + path + " for writing");
    std::fputs("xp,xN,u,v\n", fp);
    char line[160];
    for (int i = 0; i < f.grid.n_N; ++i)
        for (int j = 0; j < f.grid.n_prime; ++j) {
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", f.grid.xp(j),
                          f.grid.xN(i), f.uat(i, j), f.vat(i, j));
            std::fputs(line, fp);
        }
    std::fclose(fp);
}

}  // namespace wallforge
