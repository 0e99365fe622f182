#pragma once

#include <vector>

#include "wallforge/grid1d.hpp"
#include "wallforge/model.hpp"

namespace wallforge {

struct SolveOptions {
    double residual_tol = 1e-10;
    int max_iters = 60;
    double min_step = 9.5367431640625e-07;  // 2^-20, line search floor
    double positivity_floor = 1e-8;         // allowed undershoot below zero during iteration
    // Small diagonal shift in the Newton matrix. The translation mode of the
    // wall makes the Jacobian exponentially close to singular once
    // lambda_minus * R is large; the shift caps the amplification without
    // moving the converged profile.
    double jacobian_shift = 1e-8;
};

struct TraceEntry {
    int stage = 0;  // 1-based within a continuation, 0 for single solves
    double R = 0.0;
    int iter = 0;
    double residual = 0.0;  // sup-norm before the step; final entry has step = 0
    double step = 0.0;
};

struct SolveResult {
    Profile profile;
    int iterations = 0;
    double residual_sup = 0.0;
    std::vector<TraceEntry> trace;
};

// Discrete residual u'' - F at interior nodes, interleaved [ru_1, rv_1, ru_2, ...].
std::vector<double> residual(const Params& p, const Profile& prof);
double residual_sup(const Params& p, const Profile& prof);

// tanh ramp between the wells with slope k:
//   u_i = (a+b)/2 + ((b-a)/2) tanh(k x_i),  v_i mirrored,
// endpoints clamped to the exact wells. The natural choice is k = lambda_minus.
Profile initial_guess(const Equilibria& eq, const Grid& g, double k);

// Default guess slope: lambda_minus, or 0.5 where it degenerates.
double default_steepness(const Params& p);

// Damped Newton for the Dirichlet problem on the guess's grid. Needs the wall
// pair (omega/alpha <= 1/2); at the degenerate ratio 1/2 the constant profile
// converges trivially. Boundary values are pinned to the wells exactly.
SolveResult solve_bvp(const Params& p, const Profile& guess, const SolveOptions& opt = {});

struct ContinuationSchedule {
    std::vector<double> R_values;  // strictly increasing half-widths
    double target_h = 0.01;
};

// Four doubling stages. The final half-width covers 22 slow-rate lengths and
// enough spectral-gap lengths that the fast mode clears the tail-fit window;
// the spacing shrinks with both the slow rate and alpha so the conserved
// quantity stays resolved at large coupling.
ContinuationSchedule default_schedule(const Params& p);

struct ContinuationResult {
    std::vector<Profile> stages;  // recentered stage solutions, final polished
    std::vector<TraceEntry> trace;
    int iterations = 0;        // total accepted Newton steps
    double residual_sup = 0.0;  // of the final profile

    const Profile& final() const { return stages.back(); }
};

// Newton through increasing half-widths; each stage is recentered and
// extended by the well values to seed the next. The final profile is
// recentered and then re-polished so the midpoint pin and the residual
// tolerance hold simultaneously. Requires omega/alpha < 1/2 (omega = 0 is
// allowed; the wall pair still exists there).
ContinuationResult continue_in_R(const Params& p, const ContinuationSchedule& sched,
                                 const SolveOptions& opt = {}, double guess_k = 0.0);

// Zero-flux relaxation on [-R, R]: all nodes are unknowns, reflected ghost
// nodes at the ends, Newton with pseudo-timestep damping (the timestep grows
// as the residual drops). Finds constant states from generic positive data.
SolveResult relax_neumann(const Params& p, const Profile& guess, const SolveOptions& opt = {});

}  // namespace wallforge
