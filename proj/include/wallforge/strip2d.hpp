#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wallforge/grid1d.hpp"
#include "wallforge/model.hpp"

namespace wallforge {

// Periodic strip: x' runs over [0, L_prime) with n_prime columns and periodic
// wrap; x_N runs over [-R, R] with n_N rows, the first and last row held at
// the wall pair (a,b) and (b,a).
struct StripGrid {
    double L_prime = 16.0;
    double R = 20.0;
    int n_prime = 64;
    int n_N = 800;

    double hp() const { return L_prime / n_prime; }
    double hN() const { return 2.0 * R / (n_N - 1); }
    double xp(int j) const { return L_prime * (static_cast<double>(j) / n_prime); }
    double xN(int i) const {
        return R * (2.0 * static_cast<double>(i) / (n_N - 1) - 1.0);
    }
};

// Row-major field pair: index (i, j) = row i in x_N, column j in x'.
struct Field {
    StripGrid grid;
    std::vector<double> u, v;

    double& uat(int i, int j) { return u[static_cast<size_t>(i) * grid.n_prime + j]; }
    double& vat(int i, int j) { return v[static_cast<size_t>(i) * grid.n_prime + j]; }
    double uat(int i, int j) const { return u[static_cast<size_t>(i) * grid.n_prime + j]; }
    double vat(int i, int j) const { return v[static_cast<size_t>(i) * grid.n_prime + j]; }
};

struct StripOptions {
    double residual_tol = 1e-8;
    int max_iters = 40;
    double min_step = 9.5367431640625e-07;  // 2^-20
    double positivity_floor = 1e-8;
    double jacobian_shift = 1e-8;
    // Reuse the factorized Jacobian while a damped step still shrinks the
    // residual by at least this factor; refactorize otherwise.
    double refactor_ratio = 0.5;
};

struct StripResult {
    Field field;
    int iterations = 0;
    int factorizations = 0;
    double residual_sup = 0.0;
};

// Relaxes from the 1D wall profile extended constantly in x' plus a uniform
// random perturbation of the given amplitude on interior nodes (clipped to
// stay positive). The perturbation must stay within a tenth of the wall
// height. Zero amplitude returns the extended profile untouched.
StripResult relax_strip(const Params& p, const StripGrid& grid, double perturbation_amplitude,
                        std::uint64_t seed, const StripOptions& opt = {});

double strip_residual_sup(const Params& p, const Field& f);

struct RowStats {
    double max_variance_u = 0.0;  // max over rows of the x'-variance
    double max_variance_v = 0.0;
    double max_spread_u = 0.0;  // max over rows of (max - min) over x'
    double max_spread_v = 0.0;
};
RowStats row_stats(const Field& f);

// Column-wise monotonicity in x_N with the same plateau treatment as the 1D
// certifier, scaled to the relaxation tolerance: pairs within well_gap of a
// column's end values are exempt from the strict test and only bounded by the
// no-decrease slack.
struct ColumnMonotonicity {
    bool u_increasing = false;
    bool v_decreasing = false;
    double min_core_diff_u = 0.0;
    double max_core_diff_v = 0.0;
};
ColumnMonotonicity column_monotonicity(const Field& f, double well_gap = 1e-7,
                                       double slack = 1e-8);

// Averages each row over x' into a 1D profile on the strip's x_N nodes.
Profile xprime_average(const Field& f);

void write_field_csv(const std::string& path, const Field& f);

}  // namespace wallforge
