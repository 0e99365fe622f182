#pragma once

// Independent cross-checks used by the tests only. Everything here is
// computed by a different route than the library takes: the eigen solver is
// a Jacobi rotation instead of the closed-form discriminant, and the exact
// wall at alpha = 2 comes from the scalar reduction of the system.

#include <cmath>
#include <utility>

#include "wallforge/grid1d.hpp"

namespace oracle {

// Eigenvalues of the symmetric matrix [[a11, a12], [a12, a22]] by the single
// rotation that annihilates the off-diagonal entry. Returns {lo, hi}.
inline std::pair<double, double> sym_eigs(double a11, double a12, double a22) {
    const double theta = 0.5 * std::atan2(2.0 * a12, a11 - a22);
    const double c = std::cos(theta), s = std::sin(theta);
    const double e1 = c * c * a11 + 2.0 * s * c * a12 + s * s * a22;
    const double e2 = s * s * a11 - 2.0 * s * c * a12 + c * c * a22;
    return {std::min(e1, e2), std::max(e1, e2)};
}

// Component ratio of the eigenvector (1, mu) for eigenvalue lam of the same
// matrix: (a11 - lam) + a12 mu = 0.
inline double eigvec_ratio(double a11, double a12, double lam) {
    return (lam - a11) / a12;
}

// At alpha = 2 the sum u + v is constant and the difference solves a scalar
// Allen-Cahn equation, so the wall is an explicit tanh:
//   u = (sqrt(1+w) + sqrt(1-w) tanh(kappa x)) / 2,  v mirrored,
//   kappa = sqrt((1-w)/2).
inline std::pair<double, double> exact_alpha2(double omega, double x) {
    const double sp = std::sqrt(1.0 + omega);
    const double sm = std::sqrt(1.0 - omega);
    const double t = std::tanh(std::sqrt((1.0 - omega) / 2.0) * x);
    return {0.5 * (sp + sm * t), 0.5 * (sp - sm * t)};
}

inline wallforge::Profile exact_alpha2_profile(double omega, const wallforge::Grid& g) {
    wallforge::Profile prof = wallforge::make_profile(g);
    for (int i = 0; i < g.n_nodes(); ++i) {
        auto [u, v] = exact_alpha2(omega, g.x(i));
        prof.u[i] = u;
        prof.v[i] = v;
    }
    return prof;
}

// Symmetric sub-profile on [-R_new, R_new]; node spacing is preserved, so
// the result is again a valid uniform profile.
inline wallforge::Profile crop(const wallforge::Profile& prof, double R_new) {
    const wallforge::Grid& g = prof.grid;
    int keep = 0;
    while (keep < g.n_nodes() && g.x(keep) < -R_new - 1e-12) ++keep;
    const int last = g.n_nodes() - 1 - keep;
    wallforge::Grid sub{g.x(last), last - keep - 1};
    wallforge::Profile out = wallforge::make_profile(sub);
    for (int i = keep; i <= last; ++i) {
        out.u[i - keep] = prof.u[i];
        out.v[i - keep] = prof.v[i];
    }
    return out;
}

}  // namespace oracle
