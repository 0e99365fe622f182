#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wallforge/model.hpp"

namespace wallforge {

// Uniform node set on [-R, R] including both endpoints. Node positions are
// computed from (R, n_interior) directly so the endpoints are exact and no
// rounding accumulates along the line.
struct Grid {
    double R = 10.0;
    int n_interior = 0;

    int n_nodes() const { return n_interior + 2; }
    double h() const { return 2.0 * R / (n_interior + 1); }
    double x(int i) const {
        return R * (2.0 * static_cast<double>(i) / static_cast<double>(n_interior + 1) - 1.0);
    }
};

// Grid with spacing <= target_h and an even interval count, so x = 0 is a node.
Grid make_grid(double R, double target_h);

// Node values of (u, v) on a grid; u[0], u.back() carry the boundary data.
struct Profile {
    Grid grid;
    std::vector<double> u, v;
};

Profile make_profile(const Grid& g);

// First derivative at every node: centered differences inside, second-order
// one-sided stencils at the two endpoints.
std::pair<std::vector<double>, std::vector<double>> first_derivative(const Profile& prof);

// Second derivative at interior nodes (size n_interior each).
std::pair<std::vector<double>, std::vector<double>> second_derivative(const Profile& prof);

// First integral h evaluated at every node from the discrete derivatives.
std::vector<double> hamiltonian_nodes(const Params& p, const Profile& prof);

// Trapezoid rule over the energy density.
double energy(const Params& p, const Profile& prof);

// Translate the profile so that u crosses `midpoint` at x = 0. The crossing
// cell is located by a linear-interpolation scan, then the crossing of the
// cubic interpolant is refined by bisection; resampling uses the same cubic,
// so the resampled u(0) hits `midpoint` to root-solve accuracy. Values
// shifted past the ends are extended with the boundary data. Throws
// Error(NotACrossing) when u never crosses `midpoint`.
Profile recenter(const Profile& prof, double midpoint);

// Cubic evaluation of the profile at arbitrary x in [-R, R] (clamped outside).
std::pair<double, double> sample(const Profile& prof, double x);

// CSV with header "x,u,v" and 17 significant digits per value.
void write_profile_csv(const std::string& path, const Profile& prof);
Profile read_profile_csv(const std::string& path);

}  // namespace wallforge
