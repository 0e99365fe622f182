#include "wallforge/model.hpp"

#include <cmath>

#include "wallforge/errors.hpp"

namespace wallforge {

void validate(const Params& p) {
    if (!std::isfinite(p.alpha) || !std::isfinite(p.omega))
        throw Error(ErrorCode::InvalidParams, "alpha and omega must be finite");
    if (p.alpha <= 0.0)
        throw Error(ErrorCode::InvalidParams, "alpha must be positive");
    if (p.omega < 0.0)
        throw Error(ErrorCode::InvalidParams, "omega must be nonnegative");
}

Regime classify(const Params& p) {
    validate(p);
    if (p.omega == 0.0) return Regime::OmegaZero;
    if (p.omega / p.alpha >= 0.5) return Regime::ConstantOnly;
    return Regime::Heteroclinic;
}

Equilibria equilibria(const Params& p) {
    validate(p);
    Equilibria eq;
    eq.c = std::sqrt((1.0 + p.omega) / (2.0 + p.alpha));
    const double rho = p.omega / p.alpha;
    if (rho > 0.5) {
        eq.a = eq.b = eq.c;
        eq.has_wall_pair = false;
        return eq;
    }
    const double s = std::sqrt(std::max(0.0, 1.0 - 4.0 * rho * rho));
    eq.a = std::sqrt((1.0 - s) / 2.0);
    eq.b = std::sqrt((1.0 + s) / 2.0);
    eq.has_wall_pair = true;
    return eq;
}

std::array<double, 2> rhs(const Params& p, double u, double v) {
    // Grouping u*u + v*v keeps the swap (u,v) -> (v,u) exact in floating point.
    const double A = 1.0 - (u * u + v * v);
    const double B = p.omega - p.alpha * u * v;
    return {-u * A - v * B, -v * A - u * B};
}

Mat2 jacobian(const Params& p, double u, double v) {
    Mat2 j;
    j.a11 = 3.0 * u * u + (p.alpha + 1.0) * v * v - 1.0;
    j.a22 = 3.0 * v * v + (p.alpha + 1.0) * u * u - 1.0;
    j.a12 = j.a21 = 2.0 * (p.alpha + 1.0) * u * v - p.omega;
    return j;
}

static double potential(const Params& p, double u, double v) {
    const double A = 1.0 - (u * u + v * v);
    const double g = u * v - p.omega / p.alpha;
    return 0.25 * A * A + 0.5 * p.alpha * g * g;
}

double hamiltonian(const Params& p, double u, double v, double du, double dv) {
    return 0.5 * (du * du + dv * dv) - potential(p, u, v);
}

double energy_density(const Params& p, double u, double v, double du, double dv) {
    return 0.5 * (du * du + dv * dv) + potential(p, u, v);
}

LinearData linear_data(const Params& p) {
    validate(p);
    const double rho = p.omega / p.alpha;
    if (rho >= 0.5)
        throw Error(ErrorCode::WrongRegime,
                    "far-field linearization degenerates at omega/alpha >= 1/2");
    const Equilibria eq = equilibria(p);
    LinearData ld;
    const double a2 = eq.a * eq.a, b2 = eq.b * eq.b;
    ld.a11 = 2.0 * b2 + p.alpha * a2;
    ld.a22 = 2.0 * a2 + p.alpha * b2;
    ld.a12 = -p.omega * (2.0 + p.alpha) / p.alpha;

    const double am2 = p.alpha - 2.0;
    const double disc = std::sqrt(am2 * am2 + 32.0 * p.omega * p.omega / p.alpha);
    ld.lambda_minus = std::sqrt(std::max(0.0, 0.5 * ((p.alpha + 2.0) - disc)));
    ld.lambda_plus = std::sqrt(0.5 * ((p.alpha + 2.0) + disc));

    if (p.omega > 0.0) {
        const double s = std::sqrt(std::max(0.0, 1.0 - 4.0 * rho * rho));
        ld.mu = 2.0 * p.omega * (p.alpha + 2.0) / (p.alpha * (am2 * s + disc));
    }
    return ld;
}

}  // namespace wallforge
