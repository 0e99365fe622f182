#pragma once

#include <array>
#include <optional>

namespace wallforge {

// Two-component coupled scalar field model on the line:
//
//   u'' = -u (1 - u^2 - v^2) - v (omega - alpha u v) =: F1(u, v)
//   v'' = -v (1 - u^2 - v^2) - u (omega - alpha u v) =: F2(u, v)
//
// with alpha > 0, omega >= 0. The far-field states are positive constant
// solutions. For omega/alpha < 1/2 two symmetric wells (a, b) and (b, a)
// exist with a^2 + b^2 = 1, a b = omega/alpha, and a domain wall connects
// them; at omega/alpha >= 1/2 only the diagonal state (c, c) survives.

struct Params {
    double alpha = 1.0;
    double omega = 0.0;
};

enum class Regime {
    Heteroclinic,  // 0 < omega/alpha < 1/2: wells (a,b), (b,a) and a wall between them
    OmegaZero,     // omega = 0: wells degenerate to (0,1), (1,0)
    ConstantOnly,  // omega/alpha >= 1/2: only the diagonal state (c,c)
};

struct Equilibria {
    double a = 0.0;     // smaller well component, a = sqrt((1 - s)/2)
    double b = 1.0;     // larger well component,  b = sqrt((1 + s)/2)
    double c = 0.0;     // diagonal state, c = sqrt((1 + omega)/(2 + alpha))
    bool has_wall_pair = true;  // false iff omega/alpha > 1/2 strictly
};

struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;
};

// Far-field linearization at the wells. The symmetric matrix
//   A = [ 2b^2 + alpha a^2      -omega (2+alpha)/alpha ]
//       [ -omega (2+alpha)/alpha    2a^2 + alpha b^2   ]
// has eigenvalues lambda_-^2 <= lambda_+^2 with eigenvectors (1, mu) and
// (-mu, 1); the wall tail decays like (l1, l2) e^{-lambda_- x} with
// l2/l1 = mu.
struct LinearData {
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
    std::optional<double> mu;  // absent at omega = 0: the limit depends on alpha
};

// Throws Error(InvalidParams) unless alpha > 0, omega >= 0 and both finite.
void validate(const Params& p);

Regime classify(const Params& p);

// Closed-form equilibria. For omega/alpha > 1/2 strictly the wall pair does
// not exist: a and b are set to c and has_wall_pair is false (never NaN).
Equilibria equilibria(const Params& p);

// Right-hand sides (F1, F2); swap-symmetric: rhs(u,v) = swap(rhs(v,u)).
std::array<double, 2> rhs(const Params& p, double u, double v);

// d(F1,F2)/d(u,v); symmetric.
Mat2 jacobian(const Params& p, double u, double v);

// First integral along x: h = (du^2 + dv^2)/2 - W(u, v) where
// W = (1 - u^2 - v^2)^2/4 + (alpha/2)(uv - omega/alpha)^2.
// Constant in x for any solution and zero on the wall.
double hamiltonian(const Params& p, double u, double v, double du, double dv);

// Pointwise energy density e = (du^2 + dv^2)/2 + W(u, v); e + h = du^2 + dv^2.
double energy_density(const Params& p, double u, double v, double du, double dv);

// Requires omega/alpha < 1/2 (at equality lambda_minus degenerates to 0).
LinearData linear_data(const Params& p);

}  // namespace wallforge
