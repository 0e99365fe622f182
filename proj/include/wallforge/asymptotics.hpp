#pragma once

#include "wallforge/grid1d.hpp"
#include "wallforge/model.hpp"

namespace wallforge {

// Window of nodes used by a tail fit: x in [0.3 R, 0.8 R], truncated where
// the ordinate falls below 1e-12 so the fit never touches rounding plateaus.
struct FitWindow {
    double x_lo = 0.0;
    double x_hi = 0.0;
    int count = 0;
};

// Right-tail decay of a wall profile. Free log-linear fits give the rates;
// amplitudes are refit with the slope frozen to -lambda_minus so that their
// ratio can be compared with the eigenvector ratio mu.
struct TailFit {
    double rate_u = 0.0;  // free fit of ln(b - u)
    double rate_v = 0.0;  // free fit of ln(v - a)
    double ell1 = 0.0;    // amplitude of b - u at frozen slope
    double ell2 = 0.0;    // amplitude of v - a at frozen slope
    double lambda_minus_theory = 0.0;
    double mu_theory = 0.0;
    double residual_rms = 0.0;  // worse of the two free-fit rms values
    FitWindow window;
    bool unreliable = false;  // residual_rms > 0.05
};

// Needs omega > 0 (strict heteroclinic regime) and a profile wide enough for
// a 20-node window. Throws TailTooShort / NonPositiveTail on bad windows.
TailFit fit_decay(const Params& p, const Profile& prof);

// One-sided rate cap for the u-tail: b - u decays no faster than
// exp(-sqrt(2) b x). Reports the fitted rate against the cap and the minimum
// of (b - u) e^{sqrt(2) b x} over the window (positive iff the bound holds
// with a uniform constant on the window).
struct LowerBoundCheck {
    double rate_u = 0.0;
    double rate_cap = 0.0;  // sqrt(2) * b
    double epsilon = 0.0;
    bool pass = false;
    FitWindow window;
};
LowerBoundCheck check_lower_bound(const Params& p, const Profile& prof);

// Decoupled tails at omega = 0, where the wells are (0, 1) and (1, 0):
// v decays at rate sqrt(alpha) with free amplitude; the 1 - u tail switches
// branch at alpha = 1/2 because the v^2 forcing resonates with the linear
// rate sqrt(2) there.
enum class OmegaZeroBranch {
    AlphaAboveHalf,  // 1 - u ~ l1 e^{-sqrt(2) x}, l1 free
    AlphaBelowHalf,  // 1 - u ~ [(alpha+1) l2^2 / (2 (1-2 alpha))] e^{-2 sqrt(alpha) x}
    AlphaEqualHalf,  // 1 - u ~ [3 l2^2 / (4 sqrt(2))] x e^{-sqrt(2) x}
};

struct OmegaZeroReport {
    double alpha = 0.0;
    OmegaZeroBranch branch = OmegaZeroBranch::AlphaAboveHalf;
    double rate_v = 0.0;              // free fit; expected sqrt(alpha)
    double ell2_tilde = 0.0;          // v amplitude at frozen slope -sqrt(alpha)
    double rate_u = 0.0;              // free fit of ln(1 - u)
    double rate_u_expected = 0.0;     // sqrt(2) or 2 sqrt(alpha); sqrt(2) nominal at 1/2
    double amplitude_u = 0.0;         // leading u-tail amplitude for the branch
    double amplitude_expected = 0.0;  // closed form where one exists, else NaN
    bool relation_ok = true;          // amplitude within 5% where defined
    double residual_rms = 0.0;
    FitWindow window;  // u-component window (v truncates on its own)
};
OmegaZeroReport omega_zero_asymptotics(double alpha, const Profile& prof);

}  // namespace wallforge
