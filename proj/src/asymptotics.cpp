#include "wallforge/asymptotics.hpp"

#include <cmath>
#include <vector>

#include "wallforge/errors.hpp"

namespace wallforge {
namespace {

constexpr double kOrdinateFloor = 1e-12;
constexpr int kMinWindowNodes = 20;

struct Tail {
    std::vector<double> x;
    std::vector<double> ly;  // ln(ordinate)
};

// Window nodes in [0.3 R, 0.8 R]; stops at the first ordinate below the
// floor so rounding plateaus never enter a fit.
template <class Ord>
Tail gather(const Profile& prof, Ord ord) {
    const Grid& g = prof.grid;
    Tail t;
    bool first = true;
    for (int i = 0; i < g.n_nodes(); ++i) {
        const double x = g.x(i);
        if (x < 0.3 * g.R) continue;
        if (x > 0.8 * g.R) break;
        const double y = ord(i);
        if (first && y <= 0.0)
            throw Error(ErrorCode::NonPositiveTail, "tail ordinate not positive at window start");
        first = false;
        if (y <= kOrdinateFloor) break;
        t.x.push_back(x);
        t.ly.push_back(std::log(y));
    }
    if (static_cast<int>(t.x.size()) < kMinWindowNodes)
        throw Error(ErrorCode::TailTooShort, "fewer than 20 usable nodes in the fit window");
    return t;
}

struct LineFit {
    double slope = 0.0, intercept = 0.0, rms = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    f.slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / static_cast<double>(n);
    double ss = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double e = y[i] - f.intercept - f.slope * x[i];
        ss += e * e;
    }
    f.rms = std::sqrt(ss / static_cast<double>(n));
    return f;
}

double frozen_amplitude(const Tail& t, double rate) {
    double acc = 0.0;
    for (size_t i = 0; i < t.x.size(); ++i) acc += t.ly[i] + rate * t.x[i];
    return std::exp(acc / static_cast<double>(t.x.size()));
}

FitWindow window_of(const Tail& t) {
    return {t.x.front(), t.x.back(), static_cast<int>(t.x.size())};
}

}  // namespace

TailFit fit_decay(const Params& p, const Profile& prof) {
    if (classify(p) != Regime::Heteroclinic)
        throw Error(ErrorCode::WrongRegime,
                    "tail fit against mu needs 0 < omega/alpha < 1/2 (use the omega = 0 report "
                    "for decoupled tails)");
    const Equilibria eq = equilibria(p);
    const LinearData ld = linear_data(p);

    // Joint truncation: both ordinates share the rate lambda_minus, so one
    // window keeps the amplitude ratio meaningful.
    const Grid& g = prof.grid;
    Tail tu, tv;
    bool first = true;
    for (int i = 0; i < g.n_nodes(); ++i) {
        const double x = g.x(i);
        if (x < 0.3 * g.R) continue;
        if (x > 0.8 * g.R) break;
        const double yu = eq.b - prof.u[i];
        const double yv = prof.v[i] - eq.a;
        if (first && (yu <= 0.0 || yv <= 0.0))
            throw Error(ErrorCode::NonPositiveTail, "tail ordinate not positive at window start");
        first = false;
        if (yu <= kOrdinateFloor || yv <= kOrdinateFloor) break;
        tu.x.push_back(x);
        tu.ly.push_back(std::log(yu));
        tv.x.push_back(x);
        tv.ly.push_back(std::log(yv));
    }
    if (static_cast<int>(tu.x.size()) < kMinWindowNodes)
        throw Error(ErrorCode::TailTooShort, "fewer than 20 usable nodes in the fit window");

    const LineFit fu = fit_line(tu.x, tu.ly);
    const LineFit fv = fit_line(tv.x, tv.ly);

    TailFit fit;
    fit.rate_u = -fu.slope;
    fit.rate_v = -fv.slope;
    fit.ell1 = frozen_amplitude(tu, ld.lambda_minus);
    fit.ell2 = frozen_amplitude(tv, ld.lambda_minus);
    fit.lambda_minus_theory = ld.lambda_minus;
    fit.mu_theory = *ld.mu;
    fit.residual_rms = std::max(fu.rms, fv.rms);
    fit.window = window_of(tu);
    fit.unreliable = fit.residual_rms > 0.05;
    return fit;
}

LowerBoundCheck check_lower_bound(const Params& p, const Profile& prof) {
    validate(p);
    const Equilibria eq = equilibria(p);
    if (!eq.has_wall_pair)
        throw Error(ErrorCode::WrongRegime, "lower bound check needs the wall pair");
    const Tail tu = gather(prof, [&](int i) { return eq.b - prof.u[i]; });
    const LineFit fu = fit_line(tu.x, tu.ly);

    LowerBoundCheck chk;
    chk.rate_u = -fu.slope;
    chk.rate_cap = std::sqrt(2.0) * eq.b;
    chk.epsilon = std::exp(tu.ly[0] + chk.rate_cap * tu.x[0]);
    for (size_t i = 1; i < tu.x.size(); ++i)
        chk.epsilon = std::min(chk.epsilon, std::exp(tu.ly[i] + chk.rate_cap * tu.x[i]));
    chk.pass = chk.rate_u <= 1.02 * chk.rate_cap && chk.epsilon > 0.0;
    chk.window = window_of(tu);
    return chk;
}

OmegaZeroReport omega_zero_asymptotics(double alpha, const Profile& prof) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw Error(ErrorCode::InvalidParams, "alpha must be positive");

    const double sqa = std::sqrt(alpha);
    const double sq2 = std::sqrt(2.0);

    const Tail tv = gather(prof, [&](int i) { return prof.v[i]; });
    const LineFit fv = fit_line(tv.x, tv.ly);

    OmegaZeroReport rep;
    rep.alpha = alpha;
    rep.rate_v = -fv.slope;
    rep.ell2_tilde = frozen_amplitude(tv, sqa);

    const Tail tu = gather(prof, [&](int i) { return 1.0 - prof.u[i]; });
    const LineFit fu = fit_line(tu.x, tu.ly);
    rep.rate_u = -fu.slope;
    rep.window = window_of(tu);
    rep.residual_rms = std::max(fu.rms, fv.rms);

    const double l2sq = rep.ell2_tilde * rep.ell2_tilde;
    if (std::abs(alpha - 0.5) <= 1e-6) {
        rep.branch = OmegaZeroBranch::AlphaEqualHalf;
        rep.rate_u_expected = sq2;
        // 1 - u ~ K x e^{-sqrt(2) x}: extrapolate K from y = (1-u) e^{sqrt(2)x}/x
        // fitted against 1/x, which absorbs the free e^{-sqrt(2)x} term.
        std::vector<double> z(tu.x.size()), y(tu.x.size());
        for (size_t i = 0; i < tu.x.size(); ++i) {
            z[i] = 1.0 / tu.x[i];
            y[i] = std::exp(tu.ly[i] + sq2 * tu.x[i]) / tu.x[i];
        }
        const LineFit fk = fit_line(z, y);
        rep.amplitude_u = fk.intercept;
        rep.amplitude_expected = 3.0 * l2sq / (4.0 * sq2);
    } else if (alpha > 0.5) {
        rep.branch = OmegaZeroBranch::AlphaAboveHalf;
        rep.rate_u_expected = sq2;
        rep.amplitude_u = frozen_amplitude(tu, sq2);
        rep.amplitude_expected = std::nan("");
    } else {
        rep.branch = OmegaZeroBranch::AlphaBelowHalf;
        rep.rate_u_expected = 2.0 * sqa;
        rep.amplitude_u = frozen_amplitude(tu, 2.0 * sqa);
        rep.amplitude_expected = (alpha + 1.0) * l2sq / (2.0 * (1.0 - 2.0 * alpha));
    }
    if (std::isfinite(rep.amplitude_expected))
        rep.relation_ok =
            std::abs(rep.amplitude_u - rep.amplitude_expected) <= 0.05 * rep.amplitude_expected;
    return rep;
}

}  // namespace wallforge
