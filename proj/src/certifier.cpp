#include "wallforge/certifier.hpp"

#include <algorithm>
#include <cmath>

#include "wallforge/errors.hpp"

namespace wallforge {
namespace {

CheckRecord point_check(std::string name, std::string ref, double measured, double target,
                        double tolerance, bool pass) {
    return {std::move(name), std::move(ref), measured, target, target, tolerance, pass};
}

}  // namespace

std::vector<CheckRecord> certify_bounds(const Params& p, const Equilibria& eq, const Profile& prof,
                                        const CertTolerances& tol) {
    validate(p);
    const size_t N = prof.u.size();
    const double ratio = p.alpha > 0.0 ? p.omega / p.alpha : 0.0;

    double density_max = -1e300, product_min = 1e300;
    double val_min = 1e300, val_max = -1e300;
    double sum_min = 1e300, sum_max = -1e300;
    double dist_ab = 0.0, dist_ba = 0.0;
    for (size_t i = 0; i < N; ++i) {
        const double u = prof.u[i], v = prof.v[i];
        density_max = std::max(density_max, u * u + v * v - 1.0);
        product_min = std::min(product_min, u * v - ratio);
        val_min = std::min(val_min, std::min(u, v));
        val_max = std::max(val_max, std::max(u, v));
        sum_min = std::min(sum_min, u + v);
        sum_max = std::max(sum_max, u + v);
        dist_ab = std::max(dist_ab, std::max(std::abs(u - eq.a), std::abs(v - eq.b)));
        dist_ba = std::max(dist_ba, std::max(std::abs(u - eq.b), std::abs(v - eq.a)));
    }

    const double band_lo = std::sqrt((1.0 + p.omega) / std::max((2.0 + p.alpha) / 4.0, 1.0));
    const double band_hi = std::sqrt((1.0 + p.omega) / std::min((2.0 + p.alpha) / 4.0, 1.0));
    const double band_excursion = std::max(band_lo - sum_min, sum_max - band_hi);

    std::vector<CheckRecord> out;
    out.push_back(point_check("density_max", "Prop. 1.2", density_max, 0.0, tol.bounds,
                              density_max <= tol.bounds));
    out.push_back(point_check("product_min", "Prop. 1.2", product_min, 0.0, tol.bounds,
                              product_min >= -tol.bounds));
    out.push_back(point_check("wells_lower", "Eq. (boundab)", val_min, eq.a, tol.bounds,
                              val_min >= eq.a - tol.bounds));
    out.push_back(point_check("wells_upper", "Eq. (boundab)", val_max, eq.b, tol.bounds,
                              val_max <= eq.b + tol.bounds));
    out.push_back({"sum_band", "Lemma 2.1", band_excursion, band_lo, band_hi, tol.bounds,
                   band_excursion <= tol.bounds});

    const double near = std::min(dist_ab, dist_ba);
    const char* label = dist_ab < tol.trichotomy_dist  ? "ConstantAB"
                        : dist_ba < tol.trichotomy_dist ? "ConstantBA"
                                                        : "StrictlyInside";
    out.push_back(point_check(std::string("trichotomy_") + label, "Prop. 1.2", near, 0.0,
                              tol.trichotomy_dist, true));
    return out;
}

std::vector<CheckRecord> certify_monotone(const Profile& prof, const CertTolerances& tol) {
    const size_t N = prof.u.size();
    // u should rise from its left value, v fall from its left value. Nodes
    // whose values sit within monotone_well_gap of the end values are rounding
    // plateaus and only need the no-decrease slack.
    double u_core_min = 1e300, u_global_min = 1e300;
    double v_core_max = -1e300, v_global_max = -1e300;
    bool u_core = false, v_core = false;
    for (size_t i = 0; i + 1 < N; ++i) {
        const double du = prof.u[i + 1] - prof.u[i];
        const double dv = prof.v[i + 1] - prof.v[i];
        u_global_min = std::min(u_global_min, du);
        v_global_max = std::max(v_global_max, dv);
        if (std::min(prof.u[i] - prof.u.front(), prof.u.back() - prof.u[i + 1]) >
            tol.monotone_well_gap) {
            u_core = true;
            u_core_min = std::min(u_core_min, du);
        }
        if (std::min(prof.v.front() - prof.v[i], prof.v[i + 1] - prof.v.back()) >
            tol.monotone_well_gap) {
            v_core = true;
            v_core_max = std::max(v_core_max, dv);
        }
    }
    const double mu = u_core ? u_core_min : 0.0;
    const double mv = v_core ? v_core_max : 0.0;
    const bool up = u_core && mu > 0.0 && u_global_min >= -tol.monotone_slack;
    const bool vp = v_core && mv < 0.0 && v_global_max <= tol.monotone_slack;

    std::vector<CheckRecord> out;
    out.push_back(point_check("monotone_u_increase", "Prop. 3.1", mu, 0.0, 0.0, up));
    out.push_back(point_check("monotone_v_decrease", "Prop. 3.1", mv, 0.0, 0.0, vp));
    return out;
}

std::vector<CheckRecord> certify_hamiltonian(const Params& p, const Profile& prof,
                                             const CertTolerances& tol) {
    validate(p);
    const auto hn = hamiltonian_nodes(p, prof);
    const auto [du, dv] = first_derivative(prof);

    double hmin = 1e300, hmax = -1e300, hsum = 0.0, habs = 0.0, scale = 0.0;
    for (size_t i = 0; i < hn.size(); ++i) {
        hmin = std::min(hmin, hn[i]);
        hmax = std::max(hmax, hn[i]);
        hsum += hn[i];
        habs = std::max(habs, std::abs(hn[i]));
        scale = std::max(scale, energy_density(p, prof.u[i], prof.v[i], du[i], dv[i]));
    }
    const double mean = hsum / static_cast<double>(hn.size());
    const double spread_bound =
        tol.hamiltonian_spread_factor * prof.grid.h() * prof.grid.h() * scale;

    std::vector<CheckRecord> out;
    out.push_back(point_check("hamiltonian_sup", "§4 proof Step 1", habs, 0.0,
                              tol.hamiltonian_sup, habs <= tol.hamiltonian_sup));
    out.push_back(point_check("hamiltonian_spread", "§4 proof Step 1", hmax - hmin, 0.0,
                              spread_bound, hmax - hmin <= spread_bound));
    out.push_back(point_check("hamiltonian_mean", "§4 proof Step 1", mean, 0.0,
                              tol.hamiltonian_mean, std::abs(mean) <= tol.hamiltonian_mean));
    return out;
}

std::vector<CheckRecord> sliding_test(const Params& p, const Profile& profA, const Profile& profB,
                                      const CertTolerances& tol) {
    validate(p);
    const Equilibria eq = equilibria(p);
    for (const Profile* pr : {&profA, &profB}) {
        const size_t N = pr->u.size();
        if (std::abs(pr->u.front() - eq.a) > 1e-9 || std::abs(pr->v.front() - eq.b) > 1e-9 ||
            std::abs(pr->u[N - 1] - eq.b) > 1e-9 || std::abs(pr->v[N - 1] - eq.a) > 1e-9)
            throw Error(ErrorCode::IncompatibleParams,
                        "profile boundary values do not match the wall pair for these parameters");
    }

    const double Rc = std::min(profA.grid.R, profB.grid.R);
    double sup = 0.0;
    const auto compare = [&](const Profile& base, const Profile& other) {
        for (int i = 0; i < base.grid.n_nodes(); ++i) {
            const double x = base.grid.x(i);
            if (std::abs(x) > Rc) continue;
            const auto [uo, vo] = sample(other, x);
            sup = std::max(sup, std::abs(base.u[i] - uo));
            sup = std::max(sup, std::abs(base.v[i] - vo));
        }
    };
    compare(profA, profB);
    compare(profB, profA);

    return {point_check("sliding_sup", "Prop. 4.1", sup, 0.0, tol.sliding_sup,
                        sup <= tol.sliding_sup)};
}

std::vector<CheckRecord> certify_constant_regime(const Params& p, const Profile& prof,
                                                 const CertTolerances& tol) {
    validate(p);
    if (classify(p) != Regime::ConstantOnly)
        return {point_check("constant_state_skipped_WrongRegime", "Theorem 1.4", 0.0, 0.0, 0.0,
                            true)};
    const Equilibria eq = equilibria(p);
    double dev = 0.0;
    for (size_t i = 0; i < prof.u.size(); ++i)
        dev = std::max(dev,
                       std::max(std::abs(prof.u[i] - eq.c), std::abs(prof.v[i] - eq.c)));
    return {point_check("constant_state", "Theorem 1.4", dev, 0.0, tol.constant_dev,
                        dev <= tol.constant_dev)};
}

std::vector<CheckRecord> certify_decay(const Params& p, const Profile& prof,
                                       const CertTolerances& tol) {
    std::vector<CheckRecord> out;
    try {
        const TailFit fit = fit_decay(p, prof);
        const double lam = fit.lambda_minus_theory;
        const double mu = fit.mu_theory;
        out.push_back(point_check("decay_rate_u", "Lemma 4.3", fit.rate_u, lam,
                                  tol.decay_rate_rel * lam,
                                  std::abs(fit.rate_u - lam) <= tol.decay_rate_rel * lam));
        out.push_back(point_check("decay_rate_v", "Lemma 4.3", fit.rate_v, lam,
                                  tol.decay_rate_rel * lam,
                                  std::abs(fit.rate_v - lam) <= tol.decay_rate_rel * lam));
        const double ratio = fit.ell2 / fit.ell1;
        out.push_back(point_check("decay_amplitude_ratio", "Lemma 4.3", ratio, mu,
                                  tol.decay_ratio_rel * mu,
                                  std::abs(ratio - mu) <= tol.decay_ratio_rel * mu));

        const LowerBoundCheck lb = check_lower_bound(p, prof);
        const bool lb_pass = lam < lb.rate_cap &&
                             lb.rate_u <= (1.0 + tol.lower_bound_rate_rel) * lb.rate_cap &&
                             lb.epsilon > 0.0;
        out.push_back({"decay_lower_bound", "Lemma A.4", lb.rate_u, 0.0, lb.rate_cap,
                       tol.lower_bound_rate_rel * lb.rate_cap, lb_pass});
    } catch (const Error& e) {
        out.push_back(point_check(std::string("decay_fit_failed_") + to_string(e.code()),
                                  "Lemma 4.3", 0.0, 0.0, 0.0, false));
    }
    return out;
}

Certificate certify_all(const Params& p, const Profile& prof, const Profile* independent,
                        const CertTolerances& tol) {
    validate(p);
    Certificate cert;
    cert.params = p;
    cert.R = prof.grid.R;
    cert.h = prof.grid.h();

    const Regime regime = classify(p);
    if (regime == Regime::ConstantOnly) {
        const auto cr = certify_constant_regime(p, prof, tol);
        cert.checks.insert(cert.checks.end(), cr.begin(), cr.end());
    } else {
        const Equilibria eq = equilibria(p);
        for (const auto& group :
             {certify_bounds(p, eq, prof, tol), certify_monotone(prof, tol),
              certify_hamiltonian(p, prof, tol)})
            cert.checks.insert(cert.checks.end(), group.begin(), group.end());
        if (regime == Regime::Heteroclinic) {
            const auto d = certify_decay(p, prof, tol);
            cert.checks.insert(cert.checks.end(), d.begin(), d.end());
        } else {
            cert.checks.push_back(
                point_check("decay_skipped_WrongRegime", "Lemma 4.3", 0.0, 0.0, 0.0, true));
        }
        if (independent) {
            const auto s = sliding_test(p, prof, *independent, tol);
            cert.checks.insert(cert.checks.end(), s.begin(), s.end());
        }
        const auto cr = certify_constant_regime(p, prof, tol);
        cert.checks.insert(cert.checks.end(), cr.begin(), cr.end());
    }

    cert.overall_pass = true;
    for (const auto& c : cert.checks) cert.overall_pass = cert.overall_pass && c.pass;
    return cert;
}

}  // namespace wallforge
