#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wallforge/asymptotics.hpp"
#include "wallforge/grid1d.hpp"
#include "wallforge/model.hpp"

namespace wallforge {

// One quantitative check. `target_lo == target_hi` encodes a point target;
// otherwise the target is the interval [target_lo, target_hi].
struct CheckRecord {
    std::string name;
    std::string paper_ref;
    double measured = 0.0;
    double target_lo = 0.0;
    double target_hi = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Every tolerance the certifier uses, in one place. The monotonicity pair
// deals with double rounding in the far tails: converged profiles saturate to
// the well values there, so consecutive nodes can be bitwise equal or wobble
// by one ulp. Nodes that close to a well are excluded from the strict check
// and only a no-decrease condition with one-ulp slack is applied globally.
struct CertTolerances {
    double bounds = 1e-6;
    double monotone_well_gap = 1e-12;
    double monotone_slack = 1e-15;
    double hamiltonian_sup = 1e-6;
    double hamiltonian_mean = 1e-5;
    double hamiltonian_spread_factor = 10.0;
    double sliding_sup = 1e-6;
    double constant_dev = 1e-8;
    double trichotomy_dist = 1e-8;
    double decay_rate_rel = 0.02;
    double decay_ratio_rel = 0.02;
    double lower_bound_rate_rel = 0.02;
};

struct Certificate {
    Params params;
    double R = 0.0;
    double h = 0.0;
    std::vector<CheckRecord> checks;
    bool overall_pass = false;
};

std::vector<CheckRecord> certify_bounds(const Params& p, const Equilibria& eq, const Profile& prof,
                                        const CertTolerances& tol = {});
std::vector<CheckRecord> certify_monotone(const Profile& prof, const CertTolerances& tol = {});
std::vector<CheckRecord> certify_hamiltonian(const Params& p, const Profile& prof,
                                             const CertTolerances& tol = {});
std::vector<CheckRecord> sliding_test(const Params& p, const Profile& profA, const Profile& profB,
                                      const CertTolerances& tol = {});
std::vector<CheckRecord> certify_constant_regime(const Params& p, const Profile& prof,
                                                 const CertTolerances& tol = {});
std::vector<CheckRecord> certify_decay(const Params& p, const Profile& prof,
                                       const CertTolerances& tol = {});

// Composes the full check list for a profile. In the wall regimes this runs
// bounds, monotonicity, Hamiltonian, decay (skipped at omega=0 where the slow
// rate analysis does not apply) and, when an independently computed profile is
// supplied, the translation-uniqueness comparison. In the ConstantOnly regime
// only the constant-state check applies; the wall bounds are meaningless
// there.
Certificate certify_all(const Params& p, const Profile& prof,
                        const Profile* independent = nullptr, const CertTolerances& tol = {});

}  // namespace wallforge
