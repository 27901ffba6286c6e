#pragma once

#include <string>
#include <vector>

#include "svport/market.hpp"
#include "svport/riccati.hpp"

namespace svport {

// Zones of rho*B deciding which constraint bound is active in the candidate
// policy: lower bound below B-, none in [B-, B+], upper bound above B+.
enum class Zone { minus, mid, plus };

std::string zone_name(Zone z);

// Per-zone Riccati coefficients and the zone boundaries
//     B- = ((1-b) alpha - eta) / sigma,   B+ = ((1-b) beta - eta) / sigma,
// with an infinite bound pushing its boundary to -/+inf and leaving the
// corresponding outer zone empty (coefficients unused, never evaluated).
struct ZoneSystem {
    ExtendedReal b_minus;
    ExtendedReal b_plus;
    RiccatiCoeffs coeffs_minus;
    RiccatiCoeffs coeffs_mid;
    RiccatiCoeffs coeffs_plus;
    bool minus_used = false;
    bool plus_used = false;

    // Ties go to the closed mid zone.
    Zone classify(double rho_B) const {
        if (ExtendedReal(rho_B) < b_minus) return Zone::minus;
        if (ExtendedReal(rho_B) > b_plus) return Zone::plus;
        return Zone::mid;
    }

    const RiccatiCoeffs& coeffs(Zone z) const {
        switch (z) {
            case Zone::minus: return coeffs_minus;
            case Zone::plus: return coeffs_plus;
            default: return coeffs_mid;
        }
    }
};

ZoneSystem zone_system(const MarketParams& p, const IntervalConstraint& K);

// Minimizer of D(lambda) = 2(1-b) delta_K(lambda) + (eta + lambda + sigma rho B)^2:
//     (1-b) alpha - (eta + sigma rho B)  when rho B < B-,
//     (1-b) beta  - (eta + sigma rho B)  when rho B > B+,
//     0 in the closed mid zone.
double lambda_star(const ZoneSystem& zs, const MarketParams& p,
                   const IntervalConstraint& K, double B);

// Right side of the autonomous B equation, zone-gated: the quadratic of the
// zone containing rho*B.
double b_ode_rhs(const ZoneSystem& zs, const MarketParams& p, double B);

// Same right side computed independently of any zone bookkeeping, as
//     -kappa B + (1/2) sigma^2 B^2
//     + (b / (2(1-b))) * inf_lambda [ 2(1-b) delta_K(lambda)
//                                     + (eta + lambda + sigma rho B)^2 ],
// with the infimum found by exact convex minimization over the clamped
// branch vertices. Serves as the independent oracle for the closed-form
// solver.
double b_ode_rhs_dual(const MarketParams& p, const IntervalConstraint& K, double B);

// Unconditional minimum of the available zone quadratics. For b < 0 this is
// NOT the correct right side outside the mid zone (the mid quadratic dips
// below the active one); kept as a diagnostic so the difference stays
// observable.
double b_ode_rhs_literal_min(const ZoneSystem& zs, double B);

// Standing-assumption report. existence: each used zone's term in the
// max-of-three inequality stays below kappa^2/(2 sigma^2) (equivalently,
// that zone's r1^2 + 2 r0 r2 > 0). no_blowup: every used zone with a real
// r3 has lifetime > T from each relevant start value (the finite boundary
// crossings B-/rho, B+/rho and 0). near_maturity_*: the two circulating
// readings of the policy boundedness bound max{c*alpha, c*beta} <=
// kappa/sigma^2 with c = b*rho/sigma (gating) and c = b*rho/kappa
// (reported); infinite bounds drop their term.
struct AssumptionReport {
    bool existence = true;
    bool no_blowup = true;
    bool near_maturity_sigma = true;
    bool near_maturity_kappa = true;
    std::vector<std::string> notes;

    bool pass() const { return existence && no_blowup && near_maturity_sigma; }
    std::string describe() const;
};

AssumptionReport check_assumptions(const MarketParams& p, const IntervalConstraint& K);

} // namespace svport
