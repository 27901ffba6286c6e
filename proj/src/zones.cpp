#include "svport/zones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace svport {

std::string zone_name(Zone z) {
    switch (z) {
        case Zone::minus: return "minus";
        case Zone::plus: return "plus";
        default: return "mid";
    }
}

ZoneSystem zone_system(const MarketParams& p, const IntervalConstraint& K) {
    ZoneSystem zs;
    double omb = 1.0 - p.b;
    double s2 = p.sigma * p.sigma;

    zs.coeffs_mid = make_coeffs(-(p.b / (2.0 * omb)) * p.eta * p.eta,
                                (p.b / omb) * p.eta * p.sigma * p.rho - p.kappa,
                                s2 * (1.0 + (p.b / omb) * p.rho * p.rho));

    if (K.alpha.is_finite()) {
        double a = K.alpha.as_double();
        zs.b_minus = ExtendedReal((omb * a - p.eta) / p.sigma);
        zs.coeffs_minus = make_coeffs(0.5 * p.b * a * (omb * a - 2.0 * p.eta),
                                      p.b * p.sigma * p.rho * a - p.kappa, s2);
        zs.minus_used = true;
    } else {
        zs.b_minus = ExtendedReal::neg_inf();
        zs.coeffs_minus = RiccatiCoeffs{};
    }

    if (K.beta.is_finite()) {
        double bta = K.beta.as_double();
        zs.b_plus = ExtendedReal((omb * bta - p.eta) / p.sigma);
        zs.coeffs_plus = make_coeffs(0.5 * p.b * bta * (omb * bta - 2.0 * p.eta),
                                     p.b * p.sigma * p.rho * bta - p.kappa, s2);
        zs.plus_used = true;
    } else {
        zs.b_plus = ExtendedReal::pos_inf();
        zs.coeffs_plus = RiccatiCoeffs{};
    }
    return zs;
}

double lambda_star(const ZoneSystem& zs, const MarketParams& p,
                   const IntervalConstraint& K, double B) {
    double srB = p.sigma * p.rho * B;
    switch (zs.classify(p.rho * B)) {
        case Zone::minus: return (1.0 - p.b) * K.alpha.finite_value() - (p.eta + srB);
        case Zone::plus: return (1.0 - p.b) * K.beta.finite_value() - (p.eta + srB);
        default: return 0.0;
    }
}

double b_ode_rhs(const ZoneSystem& zs, const MarketParams& p, double B) {
    return riccati_rhs(zs.coeffs(zs.classify(p.rho * B)), B);
}

double b_ode_rhs_dual(const MarketParams& p, const IntervalConstraint& K, double B) {
    double omb = 1.0 - p.b;
    double srB = p.sigma * p.rho * B;

    // D(lambda) = 2(1-b) delta_K(lambda) + (eta + lambda + srB)^2 is convex;
    // its minimum sits at lambda = 0 or at a branch vertex clamped to the
    // branch's sign domain.
    auto D = [&](double lam) {
        double delta;
        if (lam > 0.0) {
            delta = -K.alpha.finite_value() * lam;
        } else if (lam < 0.0) {
            delta = -K.beta.finite_value() * lam;
        } else {
            delta = 0.0;
        }
        double lin = p.eta + lam + srB;
        return 2.0 * omb * delta + lin * lin;
    };

    double m = D(0.0);
    if (K.alpha.is_finite()) {
        double vertex = omb * K.alpha.as_double() - p.eta - srB;
        if (vertex > 0.0) m = std::min(m, D(vertex));
    }
    if (K.beta.is_finite()) {
        double vertex = omb * K.beta.as_double() - p.eta - srB;
        if (vertex < 0.0) m = std::min(m, D(vertex));
    }
    return -p.kappa * B + 0.5 * p.sigma * p.sigma * B * B + (p.b / (2.0 * omb)) * m;
}

double b_ode_rhs_literal_min(const ZoneSystem& zs, double B) {
    double m = riccati_rhs(zs.coeffs_mid, B);
    if (zs.minus_used) m = std::min(m, riccati_rhs(zs.coeffs_minus, B));
    if (zs.plus_used) m = std::min(m, riccati_rhs(zs.coeffs_plus, B));
    return m;
}

std::string AssumptionReport::describe() const {
    std::ostringstream os;
    auto word = [](bool ok) { return ok ? "pass" : "FAIL"; };
    os << "existence: " << word(existence) << "\n";
    os << "no blow-up before horizon: " << word(no_blowup) << "\n";
    os << "near-maturity bound (sigma form): " << word(near_maturity_sigma) << "\n";
    os << "near-maturity bound (kappa form, reported only): " << word(near_maturity_kappa)
       << "\n";
    for (const std::string& n : notes) os << "note: " << n << "\n";
    return os.str();
}

namespace {

struct ZoneRef {
    Zone zone;
    const RiccatiCoeffs* coeffs;
};

} // namespace

AssumptionReport check_assumptions(const MarketParams& p, const IntervalConstraint& K) {
    AssumptionReport rep;
    ZoneSystem zs = zone_system(p, K);
    double omb = 1.0 - p.b;
    double bound = p.kappa * p.kappa / (2.0 * p.sigma * p.sigma);
    auto note_fail = [&](const std::string& msg) { rep.notes.push_back(msg); };

    // Existence: per-zone term of the max-of-three inequality, strictly below
    // kappa^2/(2 sigma^2); terms of empty outer zones are dropped.
    auto existence_term_outer = [&](double x) {
        return p.b * x * (p.eta - 0.5 * x + p.kappa * p.rho / p.sigma +
                          0.5 * x * p.b * (1.0 - p.rho * p.rho));
    };
    double term_mid = (p.b / omb) * p.eta * (p.kappa * p.rho / p.sigma + 0.5 * p.eta);
    struct Term {
        Zone zone;
        double value;
    };
    std::vector<Term> terms{{Zone::mid, term_mid}};
    if (zs.minus_used) terms.push_back({Zone::minus, existence_term_outer(K.alpha.as_double())});
    if (zs.plus_used) terms.push_back({Zone::plus, existence_term_outer(K.beta.as_double())});
    for (const Term& t : terms) {
        if (!(t.value < bound)) {
            rep.existence = false;
            std::ostringstream os;
            os << "existence condition fails for " << zone_name(t.zone)
               << " zone (term " << t.value << " >= " << bound << ")";
            note_fail(os.str());
        }
    }

    // No blow-up: lifetime beyond the horizon from every start value a
    // trajectory segment can take: 0 and the finite zone crossings B-/rho,
    // B+/rho. Zones without a real r3 are already existence failures.
    std::vector<double> starts{0.0};
    if (p.rho != 0.0) {
        if (zs.b_minus.is_finite()) starts.push_back(zs.b_minus.as_double() / p.rho);
        if (zs.b_plus.is_finite()) starts.push_back(zs.b_plus.as_double() / p.rho);
    }
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());

    std::vector<ZoneRef> used{{Zone::mid, &zs.coeffs_mid}};
    if (zs.minus_used) used.push_back({Zone::minus, &zs.coeffs_minus});
    if (zs.plus_used) used.push_back({Zone::plus, &zs.coeffs_plus});
    for (const ZoneRef& zr : used) {
        if (!zr.coeffs->r3) {
            note_fail("lifetime check skipped for " + zone_name(zr.zone) +
                      " zone (no real r3)");
            continue;
        }
        for (double B0 : starts) {
            ExtendedReal lt = riccati_lifetime(*zr.coeffs, B0);
            if (!(lt > ExtendedReal(p.T))) {
                rep.no_blowup = false;
                std::ostringstream os;
                os << "lifetime " << lt.as_double() << " <= horizon " << p.T << " for "
                   << zone_name(zr.zone) << " zone from B0=" << B0;
                note_fail(os.str());
            }
        }
    }

    // Near-maturity policy boundedness, both circulating denominators;
    // infinite bounds drop their term.
    double rhs = p.kappa / (p.sigma * p.sigma);
    auto check_near = [&](double denom, bool& ok, const char* label) {
        double worst = -std::numeric_limits<double>::infinity();
        if (K.alpha.is_finite())
            worst = std::max(worst, (p.b * p.rho / denom) * K.alpha.as_double());
        if (K.beta.is_finite())
            worst = std::max(worst, (p.b * p.rho / denom) * K.beta.as_double());
        if (std::isfinite(worst) && worst > rhs) {
            ok = false;
            std::ostringstream os;
            os << "near-maturity bound (" << label << " form) fails: " << worst << " > " << rhs;
            note_fail(os.str());
        }
    };
    check_near(p.sigma, rep.near_maturity_sigma, "sigma");
    check_near(p.kappa, rep.near_maturity_kappa, "kappa");

    return rep;
}

} // namespace svport
