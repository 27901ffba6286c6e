#include "svport/policy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace svport {

namespace {

double clamp_tau(double tau, double T, const char* who) {
    if (tau < 0.0) {
        if (tau > -1e-12) return 0.0;
        throw DomainError(std::string(who) + ": tau < 0");
    }
    if (tau > T) {
        if (tau < T + 1e-12 * (1.0 + T)) return T;
        throw DomainError(std::string(who) + ": tau > T");
    }
    return tau;
}

void require_lifetime(const RiccatiFlow& flow, double span, Zone zone) {
    if (!(flow.lifetime > ExtendedReal(span))) {
        std::ostringstream os;
        os << "solve_B: " << zone_name(zone) << " zone segment blows up at "
           << flow.lifetime.as_double() << " before covering span " << span;
        throw BlowupError(os.str());
    }
}

// Zone the trajectory actually moves into from B0. Resolves exact-boundary
// starts (stitching junctions, or 0 landing on a boundary) by the sign of
// the shared derivative: the gated right side is C^1 across boundaries, so
// both adjacent quadratics agree there and the sign of d(rho B)/dtau decides
// the outgoing zone.
Zone outgoing_zone(const ZoneSystem& zs, const MarketParams& p, double B0) {
    double rho_B = p.rho * B0;
    Zone cls = zs.classify(rho_B);
    if (cls != Zone::mid || p.rho == 0.0) return cls;

    auto on_boundary = [&](ExtendedReal bd) {
        return bd.is_finite() &&
               std::abs(rho_B - bd.as_double()) <= 1e-12 * (1.0 + std::abs(bd.as_double()));
    };
    double d = riccati_rhs(zs.coeffs_mid, B0);
    if (on_boundary(zs.b_minus) && p.rho * d < 0.0) return Zone::minus;
    if (on_boundary(zs.b_plus) && p.rho * d > 0.0) return Zone::plus;
    return cls;
}

} // namespace

const BSegment& PiecewiseB::segment_at(double tau) const {
    if (segments.empty()) throw DomainError("PiecewiseB: no segments");
    size_t i = segments.size();
    while (i > 1 && segments[i - 1].tau_start > tau) --i;
    return segments[i - 1];
}

double PiecewiseB::eval(double tau) const {
    tau = clamp_tau(tau, T, "PiecewiseB::eval");
    const BSegment& s = segment_at(tau);
    return riccati_eval(s.flow, tau - s.tau_start);
}

double PiecewiseB::deriv(double tau) const {
    tau = clamp_tau(tau, T, "PiecewiseB::deriv");
    const BSegment& s = segment_at(tau);
    return riccati_rhs(s.flow.coeffs, riccati_eval(s.flow, tau - s.tau_start));
}

Zone PiecewiseB::zone_at(double tau) const {
    tau = clamp_tau(tau, T, "PiecewiseB::zone_at");
    return segment_at(tau).zone;
}

PiecewiseB solve_B(const MarketParams& p, const IntervalConstraint& K, SolveOptions opts) {
    ValidationReport vr = validate_params(p);
    if (!vr.ok()) throw DomainError("solve_B: invalid parameters: " + vr.describe());
    if (!K.valid()) throw DomainError("solve_B: constraint interval needs alpha < beta");
    if (!opts.force) {
        AssumptionReport ar = check_assumptions(p, K);
        if (!ar.pass()) throw AssumptionError("solve_B: assumptions fail: " + ar.describe());
    }

    ZoneSystem zs = zone_system(p, K);
    PiecewiseB out;
    out.T = p.T;

    double tau0 = 0.0;
    double B0 = 0.0;
    Zone zone = outgoing_zone(zs, p, B0);

    while (true) {
        const RiccatiCoeffs& c = zs.coeffs(zone);
        RiccatiFlow flow = make_flow(c, B0);
        double remaining = p.T - tau0;

        ExtendedReal t_hit = ExtendedReal::pos_inf();
        double next_B0 = 0.0;
        if (p.rho != 0.0) {
            auto consider = [&](ExtendedReal boundary) {
                if (!boundary.is_finite()) return;
                double target = boundary.as_double() / p.rho;
                if (target == B0) return; // already at this boundary, moving away
                ExtendedReal tt = transition_time(c, B0, target);
                if (tt < t_hit) {
                    t_hit = tt;
                    next_B0 = target;
                }
            };
            switch (zone) {
                case Zone::minus: consider(zs.b_minus); break;
                case Zone::plus: consider(zs.b_plus); break;
                case Zone::mid:
                    consider(zs.b_minus);
                    consider(zs.b_plus);
                    break;
            }
        }

        bool crosses = t_hit.is_finite() && t_hit.as_double() < remaining;
        require_lifetime(flow, crosses ? t_hit.as_double() : remaining, zone);
        out.segments.push_back({tau0, zone, flow});
        if (!crosses) break;

        tau0 += t_hit.as_double();
        B0 = next_B0;
        zone = outgoing_zone(zs, p, B0);
        if (out.segments.size() >= 3) {
            // Monotone zone order caps the count at 3; a fourth request means
            // the stitching logic is broken.
            throw std::logic_error("solve_B: more than 3 segments requested");
        }
    }
    return out;
}

double ACurve::integral_B(double tau) const {
    if (segments.empty()) throw DomainError("ACurve: no segments");
    size_t i = segments.size();
    while (i > 1 && segments[i - 1].tau_start > tau) --i;
    const Seg& s = segments[i - 1];
    return s.int_B_start + riccati_integral(s.flow, tau - s.tau_start);
}

double ACurve::eval(double tau) const {
    tau = clamp_tau(tau, T, "ACurve::eval");
    return br * tau + kappa_theta * integral_B(tau);
}

ACurve solve_A(const MarketParams& p, const PiecewiseB& B) {
    ACurve a;
    a.br = p.b * p.r;
    a.kappa_theta = p.kappa * p.theta;
    a.T = B.T;
    double acc = 0.0;
    for (size_t i = 0; i < B.segments.size(); ++i) {
        const BSegment& s = B.segments[i];
        a.segments.push_back({s.tau_start, acc, s.flow});
        double end = (i + 1 < B.segments.size()) ? B.segments[i + 1].tau_start : B.T;
        acc += riccati_integral(s.flow, end - s.tau_start);
    }
    return a;
}

double pi_hat(const PiecewiseB& B, const MarketParams& p, double t) {
    double tau = clamp_tau(p.T - t, p.T, "pi_hat");
    return (p.eta + p.sigma * p.rho * B.eval(tau)) / (1.0 - p.b);
}

double pi_star(const PiecewiseB& B, const MarketParams& p, const IntervalConstraint& K,
               double t) {
    return cap(pi_hat(B, p, t), K);
}

double UnconstrainedSolution::eval_B(double tau) const {
    return riccati_eval(flow, clamp_tau(tau, p.T, "UnconstrainedSolution::eval_B"));
}

double UnconstrainedSolution::pi(double t) const {
    return (p.eta + p.sigma * p.rho * eval_B(p.T - t)) / (1.0 - p.b);
}

UnconstrainedSolution unconstrained_solution(const MarketParams& p) {
    ValidationReport vr = validate_params(p);
    if (!vr.ok()) {
        throw DomainError("unconstrained_solution: invalid parameters: " + vr.describe());
    }
    double omb = 1.0 - p.b;
    double bound = p.kappa * p.kappa / (2.0 * p.sigma * p.sigma);
    double term_mid = (p.b / omb) * p.eta * (p.kappa * p.rho / p.sigma + 0.5 * p.eta);
    if (!(term_mid < bound)) {
        std::ostringstream os;
        os << "unconstrained_solution: mid-zone existence inequality fails (" << term_mid
           << " >= " << bound << ")";
        throw AssumptionError(os.str());
    }
    ZoneSystem zs = zone_system(p, IntervalConstraint::all());
    RiccatiFlow flow = make_flow(zs.coeffs_mid, 0.0);
    if (!(flow.lifetime > ExtendedReal(p.T))) {
        throw BlowupError("unconstrained_solution: flow blows up inside the horizon");
    }
    return UnconstrainedSolution{p, flow};
}

double pi_unconstrained(const MarketParams& p, double t) {
    return unconstrained_solution(p).pi(t);
}

double ValueSurface::evaluate(double t, double v, double z) const {
    if (v <= 0.0) throw DomainError("value function: v must be > 0");
    if (z <= 0.0) throw DomainError("value function: z must be > 0");
    double tau = clamp_tau(p.T - t, p.T, "value function");
    return (1.0 / p.b) * std::pow(v, p.b) * std::exp(A.eval(tau) + B.eval(tau) * z);
}

ValueSurface value_surface(const MarketParams& p, const IntervalConstraint& K,
                           SolveOptions opts) {
    ValueSurface vs;
    vs.p = p;
    vs.B = solve_B(p, K, opts);
    vs.A = solve_A(p, vs.B);
    return vs;
}

double value_function(const ValueSurface& vs, double t, double v, double z) {
    return vs.evaluate(t, v, z);
}

ProjectionResult projection_differs(const MarketParams& p, const IntervalConstraint& K,
                                    int grid_n, SolveOptions opts) {
    if (grid_n < 2) throw DomainError("projection_differs: grid_n must be >= 2");
    if (p.rho == 0.0) return {false, 0.0, "rho = 0"};
    double pm = merton_ratio(p);
    if (K.contains(pm)) return {false, 0.0, "Merton ratio inside K"};

    PiecewiseB B = solve_B(p, K, opts);
    UnconstrainedSolution u = unconstrained_solution(p);
    auto open_inside = [&](double x) {
        return K.alpha < ExtendedReal(x) && ExtendedReal(x) < K.beta;
    };
    for (int i = 0; i <= grid_n - 1; ++i) {
        double t = p.T * static_cast<double>(i) / (grid_n - 1);
        bool h = open_inside(pi_hat(B, p, t));
        bool uu = open_inside(u.pi(t));
        if (h != uu) {
            return {true, t, "exactly one of the candidate weights lies strictly inside K"};
        }
    }
    return {false, 0.0, "no witness time on the grid"};
}

BoundednessDiagnostics boundedness_diagnostics(const MarketParams& p,
                                               const IntervalConstraint& K,
                                               const PiecewiseB& B, int grid_n) {
    if (grid_n < 2) throw DomainError("boundedness_diagnostics: grid_n must be >= 2");
    BoundednessDiagnostics d;
    ZoneSystem zs = zone_system(p, K);
    double omb = 1.0 - p.b;
    double drift_rhs = p.kappa / (p.sigma * p.sigma);
    double exp_rhs = 0.5 * p.kappa * p.kappa / (p.sigma * p.sigma);
    bool first = true;

    for (int i = 0; i <= grid_n - 1; ++i) {
        double t = p.T * static_cast<double>(i) / (grid_n - 1);
        double tau = p.T - t;
        double Bv = B.eval(tau);
        double Bp = B.deriv(tau);
        Zone zone = B.zone_at(tau);
        double ps = cap((p.eta + p.sigma * p.rho * Bv) / omb, K);
        double lam = lambda_star(zs, p, K, Bv);
        double lam_prime = (zone == Zone::mid) ? 0.0 : -p.sigma * p.rho;

        double drift_gap = (p.b * p.rho / p.sigma) * ps + Bv - drift_rhs;

        double lin = lam + p.sigma * p.rho * Bv;
        double exp_lhs = 0.5 * (p.b / omb) * p.eta * p.eta -
                         0.5 * (p.b / omb) * lin * lin -
                         0.5 * p.b * p.b * p.rho * p.rho * ps * ps +
                         p.b * (p.rho * p.kappa / p.sigma) * ps +
                         (p.b / omb) * (p.rho / p.sigma) * (lam_prime + p.sigma * p.rho) * Bp;
        double exp_gap = exp_lhs - exp_rhs;

        if (first || drift_gap > d.drift_bound_max_gap) {
            d.drift_bound_max_gap = drift_gap;
            d.drift_bound_worst_t = t;
        }
        if (first || exp_gap > d.exponent_bound_max_gap) {
            d.exponent_bound_max_gap = exp_gap;
            d.exponent_bound_worst_t = t;
        }
        first = false;
    }
    d.drift_bound_holds = d.drift_bound_max_gap <= 0.0;
    d.exponent_bound_holds = d.exponent_bound_max_gap < 0.0;
    return d;
}

} // namespace svport
