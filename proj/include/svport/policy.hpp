#pragma once

#include <string>
#include <vector>

#include "svport/zones.hpp"

namespace svport {

struct SolveOptions {
    bool force = false; // run even when check_assumptions fails
};

// One closed-form segment of the piecewise B solution. flow.B0 equals the
// value of B at tau_start; inside the segment rho*B stays in `zone`.
struct BSegment {
    double tau_start = 0.0;
    Zone zone = Zone::mid;
    RiccatiFlow flow;
};

struct PiecewiseB {
    std::vector<BSegment> segments;
    double T = 0.0;

    const BSegment& segment_at(double tau) const;
    double eval(double tau) const;
    // d/dtau B(tau) through the active segment's quadratic.
    double deriv(double tau) const;
    Zone zone_at(double tau) const;
};

// Stitches the piecewise closed-form solution of the zone-gated B equation,
// starting at B(0) = 0 in the zone containing rho*0, switching coefficients
// whenever rho*B crosses a zone boundary (at most 3 segments; zones are
// visited monotonically). rho = 0 always yields a single segment.
// Throws DomainError on invalid parameters, AssumptionError when
// check_assumptions fails and force is off, CoefficientError when a visited
// zone lacks a real r3, BlowupError when a segment's lifetime is shorter
// than the span it must cover.
PiecewiseB solve_B(const MarketParams& p, const IntervalConstraint& K,
                   SolveOptions opts = {});

// A(tau) = b r tau + kappa theta int_0^tau B(s) ds, accumulated per segment
// with quadrature on the closed-form segments. A(0) = 0.
struct ACurve {
    struct Seg {
        double tau_start = 0.0;
        double int_B_start = 0.0; // int_0^{tau_start} B
        RiccatiFlow flow;
    };
    std::vector<Seg> segments;
    double br = 0.0;
    double kappa_theta = 0.0;
    double T = 0.0;

    double integral_B(double tau) const;
    double eval(double tau) const;
};

ACurve solve_A(const MarketParams& p, const PiecewiseB& B);

// Uncapped candidate (eta + sigma rho B(T-t)) / (1-b).
double pi_hat(const PiecewiseB& B, const MarketParams& p, double t);

// Optimal constrained weight: alpha below Z0, the mid-zone expression inside,
// beta above; identically Cap(pi_hat, alpha, beta).
double pi_star(const PiecewiseB& B, const MarketParams& p, const IntervalConstraint& K,
               double t);

// K = R machinery: single mid-zone flow from 0.
struct UnconstrainedSolution {
    MarketParams p;
    RiccatiFlow flow;

    double eval_B(double tau) const;
    double pi(double t) const;
};

// Throws AssumptionError when the mid-zone existence inequality fails,
// BlowupError when the flow's lifetime is within the horizon.
UnconstrainedSolution unconstrained_solution(const MarketParams& p);
double pi_unconstrained(const MarketParams& p, double t);

struct ValueSurface {
    MarketParams p;
    PiecewiseB B;
    ACurve A;

    // G(t, v, z) = (1/b) v^b exp(A(T-t) + B(T-t) z); G(T, v, z) = U(v).
    double evaluate(double t, double v, double z) const;
};

ValueSurface value_surface(const MarketParams& p, const IntervalConstraint& K,
                           SolveOptions opts = {});
double value_function(const ValueSurface& vs, double t, double v, double z);

// Does Cap(pi_hat) differ from Cap(pi_u)? `equal` is immediate when rho = 0
// or the Merton ratio lies in K; otherwise the grid is scanned for a witness
// time at which exactly one of {pi_hat(t), pi_u(t)} lies in the open
// interval (alpha, beta).
struct ProjectionResult {
    bool differs = false;
    double witness_t = 0.0;
    std::string reason;
};

ProjectionResult projection_differs(const MarketParams& p, const IntervalConstraint& K,
                                    int grid_n = 2001, SolveOptions opts = {});

// Runtime checks of the two verification inequalities along the solved
// trajectory:
//   drift bound:    (b rho / sigma) pi*(t) + B(T-t) <= kappa / sigma^2
//   exponent bound: (1/2)(b/(1-b)) eta^2
//                   - (1/2)(b/(1-b)) (lambda(B) + sigma rho B)^2
//                   - (1/2) b^2 rho^2 pi*(t)^2 + b (rho kappa / sigma) pi*(t)
//                   + (b/(1-b))(rho/sigma) [lambda'(B) + sigma rho] B'(T-t)
//                   < (1/2) kappa^2 / sigma^2,
// with lambda'(B) = -sigma rho in the outer zones and 0 in the mid zone.
struct BoundednessDiagnostics {
    bool drift_bound_holds = true;
    double drift_bound_max_gap = 0.0; // max over grid of lhs - rhs
    double drift_bound_worst_t = 0.0;
    bool exponent_bound_holds = true;
    double exponent_bound_max_gap = 0.0;
    double exponent_bound_worst_t = 0.0;
};

BoundednessDiagnostics boundedness_diagnostics(const MarketParams& p,
                                               const IntervalConstraint& K,
                                               const PiecewiseB& B, int grid_n = 10000);

} // namespace svport
