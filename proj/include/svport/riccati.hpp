#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "svport/errors.hpp"
#include "svport/extended_real.hpp"

namespace svport {

// Coefficients of the autonomous scalar Riccati equation
//     B'(tau) = -r0 + r1*B(tau) + (1/2)*r2*B(tau)^2,   B(0) = B0.
// r3 = sqrt(r1^2 + 2 r0 r2) is stored only when the discriminant is
// positive; without it the closed-form machinery below is unavailable.
struct RiccatiCoeffs {
    double r0 = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    std::optional<double> r3;

    double discriminant() const { return r1 * r1 + 2.0 * r0 * r2; }
};

// Fills r3 from the discriminant when it is positive.
RiccatiCoeffs make_coeffs(double r0, double r1, double r2);

// Right side -r0 + r1*B + (1/2)*r2*B^2.
double riccati_rhs(const RiccatiCoeffs& c, double B);

// Maximal existence time of the flow started at B0:
//     (1/r3) * ln((r1 + r2*B0 + r3) / (r1 + r2*B0 - r3))  if r1+r2*B0-r3 > 0,
//     +inf otherwise.
// Throws CoefficientError when r3 is unavailable.
ExtendedReal riccati_lifetime(const RiccatiCoeffs& c, double B0);

struct RiccatiFlow {
    RiccatiCoeffs coeffs;
    double B0 = 0.0;
    ExtendedReal lifetime;
};

// Bundles coefficients with an initial value and the lifetime.
RiccatiFlow make_flow(const RiccatiCoeffs& c, double B0);

// Closed-form B(tau) for 0 <= tau < lifetime:
//     B(tau) = [2 r2 r3 B0 + (e^{r3 tau}-1)(r1+r3)(r1+r2 B0-r3)]
//            / [2 r2 r3 - r2 (e^{r3 tau}-1)(r1+r2 B0-r3)].
double riccati_eval(const RiccatiFlow& f, double tau);

// First time the flow reaches B_target, or +inf when the target lies on the
// wrong side of the (strictly monotone or constant) flow or behind a
// stationary point. Uses
//     tau = (1/r3) * log1p(2 r2 r3 (B_target-B0) / D),
//     D   = (r1 + r2 B0 - r3)(r1 + r2 B_target + r3),
// with a bisection fallback when cancellation makes the closed form NaN.
ExtendedReal transition_time(const RiccatiCoeffs& c, double B0, double B_target);

// Integral int_0^T B(tau) dtau by adaptive Simpson quadrature on
// riccati_eval (absolute tolerance 1e-10). Quadrature is the ground truth;
// the two closed-form variants below exist for cross-checks only.
double riccati_integral(const RiccatiFlow& f, double T);

// Closed-form antiderivative
//     (2/r2) ln( 2 r3 e^{(r3-X) T/2}
//              / (r3(e^{r3 T}+1) - (r1 + r2 B0)(e^{r3 T}-1)) )
// in its two circulating variants: X = r1 (consistent; matches quadrature)
// and X = B0 (dimensionally inconsistent; kept so the deviation can be
// reported).
double riccati_integral_closed_r1(const RiccatiFlow& f, double T);
double riccati_integral_closed_b0(const RiccatiFlow& f, double T);

struct IntegralCheck {
    double quadrature = 0.0;
    double closed_r1 = 0.0;
    double closed_b0 = 0.0;
};
IntegralCheck riccati_integral_report(const RiccatiFlow& f, double T);

enum class OdeScheme { rk4, euler };

// Fixed-step explicit solver for y' = rhs(tau, y), y(0) = y0, on [0, T].
// Returns the grid of steps+1 values including both endpoints. RK4 by
// default; Euler on request. Throws NonFiniteState when the state stops
// being finite or |y| exceeds 1e8 (blow-up threshold).
std::vector<double> ode_solve_numeric(const std::function<double(double, double)>& rhs,
                                      double y0, double T, int steps,
                                      OdeScheme scheme = OdeScheme::rk4);

// First grid time at which |y| exceeds the blow-up threshold, +inf if the
// integration stays finite on [0, T]. Companion to riccati_lifetime tests.
ExtendedReal ode_blowup_time(const std::function<double(double, double)>& rhs,
                             double y0, double T, int steps,
                             OdeScheme scheme = OdeScheme::rk4);

// Generic adaptive Simpson quadrature with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol);

// Bisection root bracketing for monotone crossing problems; f(lo) and f(hi)
// must have opposite signs.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol);

} // namespace svport
