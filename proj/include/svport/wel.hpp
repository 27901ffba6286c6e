#pragma once

#include <functional>
#include <string>
#include <vector>

#include "svport/policy.hpp"

namespace svport {

// Bounded deterministic relative portfolio weight t -> pi(t), t in [0, T].
struct DeterministicStrategy {
    std::function<double(double)> sample;
    std::string label;
};

DeterministicStrategy strategy_riskless();
DeterministicStrategy strategy_constant(double x);
// Cap(eta/(1-b), alpha, beta), constant in t.
DeterministicStrategy strategy_capped_merton(const MarketParams& p,
                                             const IntervalConstraint& K);
// Cap(pi_u(t), alpha, beta); throws what unconstrained_solution throws.
DeterministicStrategy strategy_capped_unconstrained(const MarketParams& p,
                                                    const IntervalConstraint& K);
// The solved constrained policy pi*(t); throws what solve_B throws.
DeterministicStrategy strategy_optimal(const MarketParams& p, const IntervalConstraint& K,
                                       SolveOptions opts = {});

// Expected-utility exponents of a deterministic strategy:
//     E[U(V^pi(T)) | V(t) = v, z(t) = z] = (1/b) v^b exp(A_pi(tau) + B_pi(tau) z),
// where (A_pi, B_pi) solve, in tau = T - t,
//     B_pi' = -[ (1/2) pi^2 b (1-b) - b eta pi ] + [ sigma rho b pi - kappa ] B_pi
//             + (1/2) sigma^2 B_pi^2,
//     A_pi' = r b + kappa theta B_pi,
// both zero at tau = 0, with pi evaluated at t = T - tau.
struct ExponentCurves {
    double T = 0.0;
    std::vector<double> A; // uniform tau grid, steps+1 points including both ends
    std::vector<double> B;

    double eval_A(double tau) const;
    double eval_B(double tau) const;
};

// Fixed-step solve of the system above; RK4 by default, Euler on request.
// Throws NonFiniteState when a state leaves the finite range.
ExponentCurves strategy_exponents(const MarketParams& p, const DeterministicStrategy& strat,
                                  int steps = 20000, OdeScheme scheme = OdeScheme::rk4);

// Wealth-equivalent loss of a strategy against the solved optimal policy,
// computed wealth-free:
//     L(t, z) = 1 - exp( (1/b) [ (A_pi - A*)(tau) + (B_pi - B*)(tau) z ] ).
// Both exponent pairs come from the same numerical solver, so the optimal
// strategy reports exactly zero loss.
struct WelReport {
    MarketParams p;
    std::string strat_label;
    ExponentCurves strat;
    ExponentCurves optimal;
    double L0 = 0.0;        // L(0, z0)
    double delta_max = 0.0; // max_t |pi(t) - pi*(t)|

    double L(double t, double z) const;
};

WelReport wel_report(const MarketParams& p, const IntervalConstraint& K,
                     const DeterministicStrategy& strat, int steps = 20000,
                     OdeScheme scheme = OdeScheme::rk4, SolveOptions opts = {});

double wel(const WelReport& report, double t, double z);

// Max absolute gap between two weight curves on a shared uniform t-grid.
double delta_max(const std::vector<double>& curve_a, const std::vector<double>& curve_b);
double delta_max(const DeterministicStrategy& a, const DeterministicStrategy& b, double T,
                 int grid_n = 2001);

enum class SweepAxis { b, sigma, kappa, rho, alpha };
enum class StrategyKind { optimal, capped_merton, capped_unconstrained, riskless, constant };

std::string sweep_axis_name(SweepAxis axis);

struct SweepPoint {
    double x = 0.0;
    double L0 = 0.0;        // NaN when the point is skipped
    double delta_max = 0.0; // NaN when the point is skipped
    std::string flag;       // empty = clean; otherwise why skipped / forced
};

struct SweepResult {
    SweepAxis axis = SweepAxis::b;
    std::vector<SweepPoint> points;
};

struct SweepOptions {
    bool force = false; // compute flagged points instead of skipping them
    int steps = 20000;
    OdeScheme scheme = OdeScheme::rk4;
    double constant_value = 0.0; // for StrategyKind::constant
};

// Recomputes the competitor strategy at every swept point (the capped Merton
// ratio and capped unconstrained weight move with the parameters). Points
// whose assumption check fails are flagged; without force they carry NaN
// results, with force they are computed anyway. The alpha axis sweeps the
// lower constraint bound, all others sweep the market parameter.
SweepResult sweep(const MarketParams& base, const IntervalConstraint& K, SweepAxis axis,
                  double from, double to, int n, StrategyKind kind,
                  const SweepOptions& opts = {});

} // namespace svport
