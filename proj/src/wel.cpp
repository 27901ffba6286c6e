#include "svport/wel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace svport {

namespace {

constexpr double kBlowupThreshold = 1e8;

double interp_uniform(const std::vector<double>& ys, double T, double tau,
                      const char* who) {
    if (ys.size() < 2) throw DomainError(std::string(who) + ": curve not populated");
    if (tau < 0.0) {
        if (tau > -1e-12) tau = 0.0;
        else throw DomainError(std::string(who) + ": tau < 0");
    }
    if (tau > T) {
        if (tau < T + 1e-12 * (1.0 + T)) tau = T;
        else throw DomainError(std::string(who) + ": tau > T");
    }
    size_t n = ys.size() - 1;
    double h = T / static_cast<double>(n);
    double pos = tau / h;
    size_t i = static_cast<size_t>(pos);
    if (i >= n) return ys[n];
    double w = pos - static_cast<double>(i);
    return ys[i] * (1.0 - w) + ys[i + 1] * w;
}

} // namespace

DeterministicStrategy strategy_riskless() {
    return {[](double) { return 0.0; }, "riskless"};
}

DeterministicStrategy strategy_constant(double x) {
    std::ostringstream os;
    os << "constant:" << x;
    return {[x](double) { return x; }, os.str()};
}

DeterministicStrategy strategy_capped_merton(const MarketParams& p,
                                             const IntervalConstraint& K) {
    double w = cap(merton_ratio(p), K);
    return {[w](double) { return w; }, "capped_merton"};
}

DeterministicStrategy strategy_capped_unconstrained(const MarketParams& p,
                                                    const IntervalConstraint& K) {
    auto u = std::make_shared<UnconstrainedSolution>(unconstrained_solution(p));
    return {[u, K](double t) { return cap(u->pi(t), K); }, "capped_unconstrained"};
}

DeterministicStrategy strategy_optimal(const MarketParams& p, const IntervalConstraint& K,
                                       SolveOptions opts) {
    auto B = std::make_shared<PiecewiseB>(solve_B(p, K, opts));
    MarketParams pc = p;
    return {[B, pc, K](double t) { return pi_star(*B, pc, K, t); }, "optimal"};
}

double ExponentCurves::eval_A(double tau) const {
    return interp_uniform(A, T, tau, "ExponentCurves::eval_A");
}

double ExponentCurves::eval_B(double tau) const {
    return interp_uniform(B, T, tau, "ExponentCurves::eval_B");
}

ExponentCurves strategy_exponents(const MarketParams& p, const DeterministicStrategy& strat,
                                  int steps, OdeScheme scheme) {
    if (steps < 1) throw DomainError("strategy_exponents: steps must be >= 1");
    if (!strat.sample) throw DomainError("strategy_exponents: strategy has no sampler");

    double omb = 1.0 - p.b;
    auto rhs_B = [&](double tau, double B) {
        double pi = strat.sample(p.T - tau);
        if (!std::isfinite(pi)) {
            throw NonFiniteState("strategy_exponents: strategy returned a non-finite weight");
        }
        return -(0.5 * pi * pi * p.b * omb - p.b * p.eta * pi) +
               (p.sigma * p.rho * p.b * pi - p.kappa) * B + 0.5 * p.sigma * p.sigma * B * B;
    };
    auto rhs_A = [&](double B) { return p.r * p.b + p.kappa * p.theta * B; };

    ExponentCurves out;
    out.T = p.T;
    out.A.resize(static_cast<size_t>(steps) + 1);
    out.B.resize(static_cast<size_t>(steps) + 1);
    out.A[0] = 0.0;
    out.B[0] = 0.0;

    double h = p.T / static_cast<double>(steps);
    double A = 0.0;
    double B = 0.0;
    for (int k = 0; k < steps; ++k) {
        double tau = h * static_cast<double>(k);
        if (scheme == OdeScheme::euler) {
            double dB = rhs_B(tau, B);
            double dA = rhs_A(B);
            B += h * dB;
            A += h * dA;
        } else {
            double kb1 = rhs_B(tau, B);
            double ka1 = rhs_A(B);
            double kb2 = rhs_B(tau + 0.5 * h, B + 0.5 * h * kb1);
            double ka2 = rhs_A(B + 0.5 * h * kb1);
            double kb3 = rhs_B(tau + 0.5 * h, B + 0.5 * h * kb2);
            double ka3 = rhs_A(B + 0.5 * h * kb2);
            double kb4 = rhs_B(tau + h, B + h * kb3);
            double ka4 = rhs_A(B + h * kb3);
            B += h / 6.0 * (kb1 + 2.0 * kb2 + 2.0 * kb3 + kb4);
            A += h / 6.0 * (ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4);
        }
        if (!std::isfinite(A) || !std::isfinite(B) || std::abs(B) > kBlowupThreshold ||
            std::abs(A) > kBlowupThreshold) {
            std::ostringstream os;
            os << "strategy_exponents: exponents blew up near tau = "
               << h * static_cast<double>(k + 1) << " for strategy " << strat.label;
            throw NonFiniteState(os.str());
        }
        out.A[static_cast<size_t>(k) + 1] = A;
        out.B[static_cast<size_t>(k) + 1] = B;
    }
    return out;
}

double WelReport::L(double t, double z) const {
    double tau = p.T - t;
    double dA = strat.eval_A(tau) - optimal.eval_A(tau);
    double dB = strat.eval_B(tau) - optimal.eval_B(tau);
    return 1.0 - std::exp((dA + dB * z) / p.b);
}

WelReport wel_report(const MarketParams& p, const IntervalConstraint& K,
                     const DeterministicStrategy& strat, int steps, OdeScheme scheme,
                     SolveOptions opts) {
    WelReport r;
    r.p = p;
    r.strat_label = strat.label;
    DeterministicStrategy best = strategy_optimal(p, K, opts);
    r.strat = strategy_exponents(p, strat, steps, scheme);
    r.optimal = strategy_exponents(p, best, steps, scheme);
    r.L0 = r.L(0.0, p.z0);
    r.delta_max = delta_max(strat, best, p.T);
    return r;
}

double wel(const WelReport& report, double t, double z) { return report.L(t, z); }

double delta_max(const std::vector<double>& curve_a, const std::vector<double>& curve_b) {
    if (curve_a.size() != curve_b.size() || curve_a.empty()) {
        throw DomainError("delta_max: curves need a common non-empty grid");
    }
    double m = 0.0;
    for (size_t i = 0; i < curve_a.size(); ++i) {
        m = std::max(m, std::abs(curve_a[i] - curve_b[i]));
    }
    return m;
}

double delta_max(const DeterministicStrategy& a, const DeterministicStrategy& b, double T,
                 int grid_n) {
    if (grid_n < 2) throw DomainError("delta_max: grid_n must be >= 2");
    double m = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        double t = T * static_cast<double>(i) / (grid_n - 1);
        m = std::max(m, std::abs(a.sample(t) - b.sample(t)));
    }
    return m;
}

std::string sweep_axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::b: return "b";
        case SweepAxis::sigma: return "sigma";
        case SweepAxis::kappa: return "kappa";
        case SweepAxis::rho: return "rho";
        case SweepAxis::alpha: return "alpha";
    }
    return "?";
}

SweepResult sweep(const MarketParams& base, const IntervalConstraint& K, SweepAxis axis,
                  double from, double to, int n, StrategyKind kind,
                  const SweepOptions& opts) {
    if (n < 1) throw DomainError("sweep: need at least one point");
    SweepResult out;
    out.axis = axis;
    out.points.reserve(static_cast<size_t>(n));
    double nan = std::numeric_limits<double>::quiet_NaN();

    for (int i = 0; i < n; ++i) {
        double x = (n == 1) ? from
                            : from + (to - from) * static_cast<double>(i) /
                                         static_cast<double>(n - 1);
        MarketParams p = base;
        IntervalConstraint Ki = K;
        switch (axis) {
            case SweepAxis::b: p.b = x; break;
            case SweepAxis::sigma: p.sigma = x; break;
            case SweepAxis::kappa: p.kappa = x; break;
            case SweepAxis::rho: p.rho = x; break;
            case SweepAxis::alpha: Ki.alpha = ExtendedReal(x); break;
        }

        SweepPoint pt;
        pt.x = x;
        pt.L0 = nan;
        pt.delta_max = nan;

        ValidationReport vr = validate_params(p);
        if (!vr.ok() || !Ki.valid()) {
            pt.flag = "invalid: " + (vr.ok() ? std::string("constraint interval")
                                             : vr.describe());
            out.points.push_back(std::move(pt));
            continue;
        }
        AssumptionReport ar = check_assumptions(p, Ki);
        bool flagged = !ar.pass();
        if (flagged && !opts.force) {
            pt.flag = "skipped: " + ar.describe();
            out.points.push_back(std::move(pt));
            continue;
        }
        if (flagged) pt.flag = "forced: " + ar.describe();

        try {
            DeterministicStrategy strat;
            switch (kind) {
                case StrategyKind::optimal: strat = strategy_optimal(p, Ki, {true}); break;
                case StrategyKind::capped_merton:
                    strat = strategy_capped_merton(p, Ki);
                    break;
                case StrategyKind::capped_unconstrained:
                    strat = strategy_capped_unconstrained(p, Ki);
                    break;
                case StrategyKind::riskless: strat = strategy_riskless(); break;
                case StrategyKind::constant:
                    strat = strategy_constant(opts.constant_value);
                    break;
            }
            WelReport r = wel_report(p, Ki, strat, opts.steps, opts.scheme, {true});
            pt.L0 = r.L0;
            pt.delta_max = r.delta_max;
        } catch (const std::exception& e) {
            pt.flag = (pt.flag.empty() ? std::string() : pt.flag + "; ") +
                      "error: " + e.what();
            pt.L0 = nan;
            pt.delta_max = nan;
        }
        out.points.push_back(std::move(pt));
    }
    return out;
}

} // namespace svport
