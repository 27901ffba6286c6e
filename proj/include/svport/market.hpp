#pragma once

#include <string>
#include <vector>

#include "svport/extended_real.hpp"

namespace svport {

// Market and preference constants. Rates are per year, T in years.
// b is the CRRA exponent of U(v) = v^b / b (b < 1, b != 0); risk aversion
// is 1 - b.
struct MarketParams {
    double r = 0.0;      // risk-free rate
    double eta = 0.0;    // market-price-of-risk driver: excess drift = eta * z
    double kappa = 0.0;  // variance mean-reversion speed
    double theta = 0.0;  // long-term variance level
    double sigma = 0.0;  // vol-of-vol
    double rho = 0.0;    // correlation between stock and variance shocks
    double z0 = 0.0;     // initial variance
    double b = 0.0;      // CRRA exponent
    double T = 0.0;      // horizon
    double v0 = 1.0;     // initial wealth
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string describe() const;
};

// Report-style check of the standing parameter restrictions, including
// Feller's condition 2*kappa*theta > sigma^2. Never throws.
ValidationReport validate_params(const MarketParams& p);

// pi_M = eta / (1 - b), the optimal constant risky fraction when volatility
// is constant.
double merton_ratio(const MarketParams& p);

// Closed interval K = [alpha, beta] on the extended reals with nonempty
// interior (alpha < beta).
struct IntervalConstraint {
    ExtendedReal alpha;
    ExtendedReal beta;

    bool valid() const { return alpha < beta; }
    bool contains(double x) const { return alpha <= ExtendedReal(x) && ExtendedReal(x) <= beta; }

    static IntervalConstraint all() {
        return {ExtendedReal::neg_inf(), ExtendedReal::pos_inf()};
    }
    static IntervalConstraint bounds(double a, double b) {
        return {ExtendedReal(a), ExtendedReal(b)};
    }
};

// Support function delta_K(x) = -inf_{y in K} x*y
//                             = -alpha*x for x > 0, -beta*x for x < 0, 0 at 0;
// +inf when the active bound is infinite.
ExtendedReal support_function(const IntervalConstraint& K, double x);

// Pointwise projection onto K: median(alpha, x, beta).
double cap(double x, const IntervalConstraint& K);

} // namespace svport
