#include "svport/market.hpp"

#include <cmath>
#include <sstream>

namespace svport {

std::string ValidationReport::describe() const {
    std::ostringstream os;
    for (size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i];
    }
    return os.str();
}

ValidationReport validate_params(const MarketParams& p) {
    ValidationReport rep;
    auto flag = [&](const std::string& msg) { rep.violations.push_back(msg); };

    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(p.r) || !finite(p.eta) || !finite(p.kappa) || !finite(p.theta) ||
        !finite(p.sigma) || !finite(p.rho) || !finite(p.z0) || !finite(p.b) ||
        !finite(p.T) || !finite(p.v0)) {
        flag("all parameters must be finite");
        return rep;
    }

    if (p.r < 0) flag("r must be >= 0");
    if (p.eta <= 0) flag("eta must be > 0");
    if (p.kappa <= 0) flag("kappa must be > 0");
    if (p.theta <= 0) flag("theta must be > 0");
    if (p.sigma <= 0) flag("sigma must be > 0");
    if (p.z0 <= 0) flag("z0 must be > 0");
    if (p.T <= 0) flag("T must be > 0");
    if (p.v0 <= 0) flag("v0 must be > 0");
    if (!(p.rho > -1.0 && p.rho < 1.0)) flag("rho must lie in (-1, 1)");
    if (p.b == 0.0) flag("b must be nonzero");
    if (p.b >= 1.0) flag("b must be < 1");
    if (p.kappa > 0 && p.theta > 0 && p.sigma > 0 && !(2.0 * p.kappa * p.theta > p.sigma * p.sigma))
        flag("Feller condition 2*kappa*theta > sigma^2 fails");
    return rep;
}

double merton_ratio(const MarketParams& p) {
    return p.eta / (1.0 - p.b);
}

ExtendedReal support_function(const IntervalConstraint& K, double x) {
    if (x > 0) {
        if (!K.alpha.is_finite()) return ExtendedReal::pos_inf();
        return ExtendedReal(-K.alpha.as_double() * x);
    }
    if (x < 0) {
        if (!K.beta.is_finite()) return ExtendedReal::pos_inf();
        return ExtendedReal(-K.beta.as_double() * x);
    }
    return ExtendedReal(0.0);
}

double cap(double x, const IntervalConstraint& K) {
    double lo = K.alpha.as_double();
    double hi = K.beta.as_double();
    if (x < lo) return lo;
    if (x > hi) return hi;
    return x;
}

} // namespace svport
