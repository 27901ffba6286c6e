#include "svport/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace svport {

namespace {

constexpr double kBlowupThreshold = 1e8;

std::string coeff_str(const RiccatiCoeffs& c) {
    std::ostringstream os;
    os << "(r0=" << c.r0 << ", r1=" << c.r1 << ", r2=" << c.r2 << ")";
    return os.str();
}

double require_r3(const RiccatiCoeffs& c) {
    if (c.r2 == 0.0) {
        throw CoefficientError("riccati: r2 = 0 degenerates the quadratic; closed form "
                               "requires r2 != 0 " + coeff_str(c));
    }
    if (!c.r3) {
        throw CoefficientError("riccati: r1^2 + 2 r0 r2 <= 0 for " + coeff_str(c) +
                               "; no real r3, closed form unavailable");
    }
    return *c.r3;
}

} // namespace

RiccatiCoeffs make_coeffs(double r0, double r1, double r2) {
    RiccatiCoeffs c{r0, r1, r2, std::nullopt};
    double disc = c.discriminant();
    if (disc > 0.0) c.r3 = std::sqrt(disc);
    return c;
}

double riccati_rhs(const RiccatiCoeffs& c, double B) {
    return -c.r0 + c.r1 * B + 0.5 * c.r2 * B * B;
}

ExtendedReal riccati_lifetime(const RiccatiCoeffs& c, double B0) {
    double r3 = require_r3(c);
    double s = c.r1 + c.r2 * B0 - r3;
    if (s > 0.0) return ExtendedReal(std::log((c.r1 + c.r2 * B0 + r3) / s) / r3);
    return ExtendedReal::pos_inf();
}

RiccatiFlow make_flow(const RiccatiCoeffs& c, double B0) {
    return RiccatiFlow{c, B0, riccati_lifetime(c, B0)};
}

double riccati_eval(const RiccatiFlow& f, double tau) {
    if (tau < 0.0) throw DomainError("riccati_eval: tau < 0");
    if (ExtendedReal(tau) >= f.lifetime) {
        std::ostringstream os;
        os << "riccati_eval: tau=" << tau << " >= lifetime=" << f.lifetime.as_double();
        throw LifetimeExceeded(os.str());
    }
    const RiccatiCoeffs& c = f.coeffs;
    double r3 = require_r3(c);
    double c1 = c.r1 + c.r2 * f.B0 - r3;
    double E = std::expm1(r3 * tau);
    if (!std::isfinite(E)) {
        // e^{r3 tau} overflowed; only possible on an infinite-lifetime flow
        // (c1 <= 0), whose limit is the lower root of the quadratic.
        if (c1 == 0.0) return f.B0;
        return (-c.r1 - r3) / c.r2;
    }
    double num = 2.0 * c.r2 * r3 * f.B0 + E * (c.r1 + r3) * c1;
    double den = 2.0 * c.r2 * r3 - c.r2 * E * c1;
    return num / den;
}

ExtendedReal transition_time(const RiccatiCoeffs& c, double B0, double B_target) {
    double r3 = require_r3(c);
    if (B_target == B0) return ExtendedReal(0.0);

    double d0 = riccati_rhs(c, B0);
    if (d0 == 0.0) return ExtendedReal::pos_inf(); // stationary start never moves
    if ((B_target - B0) * d0 < 0.0) return ExtendedReal::pos_inf(); // wrong side

    // A stationary point strictly between start and target is an asymptote
    // the flow cannot cross.
    if (c.r2 != 0.0) {
        double lo = std::min(B0, B_target);
        double hi = std::max(B0, B_target);
        for (double root : {(-c.r1 + r3) / c.r2, (-c.r1 - r3) / c.r2}) {
            if (root > lo && root < hi) return ExtendedReal::pos_inf();
        }
        // Target exactly at a stationary point: approached asymptotically only.
        if (riccati_rhs(c, B_target) == 0.0) return ExtendedReal::pos_inf();
    }

    ExtendedReal lifetime = riccati_lifetime(c, B0);
    double D = (c.r1 + c.r2 * B0 - r3) * (c.r1 + c.r2 * B_target + r3);
    double tau = std::numeric_limits<double>::quiet_NaN();
    if (D != 0.0) {
        double arg = 2.0 * c.r2 * r3 * (B_target - B0) / D;
        if (arg > -1.0) tau = std::log1p(arg) / r3;
    }
    if (std::isfinite(tau) && tau >= 0.0 && ExtendedReal(tau) < lifetime) {
        return ExtendedReal(tau);
    }

    // Cancellation fallback: the flow is strictly monotone toward the target
    // with no stationary point in between, so the crossing exists and
    // brackets cleanly on [0, hi].
    RiccatiFlow flow{c, B0, lifetime};
    auto gap = [&](double t) { return riccati_eval(flow, t) - B_target; };
    double hi = lifetime.is_finite() ? lifetime.as_double() : 1.0;
    if (!lifetime.is_finite()) {
        double cap_hi = 1e6;
        while (hi < cap_hi && gap(0.0) * gap(hi) > 0.0) hi *= 2.0;
        if (gap(0.0) * gap(hi) > 0.0) return ExtendedReal::pos_inf();
    } else {
        // Shrink inside the lifetime until the bracket closes.
        double lo_t = 0.0;
        double probe = hi * (1.0 - 1e-12);
        while (probe > lo_t && !std::isfinite(gap(probe))) probe = lo_t + 0.5 * (probe - lo_t);
        hi = probe;
        if (gap(0.0) * gap(hi) > 0.0) return ExtendedReal::pos_inf();
    }
    return ExtendedReal(bisect(gap, 0.0, hi, 1e-12));
}

double riccati_integral(const RiccatiFlow& f, double T) {
    if (T < 0.0) throw DomainError("riccati_integral: T < 0");
    if (T == 0.0) return 0.0;
    if (ExtendedReal(T) >= f.lifetime) {
        throw LifetimeExceeded("riccati_integral: T >= lifetime");
    }
    return adaptive_simpson([&](double t) { return riccati_eval(f, t); }, 0.0, T, 1e-10);
}

namespace {

double integral_closed(const RiccatiFlow& f, double T, double exponent_coef) {
    const RiccatiCoeffs& c = f.coeffs;
    double r3 = require_r3(c);
    if (ExtendedReal(T) >= f.lifetime) {
        throw LifetimeExceeded("riccati integral closed form: T >= lifetime");
    }
    double eT = std::exp(r3 * T);
    double den = r3 * (eT + 1.0) - (c.r1 + c.r2 * f.B0) * (eT - 1.0);
    return (2.0 / c.r2) * std::log(2.0 * r3 * std::exp((r3 - exponent_coef) * T / 2.0) / den);
}

} // namespace

double riccati_integral_closed_r1(const RiccatiFlow& f, double T) {
    return integral_closed(f, T, f.coeffs.r1);
}

double riccati_integral_closed_b0(const RiccatiFlow& f, double T) {
    return integral_closed(f, T, f.B0);
}

IntegralCheck riccati_integral_report(const RiccatiFlow& f, double T) {
    IntegralCheck rep;
    rep.quadrature = riccati_integral(f, T);
    rep.closed_r1 = riccati_integral_closed_r1(f, T);
    rep.closed_b0 = riccati_integral_closed_b0(f, T);
    return rep;
}

std::vector<double> ode_solve_numeric(const std::function<double(double, double)>& rhs,
                                      double y0, double T, int steps, OdeScheme scheme) {
    if (steps < 1) throw DomainError("ode_solve_numeric: steps must be >= 1");
    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(steps) + 1);
    grid.push_back(y0);
    double h = T / steps;
    double y = y0;
    for (int k = 0; k < steps; ++k) {
        double t = k * h;
        if (scheme == OdeScheme::euler) {
            y += h * rhs(t, y);
        } else {
            double k1 = rhs(t, y);
            double k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
            double k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
            double k4 = rhs(t + h, y + h * k3);
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if (!std::isfinite(y) || std::abs(y) > kBlowupThreshold) {
            std::ostringstream os;
            os << "ode_solve_numeric: blow-up at tau=" << (t + h) << " (y=" << y << ")";
            throw NonFiniteState(os.str());
        }
        grid.push_back(y);
    }
    return grid;
}

ExtendedReal ode_blowup_time(const std::function<double(double, double)>& rhs,
                             double y0, double T, int steps, OdeScheme scheme) {
    double h = T / steps;
    double y = y0;
    for (int k = 0; k < steps; ++k) {
        double t = k * h;
        if (scheme == OdeScheme::euler) {
            y += h * rhs(t, y);
        } else {
            double k1 = rhs(t, y);
            double k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
            double k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
            double k4 = rhs(t + h, y + h * k3);
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if (!std::isfinite(y) || std::abs(y) > kBlowupThreshold) {
            return ExtendedReal(t + h);
        }
    }
    return ExtendedReal::pos_inf();
}

namespace {

double simpson_rule(const std::function<double(double)>& f, double a, double fa, double b,
                    double fb, double m, double fm) {
    (void)m;
    (void)f;
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                   double fb, double m, double fm, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson_rule(f, a, fa, m, fm, lm, flm);
    double right = simpson_rule(f, m, fm, b, fb, rm, frm);
    double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol) {
        return left + right + diff / 15.0;
    }
    return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol) {
    if (a == b) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a);
    double fb = f(b);
    double fm = f(m);
    double whole = simpson_rule(f, a, fa, b, fb, m, fm);
    return simpson_rec(f, a, fa, b, fb, m, fm, whole, abs_tol, 48);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw DomainError("bisect: endpoints do not bracket a root");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if (flo * fmid < 0.0) {
            hi = mid;
            fhi = fmid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace svport
