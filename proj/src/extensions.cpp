#include "svport/extensions.hpp"

#include <cmath>
#include <sstream>

namespace svport {

namespace {

bool square_of_size(const std::vector<std::vector<double>>& A, int d) {
    if (static_cast<int>(A.size()) != d) return false;
    for (const auto& row : A) {
        if (static_cast<int>(row.size()) != d) return false;
    }
    return true;
}

double orthogonality_defect(const std::vector<std::vector<double>>& A) {
    int d = static_cast<int>(A.size());
    double worst = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            double dot = 0.0;
            for (int k = 0; k < d; ++k) dot += A[i][k] * A[j][k];
            worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

} // namespace

ValidationReport validate_pcsv(const PcsvParams& pp) {
    ValidationReport rep;
    auto flag = [&](const std::string& msg) { rep.violations.push_back(msg); };

    if (pp.d < 1) {
        flag("d must be >= 1");
        return rep;
    }
    if (!square_of_size(pp.A, pp.d)) flag("A must be d x d");
    if (static_cast<int>(pp.eta.size()) != pp.d) flag("eta must have d entries");
    if (static_cast<int>(pp.factors.size()) != pp.d) flag("factors must have d entries");
    if (static_cast<int>(pp.beta_caps.size()) != pp.d) flag("beta_caps must have d entries");
    if (!rep.ok()) return rep;

    for (const auto& row : pp.A) {
        for (double v : row) {
            if (!std::isfinite(v)) flag("A has a non-finite entry");
        }
    }
    if (rep.ok() && orthogonality_defect(pp.A) > 1e-10) {
        flag("A is not orthogonal (max|A A^T - I| > 1e-10)");
    }
    for (int i = 0; i < pp.d; ++i) {
        const PcsvFactor& f = pp.factors[i];
        std::ostringstream tag;
        tag << "factor " << i << ": ";
        if (!std::isfinite(pp.eta[i])) flag(tag.str() + "eta non-finite");
        if (!(f.kappa > 0.0)) flag(tag.str() + "kappa must be > 0");
        if (!(f.theta > 0.0)) flag(tag.str() + "theta must be > 0");
        if (!(f.sigma > 0.0)) flag(tag.str() + "sigma must be > 0");
        if (!(f.z0 > 0.0)) flag(tag.str() + "z0 must be > 0");
        if (!(f.rho > -1.0 && f.rho < 1.0)) flag(tag.str() + "rho must lie in (-1, 1)");
        if (f.kappa > 0.0 && f.theta > 0.0 && f.sigma > 0.0 &&
            !(2.0 * f.kappa * f.theta > f.sigma * f.sigma)) {
            flag(tag.str() + "Feller condition 2 kappa theta > sigma^2 fails");
        }
        if (!(pp.beta_caps[i] > 0.0)) flag(tag.str() + "beta cap must be > 0");
    }
    if (!(pp.r >= 0.0)) flag("r must be >= 0");
    if (pp.b == 0.0 || !(pp.b < 1.0) || !std::isfinite(pp.b)) {
        flag("b must be nonzero and < 1");
    }
    if (!(pp.T > 0.0)) flag("T must be > 0");
    if (!(pp.v0 > 0.0)) flag("v0 must be > 0");
    return rep;
}

PcsvParams repair_orthogonality(const PcsvParams& pp) {
    if (!square_of_size(pp.A, pp.d)) {
        throw DomainError("repair_orthogonality: A must be d x d");
    }
    PcsvParams out = pp;
    int d = pp.d;
    // Modified Gram-Schmidt on the columns a_j (A[row][col]).
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < j; ++k) {
            double dot = 0.0;
            for (int i = 0; i < d; ++i) dot += out.A[i][j] * out.A[i][k];
            for (int i = 0; i < d; ++i) out.A[i][j] -= dot * out.A[i][k];
        }
        double norm = 0.0;
        for (int i = 0; i < d; ++i) norm += out.A[i][j] * out.A[i][j];
        norm = std::sqrt(norm);
        if (!(norm > 1e-12)) {
            throw DomainError("repair_orthogonality: columns of A are not independent");
        }
        for (int i = 0; i < d; ++i) out.A[i][j] /= norm;
    }
    return out;
}

MarketParams pcsv_factor_market(const PcsvParams& pp, int i) {
    if (i < 0 || i >= pp.d) throw DomainError("pcsv_factor_market: factor index out of range");
    const PcsvFactor& f = pp.factors[static_cast<size_t>(i)];
    MarketParams p;
    p.r = pp.r;
    double eta_i = 0.0;
    for (int k = 0; k < pp.d; ++k) eta_i += pp.A[static_cast<size_t>(k)][static_cast<size_t>(i)] * pp.eta[static_cast<size_t>(k)];
    p.eta = eta_i;
    p.kappa = f.kappa;
    p.theta = f.theta;
    p.sigma = f.sigma;
    p.rho = f.rho;
    p.z0 = f.z0;
    p.b = pp.b;
    p.T = pp.T;
    p.v0 = pp.v0;
    return p;
}

IntervalConstraint pcsv_factor_constraint(const PcsvParams& pp, int i) {
    if (i < 0 || i >= pp.d) {
        throw DomainError("pcsv_factor_constraint: factor index out of range");
    }
    return IntervalConstraint::bounds(0.0, std::sqrt(pp.beta_caps[static_cast<size_t>(i)]));
}

std::vector<double> PcsvSolution::pi_A(double t) const {
    std::vector<double> out(static_cast<size_t>(pp.d));
    for (int i = 0; i < pp.d; ++i) {
        out[static_cast<size_t>(i)] =
            pi_star(B[static_cast<size_t>(i)], factor_markets[static_cast<size_t>(i)],
                    pcsv_factor_constraint(pp, i), t);
    }
    return out;
}

std::vector<double> PcsvSolution::pi(double t) const {
    std::vector<double> rotated = pi_A(t);
    std::vector<double> out(static_cast<size_t>(pp.d), 0.0);
    for (int i = 0; i < pp.d; ++i) {
        for (int j = 0; j < pp.d; ++j) {
            out[static_cast<size_t>(i)] +=
                pp.A[static_cast<size_t>(i)][static_cast<size_t>(j)] * rotated[static_cast<size_t>(j)];
        }
    }
    return out;
}

PcsvSolution solve_pcsv(const PcsvParams& pp, SolveOptions opts) {
    ValidationReport vr = validate_pcsv(pp);
    if (!vr.ok()) throw DomainError("solve_pcsv: invalid parameters: " + vr.describe());

    PcsvSolution sol;
    sol.pp = pp;
    sol.B.reserve(static_cast<size_t>(pp.d));
    sol.factor_markets.reserve(static_cast<size_t>(pp.d));
    for (int i = 0; i < pp.d; ++i) {
        MarketParams p = pcsv_factor_market(pp, i);
        IntervalConstraint Ki = pcsv_factor_constraint(pp, i);
        try {
            sol.B.push_back(solve_B(p, Ki, opts));
        } catch (const AssumptionError& e) {
            std::ostringstream os;
            os << "solve_pcsv: factor " << i << ": " << e.what();
            throw AssumptionError(os.str());
        }
        sol.factor_markets.push_back(p);
    }
    return sol;
}

std::vector<ExposureRow> exposure_report(const PcsvSolution& sol, int grid_n) {
    if (grid_n < 2) throw DomainError("exposure_report: grid_n must be >= 2");
    const PcsvParams& pp = sol.pp;
    std::vector<ExposureRow> rows(static_cast<size_t>(pp.d));
    for (int i = 0; i < pp.d; ++i) rows[static_cast<size_t>(i)] = {i, 0.0, 0.0};

    for (int g = 0; g < grid_n; ++g) {
        double t = pp.T * static_cast<double>(g) / (grid_n - 1);
        std::vector<double> w = sol.pi(t);
        for (int i = 0; i < pp.d; ++i) {
            double exposure = 0.0;
            for (int k = 0; k < pp.d; ++k) {
                exposure += pp.A[static_cast<size_t>(k)][static_cast<size_t>(i)] * w[static_cast<size_t>(k)];
            }
            double ratio = exposure * exposure / pp.beta_caps[static_cast<size_t>(i)];
            if (ratio > rows[static_cast<size_t>(i)].max_ratio) {
                rows[static_cast<size_t>(i)].max_ratio = ratio;
                rows[static_cast<size_t>(i)].worst_t = t;
            }
        }
    }
    return rows;
}

double VolFunction::operator()(double z) const {
    if (!(z > 0.0)) throw DomainError("VolFunction: z must be > 0");
    double v = 0.0;
    switch (kind) {
        case Kind::constant: v = c; break;
        case Kind::sqrt_z: v = std::sqrt(z); break;
        case Kind::power: v = c * std::pow(z, p); break;
    }
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError("VolFunction: Sigma(z) must be positive and finite");
    }
    return v;
}

VolFunction VolFunction::constant(double value) {
    VolFunction f;
    f.kind = Kind::constant;
    f.c = value;
    return f;
}

VolFunction VolFunction::sqrt_z() {
    VolFunction f;
    f.kind = Kind::sqrt_z;
    return f;
}

VolFunction VolFunction::power(double exponent, double coefficient) {
    VolFunction f;
    f.kind = Kind::power;
    f.p = exponent;
    f.c = coefficient;
    return f;
}

double InverseVolPolicy::operator()(double t, double z) const {
    if (!(z > 0.0)) throw DomainError("inverse_vol_policy: z must be > 0");
    double s = vol(z);
    if (mode == MprCase::constant_mpr) return capped_merton / s;
    return (std::sqrt(z) / s) * pi_star(*core, p, K, t);
}

InverseVolPolicy inverse_vol_policy(const MarketParams& p, const VolFunction& vol,
                                    const IntervalConstraint& K, MprCase mode,
                                    SolveOptions opts) {
    InverseVolPolicy pol;
    pol.mode = mode;
    pol.vol = vol;
    pol.p = p;
    pol.K = K;
    if (!K.valid()) throw DomainError("inverse_vol_policy: invalid constraint interval");
    if (mode == MprCase::constant_mpr) {
        ValidationReport vr = validate_params(p);
        if (!vr.ok()) {
            throw DomainError("inverse_vol_policy: invalid parameters: " + vr.describe());
        }
        pol.capped_merton = cap(merton_ratio(p), K);
    } else {
        pol.core = solve_B(p, K, opts);
    }
    return pol;
}

double inverse_vol_weight(const InverseVolPolicy& policy, double t, double z) {
    return policy(t, z);
}

} // namespace svport
