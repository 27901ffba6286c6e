#pragma once

#include <optional>
#include <string>
#include <vector>

#include "svport/policy.hpp"

namespace svport {

// Principal-component stochastic volatility market: covariance
// A diag(z) A^T with orthogonal A = (a_1 ... a_d) and d independent CIR
// eigenvalue processes. Exposure caps (a_i^T pi)^2 <= beta_i make the
// constraint set A * X[0, sqrt(beta_i)] in rotated coordinates.
struct PcsvFactor {
    double kappa = 0.0;
    double theta = 0.0;
    double sigma = 0.0;
    double z0 = 0.0;
    double rho = 0.0;
};

struct PcsvParams {
    int d = 0;
    std::vector<std::vector<double>> A; // d x d, orthogonal
    std::vector<double> eta;            // d
    std::vector<PcsvFactor> factors;    // d
    std::vector<double> beta_caps;      // d, positive
    double r = 0.0;
    double b = 0.0;
    double T = 0.0;
    double v0 = 1.0;
};

// Orthogonality enforced to max|A A^T - I| <= 1e-10; per-factor Feller;
// positive caps; shared scalar checks as in validate_params.
ValidationReport validate_pcsv(const PcsvParams& pp);

// Modified Gram-Schmidt orthonormalization of A's columns, for inputs that
// only just miss the orthogonality tolerance.
PcsvParams repair_orthogonality(const PcsvParams& pp);

// The 1-D market each factor solves after rotation: eta_i = (A^T eta)_i,
// constraint [0, sqrt(beta_i)], shared r, b, T, v0.
MarketParams pcsv_factor_market(const PcsvParams& pp, int i);
IntervalConstraint pcsv_factor_constraint(const PcsvParams& pp, int i);

struct PcsvSolution {
    PcsvParams pp;
    std::vector<PiecewiseB> B;                 // per factor
    std::vector<MarketParams> factor_markets;  // per factor

    // Rotated weights: component i is Cap((eta_i + sigma_i rho_i B_i)/(1-b),
    // 0, sqrt(beta_i)).
    std::vector<double> pi_A(double t) const;
    // Asset weights A * pi_A(t).
    std::vector<double> pi(double t) const;
};

// Runs the 1-D solver factor by factor. Throws DomainError on invalid
// parameters and AssumptionError naming the offending factor when its
// assumption check fails (unless opts.force).
PcsvSolution solve_pcsv(const PcsvParams& pp, SolveOptions opts = {});

struct ExposureRow {
    int factor = 0;
    double max_ratio = 0.0; // max_t (a_i^T pi(t))^2 / beta_i
    double worst_t = 0.0;
};

// Recomputes exposures from the assembled asset weights (dot products with
// the columns of A), independently of the rotated representation.
std::vector<ExposureRow> exposure_report(const PcsvSolution& sol, int grid_n = 2001);

// Pointwise-invertible volatility multiplier Sigma(z).
struct VolFunction {
    enum class Kind { constant, sqrt_z, power };
    Kind kind = Kind::sqrt_z;
    double c = 1.0; // constant value / power coefficient
    double p = 1.0; // power exponent

    double operator()(double z) const; // DomainError when z <= 0 or Sigma <= 0

    static VolFunction constant(double value);
    static VolFunction sqrt_z();
    static VolFunction power(double exponent, double coefficient = 1.0);
};

// The two solved inverse-volatility constraint shapes:
//   constant_mpr: market price of risk a constant vector eta, moving
//     constraint (1/Sigma(z))[alpha, beta]; optimum Cap(eta/(1-b), alpha,
//     beta) / Sigma(z).
//   heston_mpr: market price of risk eta sqrt(z), moving constraint
//     (sqrt(z)/Sigma(z))[alpha, beta]; optimum (sqrt(z)/Sigma(z)) pi*(t)
//     with pi* the solved core policy.
enum class MprCase { constant_mpr, heston_mpr };

struct InverseVolPolicy {
    MprCase mode = MprCase::heston_mpr;
    VolFunction vol;
    MarketParams p;
    IntervalConstraint K;
    double capped_merton = 0.0;     // constant_mpr
    std::optional<PiecewiseB> core; // heston_mpr

    double operator()(double t, double z) const;
};

// heston_mpr solves the core problem (AssumptionError per solve_B unless
// opts.force); constant_mpr needs no dynamic solve.
InverseVolPolicy inverse_vol_policy(const MarketParams& p, const VolFunction& vol,
                                    const IntervalConstraint& K, MprCase mode,
                                    SolveOptions opts = {});

double inverse_vol_weight(const InverseVolPolicy& policy, double t, double z);

} // namespace svport
