#pragma once

#include <cstdint>
#include <vector>

#include "svport/wel.hpp"

namespace svport {

// Full-truncation Euler simulation settings. Path i (or antithetic pair i)
// draws from its own deterministic substream mixed from (seed, i), so
// estimates are bit-identical for a fixed (seed, cfg) no matter how the
// work is split.
struct SimConfig {
    long long paths = 100000;
    int steps_per_year = 1000;
    std::uint64_t seed = 42;
    bool antithetic = true;
    bool record_full = false; // keep z / dW^z / dW per step (small runs only)
};

// Throws DomainError on bad settings (paths >= 2 and even under antithetic,
// steps_per_year >= 100, record_full only for modest sizes).
void validate_sim_config(const SimConfig& cfg, double T);

struct PathEnsemble {
    double T = 0.0;
    int steps = 0;
    double dt = 0.0;
    std::vector<double> z_terminal;         // raw (pre-truncation) state at T
    std::vector<std::vector<double>> z;     // recorded runs: steps+1 raw states
    std::vector<std::vector<double>> dWz;   // recorded runs: steps increments
    std::vector<std::vector<double>> dW;    // recorded runs: steps increments
    long long clipped_increments = 0;       // steps entered with z < 0
    long long total_increments = 0;

    bool full() const { return !z.empty(); }
    double clip_fraction() const;
};

// Variance paths z via full-truncation Euler (the negative part is clipped
// in drift and diffusion only; the state itself may dip below zero) and the
// correlated stock shock dW = rho dW^z + sqrt(1-rho^2) dW_perp.
PathEnsemble simulate_paths(const MarketParams& p, const SimConfig& cfg);

// Terminal wealth of one recorded path under a deterministic strategy:
//     V(T) = v0 * exp( sum_k [ (r + eta z_k^+ pi_k - 1/2 z_k^+ pi_k^2) dt
//                              + pi_k sqrt(z_k^+) dW_k ] ),
// left-point rule on the recording grid.
double terminal_wealth(const PathEnsemble& paths, std::size_t index,
                       const DeterministicStrategy& strat, const MarketParams& p);

struct UtilityEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long long paths_used = 0;
};

// Mean and standard error of U(V(T)) = V(T)^b / b under the strategy.
// Antithetic runs average each +/- pair before the variance pass.
UtilityEstimate estimate_utility(const MarketParams& p, const DeterministicStrategy& strat,
                                 const SimConfig& cfg);

// Both strategies driven by the same shock ensemble; diff_* summarize
// U_a - U_b per (pair-averaged) sample for ranking tests.
struct PairedUtility {
    UtilityEstimate first;
    UtilityEstimate second;
    double diff_mean = 0.0;
    double diff_std_error = 0.0;
};

PairedUtility estimate_utility_paired(const MarketParams& p, const DeterministicStrategy& a,
                                      const DeterministicStrategy& b, const SimConfig& cfg);

// E[z(t)] = theta + (z0 - theta) e^{-kappa t}.
double cir_mean(const MarketParams& p, double t);

// U(v) = v^b / b.
double crra_utility(double v, double b);

} // namespace svport
