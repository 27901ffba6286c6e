#include "svport/montecarlo.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace svport {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

double to_unit(std::uint64_t x) { return (static_cast<double>(x >> 11) + 0.5) * 0x1p-53; }

// One standard-normal pair per call (Box-Muller), two engine draws each.
struct NormalSource {
    std::mt19937_64 eng;

    explicit NormalSource(std::uint64_t s) : eng(s) {}

    void draw(double& n1, double& n2) {
        double u1 = to_unit(eng());
        double u2 = to_unit(eng());
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        n1 = r * std::cos(a);
        n2 = r * std::sin(a);
    }
};

int step_count(const MarketParams& p, const SimConfig& cfg) {
    double raw = static_cast<double>(cfg.steps_per_year) * p.T;
    int steps = static_cast<int>(std::llround(raw));
    return steps < 1 ? 1 : steps;
}

void check_market_for_sim(const MarketParams& p) {
    if (!(p.T > 0.0)) throw DomainError("simulation: T must be > 0");
    if (!(p.v0 > 0.0)) throw DomainError("simulation: v0 must be > 0");
    if (!(p.z0 >= 0.0)) throw DomainError("simulation: z0 must be >= 0");
    if (p.b == 0.0) throw DomainError("simulation: b must be nonzero");
    if (!(p.rho > -1.0 && p.rho < 1.0)) {
        throw DomainError("simulation: rho must lie in (-1, 1)");
    }
}

struct Welford {
    long long n = 0;
    double mean = 0.0;
    double M2 = 0.0;

    void add(double x) {
        ++n;
        double d = x - mean;
        mean += d / static_cast<double>(n);
        M2 += d * (x - mean);
    }
    double variance() const { return n > 1 ? M2 / static_cast<double>(n - 1) : 0.0; }
    double std_error() const {
        return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
    }
};

// Advances one path over pre-drawn normals (scaled by sign) while
// accumulating each strategy's log-wealth integral. pis[s][k] = pi_s(t_k).
void run_path(const MarketParams& p, const std::vector<std::vector<double>>& pis,
              const double* n1, const double* n2, double sign, int steps, double dt,
              double* I_out, double& z_terminal, long long& clipped) {
    double sqdt = std::sqrt(dt);
    double rr = std::sqrt(1.0 - p.rho * p.rho);
    size_t S = pis.size();
    for (size_t s = 0; s < S; ++s) I_out[s] = 0.0;

    double z = p.z0;
    for (int k = 0; k < steps; ++k) {
        if (z < 0.0) ++clipped;
        double zp = z > 0.0 ? z : 0.0;
        double sq = std::sqrt(zp);
        double dWz = sqdt * sign * n1[k];
        double dW = p.rho * dWz + rr * sqdt * sign * n2[k];
        for (size_t s = 0; s < S; ++s) {
            double pi = pis[s][static_cast<size_t>(k)];
            I_out[s] += (p.r + p.eta * zp * pi - 0.5 * zp * pi * pi) * dt + pi * sq * dW;
        }
        z += p.kappa * (p.theta - zp) * dt + p.sigma * sq * dWz;
    }
    z_terminal = z;
}

std::vector<double> sample_strategy(const DeterministicStrategy& strat, int steps,
                                    double dt) {
    if (!strat.sample) throw DomainError("simulation: strategy has no sampler");
    std::vector<double> out(static_cast<size_t>(steps));
    for (int k = 0; k < steps; ++k) {
        double v = strat.sample(dt * static_cast<double>(k));
        if (!std::isfinite(v)) {
            throw NonFiniteState("simulation: strategy returned a non-finite weight");
        }
        out[static_cast<size_t>(k)] = v;
    }
    return out;
}

struct EstimateScratch {
    std::vector<double> n1, n2;
    std::vector<double> I;
};

// Shared driver: Welford statistics of per-sample utilities for S strategies
// plus the per-sample difference U_0 - U_1 when S = 2.
void run_estimate(const MarketParams& p, const std::vector<std::vector<double>>& pis,
                  const SimConfig& cfg, std::vector<Welford>& per_strategy,
                  Welford* diff01) {
    int steps = step_count(p, cfg);
    double dt = p.T / static_cast<double>(steps);
    size_t S = pis.size();
    double log_v0 = std::log(p.v0);

    EstimateScratch sc;
    sc.n1.resize(static_cast<size_t>(steps));
    sc.n2.resize(static_cast<size_t>(steps));
    sc.I.resize(S);
    std::vector<double> I_anti(S);

    long long clipped = 0;
    double z_term = 0.0;

    // U(v0 e^I) = e^{b (ln v0 + I)} / b, evaluated without materializing the
    // wealth level (avoids spurious under/overflow at extreme b).
    auto utility = [&](double I) { return std::exp(p.b * (log_v0 + I)) / p.b; };

    if (cfg.antithetic) {
        long long pairs = cfg.paths / 2;
        for (long long g = 0; g < pairs; ++g) {
            NormalSource src(mix_seed(cfg.seed, static_cast<std::uint64_t>(g)));
            for (int k = 0; k < steps; ++k) {
                src.draw(sc.n1[static_cast<size_t>(k)], sc.n2[static_cast<size_t>(k)]);
            }
            run_path(p, pis, sc.n1.data(), sc.n2.data(), 1.0, steps, dt, sc.I.data(),
                     z_term, clipped);
            run_path(p, pis, sc.n1.data(), sc.n2.data(), -1.0, steps, dt, I_anti.data(),
                     z_term, clipped);
            double u0 = 0.0, u1 = 0.0;
            for (size_t s = 0; s < S; ++s) {
                double u = 0.5 * (utility(sc.I[s]) + utility(I_anti[s]));
                per_strategy[s].add(u);
                if (s == 0) u0 = u;
                if (s == 1) u1 = u;
            }
            if (diff01 && S >= 2) diff01->add(u0 - u1);
        }
    } else {
        for (long long i = 0; i < cfg.paths; ++i) {
            NormalSource src(mix_seed(cfg.seed, static_cast<std::uint64_t>(i)));
            for (int k = 0; k < steps; ++k) {
                src.draw(sc.n1[static_cast<size_t>(k)], sc.n2[static_cast<size_t>(k)]);
            }
            run_path(p, pis, sc.n1.data(), sc.n2.data(), 1.0, steps, dt, sc.I.data(),
                     z_term, clipped);
            double u0 = 0.0, u1 = 0.0;
            for (size_t s = 0; s < S; ++s) {
                double u = utility(sc.I[s]);
                per_strategy[s].add(u);
                if (s == 0) u0 = u;
                if (s == 1) u1 = u;
            }
            if (diff01 && S >= 2) diff01->add(u0 - u1);
        }
    }
}

UtilityEstimate to_estimate(const Welford& w, long long paths_used) {
    UtilityEstimate e;
    e.mean = w.mean;
    e.std_error = w.std_error();
    e.paths_used = paths_used;
    if (!std::isfinite(e.mean) || !std::isfinite(e.std_error)) {
        throw NonFiniteState("estimate_utility: estimate left the finite range");
    }
    return e;
}

} // namespace

void validate_sim_config(const SimConfig& cfg, double T) {
    if (cfg.paths < 2) throw DomainError("SimConfig: paths must be >= 2");
    if (cfg.antithetic && cfg.paths % 2 != 0) {
        throw DomainError("SimConfig: antithetic sampling needs an even path count");
    }
    if (cfg.steps_per_year < 100) {
        throw DomainError("SimConfig: steps_per_year must be >= 100");
    }
    if (cfg.record_full) {
        double entries = static_cast<double>(cfg.paths) *
                         (static_cast<double>(cfg.steps_per_year) * T + 1.0);
        if (entries > 5e7) {
            throw DomainError("SimConfig: record_full run too large to materialize");
        }
    }
}

double PathEnsemble::clip_fraction() const {
    return total_increments > 0
               ? static_cast<double>(clipped_increments) / static_cast<double>(total_increments)
               : 0.0;
}

PathEnsemble simulate_paths(const MarketParams& p, const SimConfig& cfg) {
    check_market_for_sim(p);
    validate_sim_config(cfg, p.T);
    int steps = step_count(p, cfg);
    double dt = p.T / static_cast<double>(steps);
    double sqdt = std::sqrt(dt);
    double rr = std::sqrt(1.0 - p.rho * p.rho);

    PathEnsemble out;
    out.T = p.T;
    out.steps = steps;
    out.dt = dt;
    out.z_terminal.resize(static_cast<size_t>(cfg.paths));
    if (cfg.record_full) {
        out.z.assign(static_cast<size_t>(cfg.paths),
                     std::vector<double>(static_cast<size_t>(steps) + 1));
        out.dWz.assign(static_cast<size_t>(cfg.paths),
                       std::vector<double>(static_cast<size_t>(steps)));
        out.dW.assign(static_cast<size_t>(cfg.paths),
                      std::vector<double>(static_cast<size_t>(steps)));
    }

    std::vector<double> n1(static_cast<size_t>(steps)), n2(static_cast<size_t>(steps));
    auto advance = [&](long long path_idx, double sign) {
        double z = p.z0;
        if (cfg.record_full) out.z[static_cast<size_t>(path_idx)][0] = z;
        for (int k = 0; k < steps; ++k) {
            if (z < 0.0) ++out.clipped_increments;
            double zp = z > 0.0 ? z : 0.0;
            double dWz = sqdt * sign * n1[static_cast<size_t>(k)];
            double dW = p.rho * dWz + rr * sqdt * sign * n2[static_cast<size_t>(k)];
            z += p.kappa * (p.theta - zp) * dt + p.sigma * std::sqrt(zp) * dWz;
            if (cfg.record_full) {
                out.z[static_cast<size_t>(path_idx)][static_cast<size_t>(k) + 1] = z;
                out.dWz[static_cast<size_t>(path_idx)][static_cast<size_t>(k)] = dWz;
                out.dW[static_cast<size_t>(path_idx)][static_cast<size_t>(k)] = dW;
            }
            ++out.total_increments;
        }
        out.z_terminal[static_cast<size_t>(path_idx)] = z;
    };

    if (cfg.antithetic) {
        long long pairs = cfg.paths / 2;
        for (long long g = 0; g < pairs; ++g) {
            NormalSource src(mix_seed(cfg.seed, static_cast<std::uint64_t>(g)));
            for (int k = 0; k < steps; ++k) {
                src.draw(n1[static_cast<size_t>(k)], n2[static_cast<size_t>(k)]);
            }
            advance(2 * g, 1.0);
            advance(2 * g + 1, -1.0);
        }
    } else {
        for (long long i = 0; i < cfg.paths; ++i) {
            NormalSource src(mix_seed(cfg.seed, static_cast<std::uint64_t>(i)));
            for (int k = 0; k < steps; ++k) {
                src.draw(n1[static_cast<size_t>(k)], n2[static_cast<size_t>(k)]);
            }
            advance(i, 1.0);
        }
    }
    return out;
}

double terminal_wealth(const PathEnsemble& paths, std::size_t index,
                       const DeterministicStrategy& strat, const MarketParams& p) {
    if (!paths.full()) {
        throw DomainError("terminal_wealth: ensemble was simulated without record_full");
    }
    if (index >= paths.z.size()) throw DomainError("terminal_wealth: path index out of range");
    if (!strat.sample) throw DomainError("terminal_wealth: strategy has no sampler");

    const std::vector<double>& z = paths.z[index];
    const std::vector<double>& dW = paths.dW[index];
    double I = 0.0;
    for (int k = 0; k < paths.steps; ++k) {
        double t = paths.dt * static_cast<double>(k);
        double pi = strat.sample(t);
        double zraw = z[static_cast<size_t>(k)];
        double zp = zraw > 0.0 ? zraw : 0.0;
        I += (p.r + p.eta * zp * pi - 0.5 * zp * pi * pi) * paths.dt +
             pi * std::sqrt(zp) * dW[static_cast<size_t>(k)];
    }
    return p.v0 * std::exp(I);
}

UtilityEstimate estimate_utility(const MarketParams& p, const DeterministicStrategy& strat,
                                 const SimConfig& cfg) {
    check_market_for_sim(p);
    validate_sim_config(cfg, p.T);
    int steps = step_count(p, cfg);
    double dt = p.T / static_cast<double>(steps);
    std::vector<std::vector<double>> pis;
    pis.push_back(sample_strategy(strat, steps, dt));
    std::vector<Welford> w(1);
    run_estimate(p, pis, cfg, w, nullptr);
    return to_estimate(w[0], cfg.antithetic ? (cfg.paths / 2) * 2 : cfg.paths);
}

PairedUtility estimate_utility_paired(const MarketParams& p, const DeterministicStrategy& a,
                                      const DeterministicStrategy& b, const SimConfig& cfg) {
    check_market_for_sim(p);
    validate_sim_config(cfg, p.T);
    int steps = step_count(p, cfg);
    double dt = p.T / static_cast<double>(steps);
    std::vector<std::vector<double>> pis;
    pis.push_back(sample_strategy(a, steps, dt));
    pis.push_back(sample_strategy(b, steps, dt));
    std::vector<Welford> w(2);
    Welford diff;
    run_estimate(p, pis, cfg, w, &diff);

    long long used = cfg.antithetic ? (cfg.paths / 2) * 2 : cfg.paths;
    PairedUtility out;
    out.first = to_estimate(w[0], used);
    out.second = to_estimate(w[1], used);
    out.diff_mean = diff.mean;
    out.diff_std_error = diff.std_error();
    if (!std::isfinite(out.diff_mean) || !std::isfinite(out.diff_std_error)) {
        throw NonFiniteState("estimate_utility_paired: estimate left the finite range");
    }
    return out;
}

double cir_mean(const MarketParams& p, double t) {
    return p.theta + (p.z0 - p.theta) * std::exp(-p.kappa * t);
}

double crra_utility(double v, double b) {
    if (!(v > 0.0)) throw DomainError("crra_utility: v must be > 0");
    if (b == 0.0) throw DomainError("crra_utility: b must be nonzero");
    return std::pow(v, b) / b;
}

} // namespace svport
