#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "svport/scenario.hpp"

namespace {

using namespace svport;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitAssumptions = 3;
constexpr int kExitMcMismatch = 4;

struct CommonFlags {
    std::string scenario_path;
    std::string out_path;
    int grid = 0;          // 0 = use scenario value
    long long seed = -1;   // <0 = use scenario value
    bool force = false;
    bool euler = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_scenario = true) {
    auto* opt = cmd->add_option("--scenario", f.scenario_path, "scenario file");
    if (needs_scenario) opt->required();
    cmd->add_option("--out", f.out_path, "write CSV/report here instead of stdout");
    cmd->add_option("--grid", f.grid, "curve/diagnostic grid size");
    cmd->add_option("--seed", f.seed, "Monte Carlo seed override");
    cmd->add_flag("--force", f.force, "proceed despite failed assumption checks");
    cmd->add_flag("--euler", f.euler, "Euler exponent solver instead of RK4");
}

// Stream that is either a file (--out) or stdout.
struct OutStream {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit OutStream(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw DomainError("cannot open output file '" + path + "'");
            os = &file;
        }
    }
    std::ostream& get() { return *os; }
    bool is_file() const { return os != &std::cout; }
};

Scenario load_checked(const CommonFlags& f) {
    Scenario sc = load_scenario(f.scenario_path);
    if (f.grid > 0) sc.grid = f.grid;
    if (f.seed >= 0) sc.mc.seed = static_cast<std::uint64_t>(f.seed);
    return sc;
}

// Exit 2 on invalid market parameters, exit 3 on failed assumptions unless
// forced; returns the report for printing.
AssumptionReport gate_assumptions(const Scenario& sc, const CommonFlags& f, int& exit_code) {
    exit_code = kExitOk;
    ValidationReport vr = validate_params(sc.market);
    if (!vr.ok()) {
        std::cerr << "invalid parameters:\n" << vr.describe() << "\n";
        exit_code = kExitParse;
        return {};
    }
    if (!sc.K.valid()) {
        std::cerr << "invalid constraint interval (need alpha < beta)\n";
        exit_code = kExitParse;
        return {};
    }
    AssumptionReport ar = check_assumptions(sc.market, sc.K);
    if (!ar.pass() && !f.force) {
        std::cerr << "assumption check failed:\n" << ar.describe() << "\n";
        exit_code = kExitAssumptions;
    }
    return ar;
}

int cmd_check(const CommonFlags& f) {
    Scenario sc = load_checked(f);
    ValidationReport vr = validate_params(sc.market);
    if (!vr.ok()) {
        std::cerr << "invalid parameters:\n" << vr.describe() << "\n";
        return kExitParse;
    }
    if (!sc.K.valid()) {
        std::cerr << "invalid constraint interval (need alpha < beta)\n";
        return kExitParse;
    }
    OutStream out(f.out_path);
    AssumptionReport ar = check_assumptions(sc.market, sc.K);
    out.get() << "parameters: ok\n";
    out.get() << "merton ratio: " << fmt_g17(merton_ratio(sc.market)) << "\n";
    out.get() << ar.describe();

    if (ar.pass() || f.force) {
        try {
            PiecewiseB B = solve_B(sc.market, sc.K, {f.force});
            out.get() << "segments: " << B.segments.size() << "\n";
            for (size_t i = 0; i < B.segments.size(); ++i) {
                const BSegment& s = B.segments[i];
                double end = (i + 1 < B.segments.size()) ? B.segments[i + 1].tau_start : B.T;
                IntegralCheck ic = riccati_integral_report(s.flow, end - s.tau_start);
                out.get() << "  segment " << i << " (" << zone_name(s.zone)
                          << "): tau in [" << fmt_g17(s.tau_start) << ", " << fmt_g17(end)
                          << "], integral quadrature = " << fmt_g17(ic.quadrature)
                          << ", closed-form (consistent variant) = " << fmt_g17(ic.closed_r1)
                          << ", closed-form (inconsistent variant) = " << fmt_g17(ic.closed_b0)
                          << "\n";
            }
        } catch (const std::exception& e) {
            out.get() << "solve: failed: " << e.what() << "\n";
        }
    }
    return ar.pass() ? kExitOk : kExitAssumptions;
}

int cmd_solve(const CommonFlags& f) {
    Scenario sc = load_checked(f);
    int gate = kExitOk;
    gate_assumptions(sc, f, gate);
    if (gate != kExitOk) return gate;

    PiecewiseB B = solve_B(sc.market, sc.K, {f.force});
    ACurve A = solve_A(sc.market, B);

    std::optional<UnconstrainedSolution> u;
    try {
        u.emplace(unconstrained_solution(sc.market));
    } catch (const std::exception&) {
        // pi_u columns stay NaN: the unconstrained companion problem has no
        // solution on this horizon.
    }

    OutStream out(f.out_path);
    out.get() << "t, pi_star, pi_hat, pi_u, cap_pi_u, B, B_u, zone\n";
    double nan = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < sc.grid; ++i) {
        double t = sc.market.T * static_cast<double>(i) / (sc.grid - 1);
        double tau = sc.market.T - t;
        double hat = pi_hat(B, sc.market, t);
        double star = cap(hat, sc.K);
        double piu = u ? u->pi(t) : nan;
        double cap_piu = u ? cap(piu, sc.K) : nan;
        double Bu = u ? u->eval_B(tau) : nan;
        out.get() << fmt_g17(t) << "," << fmt_g17(star) << "," << fmt_g17(hat) << ","
                  << fmt_g17(piu) << "," << fmt_g17(cap_piu) << "," << fmt_g17(B.eval(tau))
                  << "," << fmt_g17(Bu) << "," << zone_name(B.zone_at(tau)) << "\n";
    }

    std::ostream& info = out.is_file() ? std::cout : std::cerr;
    info << "pi_star(0) = " << fmt_g17(pi_star(B, sc.market, sc.K, 0.0)) << "\n";
    info << "pi_star(T) = " << fmt_g17(pi_star(B, sc.market, sc.K, sc.market.T)) << "\n";
    info << "B(T-) = " << fmt_g17(B.eval(sc.market.T)) << ", A(T-) = "
         << fmt_g17(A.eval(sc.market.T)) << " (arguments tau = T)\n";
    return kExitOk;
}

DeterministicStrategy make_kind(StrategyKind kind, double constant_value,
                                const MarketParams& p, const IntervalConstraint& K,
                                bool force) {
    switch (kind) {
        case StrategyKind::optimal: return strategy_optimal(p, K, {force});
        case StrategyKind::capped_merton: return strategy_capped_merton(p, K);
        case StrategyKind::capped_unconstrained: return strategy_capped_unconstrained(p, K);
        case StrategyKind::riskless: return strategy_riskless();
        case StrategyKind::constant: return strategy_constant(constant_value);
    }
    throw DomainError("unknown strategy kind");
}

int cmd_wel(const CommonFlags& f) {
    Scenario sc = load_checked(f);
    int gate = kExitOk;
    AssumptionReport ar = gate_assumptions(sc, f, gate);
    if (gate != kExitOk) return gate;

    DeterministicStrategy strat =
        make_kind(sc.wel_strategy, sc.wel_constant_value, sc.market, sc.K, f.force);
    WelReport r = wel_report(sc.market, sc.K, strat, 20000,
                             f.euler ? OdeScheme::euler : OdeScheme::rk4, {f.force});

    OutStream out(f.out_path);
    out.get() << "axis, L0, delta_max, assumption_flag\n";
    std::string flag = ar.pass() ? "" : "forced";
    out.get() << r.strat_label << "," << fmt_g17(r.L0) << "," << fmt_g17(r.delta_max) << ","
              << flag << "\n";
    return kExitOk;
}

int cmd_sweep(const CommonFlags& f) {
    Scenario sc = load_checked(f);
    if (!sc.has_sweep) {
        std::cerr << "scenario has no [sweep] section\n";
        return kExitParse;
    }
    ValidationReport vr = validate_params(sc.market);
    if (!vr.ok()) {
        std::cerr << "invalid parameters:\n" << vr.describe() << "\n";
        return kExitParse;
    }

    SweepOptions so;
    so.force = f.force;
    so.scheme = f.euler ? OdeScheme::euler : OdeScheme::rk4;
    so.constant_value = sc.sweep_constant_value;
    SweepResult res = sweep(sc.market, sc.K, sc.sweep_axis, sc.sweep_from, sc.sweep_to,
                            sc.sweep_points, sc.sweep_strategy, so);

    OutStream out(f.out_path);
    out.get() << "axis, L0, delta_max, assumption_flag\n";
    for (const SweepPoint& pt : res.points) {
        std::string flag = pt.flag;
        for (char& ch : flag) {
            if (ch == ',' || ch == '\n') ch = ';';
        }
        out.get() << fmt_g17(pt.x) << "," << fmt_g17(pt.L0) << "," << fmt_g17(pt.delta_max)
                  << "," << flag << "\n";
    }
    return kExitOk;
}

int cmd_simulate(const CommonFlags& f) {
    Scenario sc = load_checked(f);
    int gate = kExitOk;
    gate_assumptions(sc, f, gate);
    if (gate != kExitOk) return gate;

    ValueSurface vs = value_surface(sc.market, sc.K, {f.force});
    double analytic = vs.evaluate(0.0, sc.market.v0, sc.market.z0);

    DeterministicStrategy best = strategy_optimal(sc.market, sc.K, {f.force});
    UtilityEstimate e = estimate_utility(sc.market, best, sc.mc);
    double zscore = (e.std_error > 0.0) ? (e.mean - analytic) / e.std_error : 0.0;

    OutStream out(f.out_path);
    out.get() << "analytic G(0, v0, z0) = " << fmt_g17(analytic) << "\n";
    out.get() << "strategy, mc_mean, mc_se, z_vs_analytic\n";
    out.get() << "optimal," << fmt_g17(e.mean) << "," << fmt_g17(e.std_error) << ","
              << fmt_g17(zscore) << "\n";

    std::vector<std::pair<std::string, DeterministicStrategy>> competitors;
    try {
        competitors.emplace_back("capped_unconstrained",
                                 strategy_capped_unconstrained(sc.market, sc.K));
    } catch (const std::exception&) {
        // no unconstrained companion solution; skip the row
    }
    competitors.emplace_back("capped_merton", strategy_capped_merton(sc.market, sc.K));
    competitors.emplace_back("riskless", strategy_riskless());

    out.get() << "paired diff vs optimal: strategy, diff_mean, diff_se, diff_z\n";
    for (const auto& [name, strat] : competitors) {
        PairedUtility pu = estimate_utility_paired(sc.market, best, strat, sc.mc);
        double dz = (pu.diff_std_error > 0.0) ? pu.diff_mean / pu.diff_std_error : 0.0;
        out.get() << name << "," << fmt_g17(pu.diff_mean) << ","
                  << fmt_g17(pu.diff_std_error) << "," << fmt_g17(dz) << "\n";
    }

    if (std::abs(zscore) > 3.0) {
        std::cerr << "Monte Carlo mean deviates from the analytic value by more than 3 SE\n";
        return kExitMcMismatch;
    }
    return kExitOk;
}

int cmd_pcsv(const CommonFlags& f) {
    Scenario sc = load_checked(f);
    if (!sc.has_pcsv) {
        std::cerr << "scenario has no [pcsv] section\n";
        return kExitParse;
    }
    PcsvSolution sol = solve_pcsv(sc.pcsv, {f.force});

    OutStream out(f.out_path);
    out.get() << "t";
    for (int i = 0; i < sc.pcsv.d; ++i) out.get() << ", pi_" << (i + 1);
    for (int i = 0; i < sc.pcsv.d; ++i) out.get() << ", piA_" << (i + 1);
    out.get() << "\n";
    for (int g = 0; g < sc.grid; ++g) {
        double t = sc.pcsv.T * static_cast<double>(g) / (sc.grid - 1);
        std::vector<double> w = sol.pi(t);
        std::vector<double> wa = sol.pi_A(t);
        out.get() << fmt_g17(t);
        for (double v : w) out.get() << "," << fmt_g17(v);
        for (double v : wa) out.get() << "," << fmt_g17(v);
        out.get() << "\n";
    }

    std::ostream& info = out.is_file() ? std::cout : std::cerr;
    for (const ExposureRow& row : exposure_report(sol, sc.grid)) {
        info << "factor " << row.factor << ": max exposure ratio = "
             << fmt_g17(row.max_ratio) << " at t = " << fmt_g17(row.worst_t) << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained stochastic-volatility portfolio solver"};
    app.require_subcommand(1);

    CommonFlags f;
    CLI::App* c_check = app.add_subcommand("check", "validate parameters and assumptions");
    CLI::App* c_solve = app.add_subcommand("solve", "emit the policy/exponent curves as CSV");
    CLI::App* c_wel = app.add_subcommand("wel", "wealth-equivalent loss of one strategy");
    CLI::App* c_sweep = app.add_subcommand("sweep", "WEL across a parameter range");
    CLI::App* c_sim = app.add_subcommand("simulate", "Monte Carlo validation");
    CLI::App* c_pcsv = app.add_subcommand("pcsv", "multi-factor exposure-constrained solve");
    for (CLI::App* c : {c_check, c_solve, c_wel, c_sweep, c_sim, c_pcsv}) {
        add_common(c, f);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_check->parsed()) return cmd_check(f);
        if (c_solve->parsed()) return cmd_solve(f);
        if (c_wel->parsed()) return cmd_wel(f);
        if (c_sweep->parsed()) return cmd_sweep(f);
        if (c_sim->parsed()) return cmd_simulate(f);
        if (c_pcsv->parsed()) return cmd_pcsv(f);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const AssumptionError& e) {
        std::cerr << "assumption failure: " << e.what() << "\n";
        return kExitAssumptions;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitParse;
    } catch (const BlowupError& e) {
        std::cerr << "blow-up: " << e.what() << "\n";
        return kExitAssumptions;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
