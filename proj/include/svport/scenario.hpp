#pragma once

#include <string>

#include "svport/extensions.hpp"
#include "svport/montecarlo.hpp"
#include "svport/wel.hpp"

namespace svport {

// Scenario-file parse failure (file access, syntax, unknown key, bad value).
struct ParseError : DomainError {
    using DomainError::DomainError;
};

// Flat key-value scenario with '[section]' headers and '#' comments.
// Sections and keys:
//   [market]     r eta kappa theta sigma rho z0 b T v0
//   [constraint] alpha beta          (literals inf / -inf accepted)
//   [sweep]      axis from to points strategy [constant_value]
//   [wel]        strategy [constant_value]
//   [mc]         paths steps_per_year seed antithetic
//   [output]     grid
//   [pcsv]       d A eta kappa theta sigma rho z0 beta
// Vector values are comma-separated; matrix rows additionally separated by
// ';'. Market defaults: r = 0, v0 = 1, everything else unset (zero) so that
// validation names missing fields. Constraint defaults to the whole line.
struct Scenario {
    MarketParams market{};
    IntervalConstraint K = IntervalConstraint::all();

    bool has_sweep = false;
    SweepAxis sweep_axis = SweepAxis::b;
    double sweep_from = 0.0;
    double sweep_to = 0.0;
    int sweep_points = 0;
    StrategyKind sweep_strategy = StrategyKind::capped_merton;
    double sweep_constant_value = 0.0;

    StrategyKind wel_strategy = StrategyKind::capped_merton;
    double wel_constant_value = 0.0;

    SimConfig mc{};

    int grid = 2001;

    bool has_pcsv = false;
    PcsvParams pcsv{};
};

Scenario parse_scenario_text(const std::string& text, const std::string& origin = "<text>");
Scenario load_scenario(const std::string& path);

StrategyKind parse_strategy_kind(const std::string& value, double& constant_value);
SweepAxis parse_sweep_axis(const std::string& value);

// 17-significant-digit decimal rendering (round-trip safe); NaN -> "nan".
std::string fmt_g17(double x);

} // namespace svport
