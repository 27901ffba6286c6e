#pragma once

#include <stdexcept>
#include <string>

namespace svport {

// Inputs outside an operation's mathematical domain (z <= 0, tau < 0, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A zone's quadratic has r1^2 + 2 r0 r2 <= 0, so the closed-form machinery
// that needs r3 cannot be used for it.
struct CoefficientError : std::runtime_error {
    explicit CoefficientError(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation requested at or beyond the flow's finite lifetime.
struct LifetimeExceeded : std::runtime_error {
    explicit LifetimeExceeded(const std::string& what) : std::runtime_error(what) {}
};

// A numeric integration left the finite range (overflow, NaN, |y| past the
// blow-up threshold).
struct NonFiniteState : std::runtime_error {
    explicit NonFiniteState(const std::string& what) : std::runtime_error(what) {}
};

// A solver was asked to run on a scenario that fails its standing
// assumptions and force mode was off.
struct AssumptionError : std::runtime_error {
    explicit AssumptionError(const std::string& what) : std::runtime_error(what) {}
};

// A closed-form segment blows up before the span it must cover.
struct BlowupError : std::runtime_error {
    explicit BlowupError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace svport
