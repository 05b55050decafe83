#pragma once

#include <stdexcept>
#include <string>

namespace squeeze {

/// Thrown by ufun() when the argument is too close to a pole of tan(sqrt(a)),
/// i.e. |cfun(a)| below the guard threshold. Callers that hit this are
/// expected to switch to the cleared (entire) resonance forms.
class PoleProximity : public std::runtime_error {
public:
    explicit PoleProximity(double a)
        : std::runtime_error("ufun: argument " + std::to_string(a) +
                             " is within the pole guard of tan(sqrt(a))"),
          argument(a) {}
    double argument;
};

class OutOfDomain : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ArityMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class OffSet : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Residual lies in the gray band (tol, 10*tol): too large to accept the
/// point as a set member, too small to treat it as cleanly off the set.
class AmbiguousMembership : public std::runtime_error {
public:
    AmbiguousMembership(const std::string& set, double res)
        : std::runtime_error("ambiguous membership for " + set + ": residual " +
                             std::to_string(res) + " falls in the (tol, 10*tol) band"),
          set_name(set), residual(res) {}
    std::string set_name;
    double residual;
};

class DegenerateDenominator : public std::runtime_error {
public:
    explicit DegenerateDenominator(const std::string& which)
        : std::runtime_error("degenerate denominator: " + which) {}
};

class NoRootInInterval : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoRoot : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BothFormsDegenerate : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivisionByZero : public std::runtime_error {
public:
    explicit DivisionByZero(const std::string& which)
        : std::runtime_error("division by zero: " + which) {}
};

class NonUnimodular : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace squeeze
