#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fsi {

/// Failure classes carried by SolverError; the CLI maps them to exit codes.
enum class FailureClass {
    ConfigInvalid,
    AssemblyFailure,
    SolverFailure,
    NonContraction,
    BallViolation,
    DomainDegeneracy,
};

inline const char* failure_class_name(FailureClass c)
{
    switch (c) {
    case FailureClass::ConfigInvalid: return "config-invalid";
    case FailureClass::AssemblyFailure: return "assembly-failure";
    case FailureClass::SolverFailure: return "solver-failure";
    case FailureClass::NonContraction: return "non-contraction";
    case FailureClass::BallViolation: return "ball-violation";
    case FailureClass::DomainDegeneracy: return "domain-degeneracy";
    }
    return "unknown";
}

/// Thrown by linear/nonlinear solves. Carries the residual history when the
/// failure came out of an iteration.
class SolverError : public std::runtime_error {
public:
    SolverError(FailureClass cls, const std::string& what, std::vector<double> residuals = {})
        : std::runtime_error(what), failure_class(cls), residual_history(std::move(residuals))
    {
    }

    FailureClass failure_class;
    std::vector<double> residual_history;
};

} // namespace fsi
