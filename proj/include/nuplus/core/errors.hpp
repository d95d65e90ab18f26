#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nuplus {

/// Bad chart/solver configuration (odd resolution, invalid tolerance, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (non-PD metric,
/// sigma <= 0, ...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// API misuse: fields from different charts, stale entropy results, ...
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Iterative solver breakdown; carries the residual history when available.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what, std::vector<double> history = {})
        : std::runtime_error(what), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

/// Optimizer failed to reach its tolerance; carries the last residual.
struct OptimizerError : std::runtime_error {
    OptimizerError(const std::string& what, double residual)
        : std::runtime_error(what), last_residual(residual) {}
    double last_residual;
};

/// Archive / report format violations.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// nu_plus requested on a metric with lambda(g) >= 0.
struct EntropyUndefinedError : DomainError {
    explicit EntropyUndefinedError(double lambda)
        : DomainError("entropy undefined: lambda(g) = " + std::to_string(lambda) +
                      " is nonnegative"),
          lambda_value(lambda) {}
    double lambda_value;
};

/// Supremum over sigma not attained below the cap; carries the best bound.
struct SigmaCapError : std::runtime_error {
    SigmaCapError(double cap, double best)
        : std::runtime_error("mu_plus still increasing at sigma cap " + std::to_string(cap)),
          sigma_cap(cap), best_lower_bound(best) {}
    double sigma_cap;
    double best_lower_bound;
};

} // namespace nuplus
