#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "nuplus/entropy/entropy.hpp"
#include "nuplus/geometry/metric.hpp"

namespace nuplus {

/// First variation of scalar curvature along g + s h:
///   -<h, Rc> + div div h - Lap tr h.
ScalarField scalar_curvature_first_variation(const GridMetric& gm, const SymTensorField& h);

/// The six printed terms of the second variation of scalar curvature and
/// their sum, kept separate so mismatches can be attributed.
struct SecondVariationTerms {
    std::array<ScalarField, 6> term;
    ScalarField total;
};

SecondVariationTerms scalar_curvature_second_variation(const GridMetric& gm,
                                                       const SymTensorField& h);

/// First variation of nu_+ at a converged entropy result (the soliton
/// integrand paired against h).
double nu_first_variation(const GridMetric& gm, const SymTensorField& h,
                          const EntropyResult& entropy);

// --- finite-difference oracle ---

struct FdOptions {
    std::vector<double> eps = {1e-2, 5e-3, 2.5e-3}; // halving schedule
    int order = 1;                                  // 1 or 2
};

struct FdScalarResult {
    double value = 0.0;       // Richardson-extrapolated derivative
    double order_achieved = 0.0;
    std::vector<double> raw;  // plain central differences per epsilon
};

struct FdFieldResult {
    std::vector<double> value;
    double order_achieved = 0.0;
};

FdScalarResult fd_derivative(const std::function<double(double)>& f, const FdOptions& opts);
FdFieldResult fd_derivative_field(const std::function<std::vector<double>(double)>& f,
                                  std::size_t size, const FdOptions& opts);

/// One verified analytic-vs-FD comparison, as reported under
/// "variation_checks".
struct VariationCheck {
    std::string label;
    double analytic = 0.0; // sup-norm for field checks
    double fd = 0.0;
    double rel_error = 0.0;
    double richardson_order = 0.0;
    std::vector<double> eps;
    double tolerance = 0.0;
    bool pass = false;
};

/// Field comparison: relative sup-norm error against the FD oracle.
VariationCheck check_field_against_fd(const std::string& label,
                                      const std::vector<double>& analytic,
                                      const FdFieldResult& fd, double tol,
                                      const FdOptions& opts);

VariationCheck check_scalar_against_fd(const std::string& label, double analytic,
                                       const FdScalarResult& fd, double tol,
                                       const FdOptions& opts);

/// Term-by-term attribution when the printed second-variation formula
/// disagrees with the oracle beyond tolerance.
struct SecondVariationDiagnostic {
    std::array<double, 6> term_sup{};
    std::array<double, 6> residual_correlation{};
    int suspect_term = -1; // 0-based index into the printed terms, -1 if clean
    double rel_error = 0.0;
};

SecondVariationDiagnostic diagnose_second_variation(const GridMetric& gm,
                                                    const SecondVariationTerms& terms,
                                                    const std::vector<double>& fd_field,
                                                    double tol);

} // namespace nuplus
