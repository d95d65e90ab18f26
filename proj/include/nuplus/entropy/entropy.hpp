#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nuplus/entropy/backend.hpp"

namespace nuplus {

struct MuOptions {
    double el_tol = 1e-7; // sup-norm of the stationarity residual (f-form)
    int max_iter = 6000;
    int multistart = 3; // random starts in addition to the constant one
    std::uint64_t seed = 1;
    bool use_newton = true;
};

struct MuResult {
    std::vector<double> w; // positive minimizer of the substituted problem
    double mu = 0.0;       // attained value
    double el_residual = 0.0;
    double constraint_residual = 0.0;
    int iterations = 0;
    double multistart_spread = 0.0;
    std::vector<double> value_trace; // accepted-step values, nonincreasing
};

/// W_+(g, f, sigma) for arbitrary f (no normalization enforced); the
/// normalization defect is reported through *norm_defect when given.
double w_plus(const ScalarBackend& bk, const std::vector<double>& f, double sigma,
              double* norm_defect = nullptr);

/// Constrained minimization of W_+ over f at fixed sigma.
MuResult minimize_mu(const ScalarBackend& bk, double sigma, const MuOptions& opts,
                     const std::vector<double>* warm_w = nullptr);

struct LambdaResult {
    double lambda = 0.0;
    double residual = 0.0;
    std::vector<double> mode;
};

/// Smallest eigenvalue of -4 Lap + R (the F-entropy).
LambdaResult lambda_entropy(const ScalarBackend& bk, double tol = 1e-9,
                            const std::vector<double>* warm = nullptr);

struct NuOptions {
    double sigma_min = 1e-3;
    double sigma_max = 1e3;
    int scan_points = 25;
    MuOptions inner;
    // warm start: bracket around a known sigma instead of scanning
    bool warm = false;
    double warm_sigma = 0.0;
    std::vector<double> warm_w;
};

struct EntropyResult {
    double nu_plus = 0.0;
    double sigma_star = 0.0;
    double lambda = 0.0;
    std::vector<double> f_star; // -ln(w^2)
    std::vector<double> w_star;
    std::vector<std::pair<double, double>> mu_curve; // (sigma, mu) probes, sorted
    double el_residual = 0.0;
    double constraint_residual = 0.0;
    double eq_trace_residual = 0.0; // stationarity in sigma (the integral identity)
    double multistart_spread = 0.0;
    const void* metric_tag = nullptr;
};

/// nu_+(g) = sup_sigma mu_+(g, sigma); requires lambda(g) < 0.
EntropyResult maximize_nu(const ScalarBackend& bk, const NuOptions& opts);

} // namespace nuplus
