#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace nuplus {

using VecFn = std::function<void(const std::vector<double>&, std::vector<double>&)>;

struct CgOptions {
    double tol = 1e-12; // relative to rhs norm (in the preconditioned norm)
    int max_iter = 20000;
};

struct CgResult {
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

/// Preconditioned CG for a symmetric positive (semi)definite operator in the
/// Euclidean pairing. `project`, when given, is applied to the rhs, the
/// initial guess and every direction update; use it to work in the complement
/// of a known kernel.
CgResult cg_solve(std::size_t n, const VecFn& apply, const std::vector<double>& b,
                  std::vector<double>& x, const CgOptions& opts = {},
                  const VecFn* precond = nullptr, const VecFn* project = nullptr);

/// Generalized symmetric eigenpair for the pencil (A, M), M SPD.
struct PencilOps {
    std::size_t n = 0;
    VecFn a_apply;
    VecFn m_apply;
    VecFn m_solve;
    VecFn project; // optional M-orthogonal subspace projector
};

struct EigResult {
    double value = 0.0;
    std::vector<double> vector;
    double residual = 0.0; // ||A v - theta M v||_{M^-1} / ||v||_M
    std::vector<double> ritz_history;
    bool converged = false;
};

/// Lanczos with full reorthogonalization in the M-inner product; returns the
/// largest (want_max) or smallest Ritz pair of M^{-1} A on the projected
/// subspace.
EigResult lanczos_extreme(const PencilOps& ops, bool want_max, int max_iter, double tol,
                          std::uint64_t seed, const std::vector<double>* start = nullptr);

/// Smallest eigenvalue of (A, M) by shift-and-invert iteration; `shift` must
/// be strictly below the spectrum. Inner solves use CG with `precond`.
EigResult shift_invert_smallest(const PencilOps& ops, double shift, int max_iter, double tol,
                                const VecFn* precond = nullptr,
                                const std::vector<double>* start = nullptr);

/// Golden-section maximum of a unimodal function on [a, b].
double golden_max(const std::function<double(double)>& f, double a, double b, double xtol,
                  double* fbest = nullptr);

/// Brent root finding on a bracketing interval [a, b] with f(a) f(b) < 0.
double brent_root(const std::function<double(double)>& f, double a, double b, double fa,
                  double fb, double xtol);

} // namespace nuplus
