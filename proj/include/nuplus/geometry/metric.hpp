#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "nuplus/core/parallel.hpp"
#include "nuplus/geometry/fields.hpp"

namespace nuplus {

/// Christoffel symbols, fully covariant Riemann, Ricci and scalar curvature.
/// Riemann sign convention: Ricci_jl = g^{ik} R_ijkl, and constant curvature K
/// has R_ijkl = K (g_ik g_jl - g_il g_jk), so the round sphere comes out
/// positive. Laplacians are geometer's sign (nonpositive on functions).
struct CurvaturePack {
    int n = 0;
    std::size_t nodes = 0;
    std::vector<double> christoffel; // (k * sc + sym(i,j)) comps
    std::vector<double> riemann;     // n^4 comps, ((i n + j) n + k) n + l
    SymTensorField ricci;
    ScalarField scalar;

    double riem(int i, int j, int k, int l, std::size_t p) const {
        return riemann[(std::size_t)(((i * n + j) * n + k) * n + l) * nodes + p];
    }
    double gamma(int k, int i, int j, std::size_t p) const {
        return christoffel[(std::size_t)(k * sym_count(n) + sym_index(n, i, j)) * nodes + p];
    }
};

/// Covariant gradient of a symmetric 2-tensor, (grad h)_{a,ij}.
struct CovDeriv3 {
    int n = 0;
    std::size_t nodes = 0;
    std::vector<double> data; // (a * sc + sym(i,j)) comps
    double at(int a, int i, int j, std::size_t p) const {
        return data[(std::size_t)(a * sym_count(n) + sym_index(n, i, j)) * nodes + p];
    }
};

/// Second covariant derivative, (grad grad h)_{ab,ij} = grad_a grad_b h_ij.
struct CovDeriv4 {
    int n = 0;
    std::size_t nodes = 0;
    std::vector<double> data; // ((a n + b) sc + sym(i,j)) comps
    double at(int a, int b, int i, int j, std::size_t p) const {
        return data[(std::size_t)((a * n + b) * sym_count(n) + sym_index(n, i, j)) * nodes + p];
    }
};

/// Covariant gradient of a one-form, (grad w)_{a,i} (not symmetric).
struct CovDeriv2 {
    int n = 0;
    std::size_t nodes = 0;
    std::vector<double> data; // (a * n + i) comps
    double at(int a, int i, std::size_t p) const {
        return data[(std::size_t)(a * n + i) * nodes + p];
    }
};

struct MetricOptions {
    double band_tail_tol = 1e-8; // reject rougher metrics
    bool validate_band_limit = true;
    Exec exec = default_exec();
};

/// A positive-definite metric on a periodic grid chart together with every
/// derived operator the lab needs. Immutable after construction; curvature
/// and Christoffel data are computed lazily and cached.
class GridMetric {
public:
    GridMetric(SymTensorField g, MetricOptions opts = {});

    const ChartPtr& chart() const { return g_.chart(); }
    int dim() const { return g_.dim(); }
    std::size_t nodes() const { return g_.nodes(); }
    Exec exec() const { return opts_.exec; }

    const SymTensorField& metric() const { return g_; }
    const SymTensorField& inverse() const { return ginv_; }
    const ScalarField& density() const { return dens_; } // sqrt(det g)
    double volume() const { return vol_; }

    const CurvaturePack& curvature() const;

    // --- scalar calculus ---
    OneFormField grad(const ScalarField& f) const;
    ScalarField grad_norm2(const ScalarField& f) const;
    SymTensorField hessian(const ScalarField& f) const;
    ScalarField laplacian(const ScalarField& f) const;

    // --- tensor calculus ---
    CovDeriv2 cov_deriv(const OneFormField& w) const;
    CovDeriv3 cov_deriv(const SymTensorField& h) const;
    CovDeriv4 second_cov_deriv(const SymTensorField& h) const;

    OneFormField div(const SymTensorField& h) const;
    ScalarField div(const OneFormField& w) const;
    SymTensorField div_star(const OneFormField& w) const; // -1/2 (grad_i w_j + grad_j w_i)
    ScalarField trace(const SymTensorField& h) const;
    ScalarField div_div(const SymTensorField& h) const;

    SymTensorField rough_laplacian(const SymTensorField& h) const;
    SymTensorField lichnerowicz(const SymTensorField& h) const;

    /// Rm(h1,h2) = R_ijkl h1^{ik} h2^{jl}.
    ScalarField rm_contract(const SymTensorField& h1, const SymTensorField& h2) const;
    /// (Rm h)_jl = R_ijkl h^{ik}; the symmetric operator with <Rm h, h> = Rm(h,h).
    SymTensorField rm_apply(const SymTensorField& h) const;

    // --- integration ---
    double integrate(const ScalarField& s) const;
    double inner(const ScalarField& a, const ScalarField& b) const;
    double inner(const OneFormField& a, const OneFormField& b) const;
    double inner(const SymTensorField& a, const SymTensorField& b) const;

    /// Pointwise g-inner products (no quadrature weight).
    ScalarField pointwise_inner(const SymTensorField& a, const SymTensorField& b) const;
    ScalarField pointwise_inner(const OneFormField& a, const OneFormField& b) const;

    /// |grad h|^2 = g^{ab} g^{ik} g^{jl} (grad h)_{a,ij} (grad h)_{b,kl}.
    ScalarField cov_deriv_norm2(const SymTensorField& h) const;

    /// Solve the per-node Gram system: given b with <h, e_c> = b_c in the
    /// packed basis, return h. Used as the tensor mass inverse by Lanczos.
    void tensor_gram_solve(const SymTensorField& b, SymTensorField& out) const;

    SymTensorField multiply(const ScalarField& f, const SymTensorField& h) const;

    /// sup_p |Rc + g/(2 sigma)| (max over packed components).
    double einstein_residual(double sigma) const;

private:
    void build_algebra();
    const std::vector<double>& metric_gradients() const; // axis-major d_a g_c

    SymTensorField g_;
    MetricOptions opts_;
    SymTensorField ginv_;
    ScalarField dens_;
    double vol_ = 0.0;

    mutable std::optional<std::vector<double>> dg_;
    mutable std::optional<CurvaturePack> curv_;
    mutable std::optional<std::vector<double>> gram_inv_; // per-node packed Gram inverse
};

} // namespace nuplus
