#include "nuplus/geometry/metric.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "nuplus/core/errors.hpp"
#include "nuplus/geometry/kernels.hpp"

namespace nuplus {

namespace {

// spectral gradients of a component-major array; result (a*ncomp + c)-major
std::vector<double> axis_gradients(const Spectral& sp, const double* comps, int ncomp,
                                   std::size_t nodes) {
    const int n = sp.dim();
    std::vector<double> out(static_cast<std::size_t>(n) * ncomp * nodes);
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < ncomp; ++c)
            sp.derivative(comps + static_cast<std::size_t>(c) * nodes, a,
                          out.data() + (static_cast<std::size_t>(a) * ncomp + c) * nodes);
    return out;
}

} // namespace

GridMetric::GridMetric(SymTensorField g, MetricOptions opts)
    : g_(std::move(g)), opts_(opts) {
    if (dim() > 4) throw ConfigError("grid metric: curvature operators support dim <= 4");
    build_algebra();
}

void GridMetric::build_algebra() {
    const std::size_t N = nodes();
    const int n = dim();
    ginv_ = SymTensorField(chart());
    dens_ = ScalarField(chart());

    std::vector<double> det(N);
    const std::size_t bad = kernels::sym_invert(n, N, g_.raw().data(), ginv_.raw().data(),
                                                det.data(), opts_.exec);
    if (bad != N)
        throw DomainError("metric is not positive definite at node " + std::to_string(bad));

    if (opts_.validate_band_limit) {
        for (int c = 0; c < g_.comps(); ++c) {
            const double tail = chart()->spectral().band_tail_fraction(g_.comp(c).data());
            if (tail > opts_.band_tail_tol)
                throw DomainError("metric component " + std::to_string(c) +
                                  " is not band-limited: tail fraction " +
                                  std::to_string(tail));
        }
    }

    for_nodes(N, opts_.exec, [&](std::size_t p) { dens_[p] = std::sqrt(det[p]); });

    std::vector<double> w(N);
    const double cw = chart()->cell_weight();
    for (std::size_t p = 0; p < N; ++p) w[p] = dens_[p] * cw;
    vol_ = pairwise_sum(w);
}

const std::vector<double>& GridMetric::metric_gradients() const {
    if (!dg_)
        dg_ = axis_gradients(chart()->spectral(), g_.raw().data(), g_.comps(), nodes());
    return *dg_;
}

const CurvaturePack& GridMetric::curvature() const {
    if (curv_) return *curv_;

    const std::size_t N = nodes();
    const int n = dim();
    const int sc = sym_count(n);
    const Spectral& sp = chart()->spectral();

    CurvaturePack pack;
    pack.n = n;
    pack.nodes = N;
    pack.christoffel.assign(static_cast<std::size_t>(n) * sc * N, 0.0);
    kernels::christoffel(n, N, ginv_.raw().data(), metric_gradients().data(),
                         pack.christoffel.data(), opts_.exec);
    for (int c = 0; c < n * sc; ++c)
        sp.dealias(pack.christoffel.data() + static_cast<std::size_t>(c) * N);

    // axis_gradients yields the axis-major (a, k, c) layout the kernel expects
    std::vector<double> dgamma =
        axis_gradients(sp, pack.christoffel.data(), n * sc, N);

    pack.riemann.assign(static_cast<std::size_t>(n) * n * n * n * N, 0.0);
    kernels::riemann(n, N, g_.raw().data(), pack.christoffel.data(), dgamma.data(),
                     pack.riemann.data(), opts_.exec);
    for (int c = 0; c < n * n * n * n; ++c)
        sp.dealias(pack.riemann.data() + static_cast<std::size_t>(c) * N);

    pack.ricci = SymTensorField(chart());
    pack.scalar = ScalarField(chart());
    const double* gi = ginv_.raw().data();
    for_nodes(N, opts_.exec, [&](std::size_t p) {
        for (int j = 0; j < n; ++j) {
            for (int l = j; l < n; ++l) {
                double s = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int k = 0; k < n; ++k)
                        s += gi[sym_index(n, i, k) * N + p] * pack.riem(i, j, k, l, p);
                pack.ricci.at(j, l, p) = s;
            }
        }
        double r = 0.0;
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                r += gi[sym_index(n, j, l) * N + p] * pack.ricci.at(j, l, p);
        pack.scalar[p] = r;
    });
    for (int c = 0; c < sc; ++c) sp.dealias(pack.ricci.comp(c).data());
    sp.dealias(pack.scalar.data());

    curv_ = std::move(pack);
    return *curv_;
}

// --- scalar calculus ---

OneFormField GridMetric::grad(const ScalarField& f) const {
    detail::check_same_chart(*chart(), *f.chart());
    OneFormField out(chart());
    for (int a = 0; a < dim(); ++a)
        chart()->spectral().derivative(f.data(), a, out.comp(a).data());
    return out;
}

ScalarField GridMetric::grad_norm2(const ScalarField& f) const {
    OneFormField df = grad(f);
    return pointwise_inner(df, df);
}

SymTensorField GridMetric::hessian(const ScalarField& f) const {
    detail::check_same_chart(*chart(), *f.chart());
    const std::size_t N = nodes();
    const int n = dim();
    const CurvaturePack& cp = curvature();
    OneFormField df = grad(f);

    SymTensorField out(chart());
    std::vector<double> d2(N);
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            chart()->spectral().derivative2(f.data(), a, b, d2.data());
            auto o = out.comp(sym_index(n, a, b));
            for_nodes(N, opts_.exec, [&](std::size_t p) {
                double s = d2[p];
                for (int k = 0; k < n; ++k) s -= cp.gamma(k, a, b, p) * df.at(k, p);
                o[p] = s;
            });
        }
    }
    return out;
}

ScalarField GridMetric::laplacian(const ScalarField& f) const {
    SymTensorField hess = hessian(f);
    ScalarField out(chart());
    const std::size_t N = nodes();
    const int n = dim();
    const double* gi = ginv_.raw().data();
    for_nodes(N, opts_.exec, [&](std::size_t p) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                s += gi[sym_index(n, a, b) * N + p] * hess.at(a, b, p);
        out[p] = s;
    });
    return out;
}

// --- tensor calculus ---

CovDeriv2 GridMetric::cov_deriv(const OneFormField& w) const {
    detail::check_same_chart(*chart(), *w.chart());
    const std::size_t N = nodes();
    const int n = dim();
    CovDeriv2 out{n, N, std::vector<double>(static_cast<std::size_t>(n) * n * N)};
    std::vector<double> dw = axis_gradients(chart()->spectral(), w.raw().data(), n, N);
    kernels::cov_deriv_oneform(n, N, curvature().christoffel.data(), w.raw().data(),
                               dw.data(), out.data.data(), opts_.exec);
    return out;
}

CovDeriv3 GridMetric::cov_deriv(const SymTensorField& h) const {
    detail::check_same_chart(*chart(), *h.chart());
    const std::size_t N = nodes();
    const int n = dim();
    const int sc = sym_count(n);
    CovDeriv3 out{n, N, std::vector<double>(static_cast<std::size_t>(n) * sc * N)};
    std::vector<double> dh = axis_gradients(chart()->spectral(), h.raw().data(), sc, N);
    kernels::cov_deriv_sym2(n, N, curvature().christoffel.data(), h.raw().data(), dh.data(),
                            out.data.data(), opts_.exec);
    return out;
}

CovDeriv4 GridMetric::second_cov_deriv(const SymTensorField& h) const {
    const std::size_t N = nodes();
    const int n = dim();
    const int sc = sym_count(n);
    CovDeriv3 t = cov_deriv(h);
    CovDeriv4 out{n, N, std::vector<double>(static_cast<std::size_t>(n) * n * sc * N)};
    std::vector<double> dt = axis_gradients(chart()->spectral(), t.data.data(), n * sc, N);
    kernels::cov_deriv2_sym2(n, N, curvature().christoffel.data(), t.data.data(), dt.data(),
                             out.data.data(), opts_.exec);
    return out;
}

OneFormField GridMetric::div(const SymTensorField& h) const {
    CovDeriv3 t = cov_deriv(h);
    OneFormField out(chart());
    const std::size_t N = nodes();
    const int n = dim();
    const double* gi = ginv_.raw().data();
    for_nodes(N, opts_.exec, [&](std::size_t p) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    s += gi[sym_index(n, a, b) * N + p] * t.at(a, b, i, p);
            out.at(i, p) = s;
        }
    });
    return out;
}

ScalarField GridMetric::div(const OneFormField& w) const {
    CovDeriv2 t = cov_deriv(w);
    ScalarField out(chart());
    const std::size_t N = nodes();
    const int n = dim();
    const double* gi = ginv_.raw().data();
    for_nodes(N, opts_.exec, [&](std::size_t p) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                s += gi[sym_index(n, a, b) * N + p] * t.at(a, b, p);
        out[p] = s;
    });
    return out;
}

SymTensorField GridMetric::div_star(const OneFormField& w) const {
    CovDeriv2 t = cov_deriv(w);
    SymTensorField out(chart());
    const std::size_t N = nodes();
    const int n = dim();
    for_nodes(N, opts_.exec, [&](std::size_t p) {
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                out.at(i, j, p) = -0.5 * (t.at(i, j, p) + t.at(j, i, p));
    });
    return out;
}

ScalarField GridMetric::trace(const SymTensorField& h) const {
    detail::check_same_chart(*chart(), *h.chart());
    ScalarField out(chart());
    const std::size_t N = nodes();
    const int n = dim();
    const double* gi = ginv_.raw().data();
    for_nodes(N, opts_.exec, [&](std::size_t p) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                s += gi[sym_index(n, i, j) * N + p] * h.at(i, j, p);
        out[p] = s;
    });
    return out;
}

ScalarField GridMetric::div_div(const SymTensorField& h) const { return div(div(h)); }

SymTensorField GridMetric::rough_laplacian(const SymTensorField& h) const {
    CovDeriv4 dd = second_cov_deriv(h);
    SymTensorField out(chart());
    const std::size_t N = nodes();
    const int n = dim();
    const double* gi = ginv_.raw().data();
    for_nodes(N, opts_.exec, [&](std::size_t p) {
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                double s = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        s += gi[sym_index(n, a, b) * N + p] * dd.at(a, b, i, j, p);
                out.at(i, j, p) = s;
            }
        }
    });
    return out;
}

SymTensorField GridMetric::lichnerowicz(const SymTensorField& h) const {
    SymTensorField lap = rough_laplacian(h);
    SymTensorField rm = rm_apply(h);
    const CurvaturePack& cp = curvature();
    SymTensorField out(chart());
    const std::size_t N = nodes();
    const int n = dim();
    const double* gi = ginv_.raw().data();
    for_nodes(N, opts_.exec, [&](std::size_t p) {
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                // (Rc o h)_ij symmetrized: 1/2 (R_ik h^k_j + R_jk h^k_i)
                double rc = 0.0;
                for (int k = 0; k < n; ++k)
                    for (int a = 0; a < n; ++a)
                        rc += 0.5 * gi[sym_index(n, k, a) * N + p] *
                              (cp.ricci.at(i, k, p) * h.at(a, j, p) +
                               cp.ricci.at(j, k, p) * h.at(a, i, p));
                out.at(i, j, p) = lap.at(i, j, p) + 2.0 * rm.at(i, j, p) - 2.0 * rc;
            }
        }
    });
    return out;
}

ScalarField GridMetric::rm_contract(const SymTensorField& h1, const SymTensorField& h2) const {
    const CurvaturePack& cp = curvature();
    ScalarField out(chart());
    const std::size_t N = nodes();
    const int n = dim();
    const double* gi = ginv_.raw().data();
    for_nodes(N, opts_.exec, [&](std::size_t p) {
        // raise both arguments once per node
        double u1[16], u2[16];
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                double s1 = 0.0, s2 = 0.0;
                for (int a = 0; a < n; ++a) {
                    for (int b = 0; b < n; ++b) {
                        const double gia = gi[sym_index(n, i, a) * N + p];
                        const double gkb = gi[sym_index(n, k, b) * N + p];
                        s1 += gia * gkb * h1.at(a, b, p);
                        s2 += gia * gkb * h2.at(a, b, p);
                    }
                }
                u1[i * n + k] = s1;
                u2[i * n + k] = s2;
            }
        }
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        s += cp.riem(i, j, k, l, p) * u1[i * n + k] * u2[j * n + l];
        out[p] = s;
    });
    return out;
}

SymTensorField GridMetric::rm_apply(const SymTensorField& h) const {
    const CurvaturePack& cp = curvature();
    SymTensorField out(chart());
    const std::size_t N = nodes();
    const int n = dim();
    const double* gi = ginv_.raw().data();
    for_nodes(N, opts_.exec, [&](std::size_t p) {
        double up[16];
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        s += gi[sym_index(n, i, a) * N + p] * gi[sym_index(n, k, b) * N + p] *
                             h.at(a, b, p);
                up[i * n + k] = s;
            }
        }
        for (int j = 0; j < n; ++j) {
            for (int l = j; l < n; ++l) {
                double s = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int k = 0; k < n; ++k) s += cp.riem(i, j, k, l, p) * up[i * n + k];
                out.at(j, l, p) = s;
            }
        }
    });
    return out;
}

// --- integration ---

double GridMetric::integrate(const ScalarField& s) const {
    detail::check_same_chart(*chart(), *s.chart());
    const std::size_t N = nodes();
    std::vector<double> w(N);
    const double cw = chart()->cell_weight();
    for_nodes(N, opts_.exec, [&](std::size_t p) { w[p] = s[p] * dens_[p] * cw; });
    return pairwise_sum(w);
}

double GridMetric::inner(const ScalarField& a, const ScalarField& b) const {
    const std::size_t N = nodes();
    std::vector<double> w(N);
    const double cw = chart()->cell_weight();
    for_nodes(N, opts_.exec, [&](std::size_t p) { w[p] = a[p] * b[p] * dens_[p] * cw; });
    return pairwise_sum(w);
}

double GridMetric::inner(const OneFormField& a, const OneFormField& b) const {
    ScalarField pw = pointwise_inner(a, b);
    return integrate(pw);
}

double GridMetric::inner(const SymTensorField& a, const SymTensorField& b) const {
    ScalarField pw = pointwise_inner(a, b);
    return integrate(pw);
}

ScalarField GridMetric::pointwise_inner(const SymTensorField& a, const SymTensorField& b) const {
    detail::check_same_chart(*chart(), *a.chart());
    detail::check_same_chart(*chart(), *b.chart());
    ScalarField out(chart());
    const std::size_t N = nodes();
    const int n = dim();
    const double* gi = ginv_.raw().data();
    for_nodes(N, opts_.exec, [&](std::size_t p) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        s += gi[sym_index(n, i, k) * N + p] * gi[sym_index(n, j, l) * N + p] *
                             a.at(i, j, p) * b.at(k, l, p);
        out[p] = s;
    });
    return out;
}

ScalarField GridMetric::pointwise_inner(const OneFormField& a, const OneFormField& b) const {
    detail::check_same_chart(*chart(), *a.chart());
    ScalarField out(chart());
    const std::size_t N = nodes();
    const int n = dim();
    const double* gi = ginv_.raw().data();
    for_nodes(N, opts_.exec, [&](std::size_t p) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                s += gi[sym_index(n, i, j) * N + p] * a.at(i, p) * b.at(j, p);
        out[p] = s;
    });
    return out;
}

ScalarField GridMetric::cov_deriv_norm2(const SymTensorField& h) const {
    CovDeriv3 t = cov_deriv(h);
    ScalarField out(chart());
    const std::size_t N = nodes();
    const int n = dim();
    const double* gi = ginv_.raw().data();
    for_nodes(N, opts_.exec, [&](std::size_t p) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int i = 0; i < n; ++i)
                    for (int k = 0; k < n; ++k)
                        for (int j = 0; j < n; ++j)
                            for (int l = 0; l < n; ++l)
                                s += gi[sym_index(n, a, b) * N + p] *
                                     gi[sym_index(n, i, k) * N + p] *
                                     gi[sym_index(n, j, l) * N + p] * t.at(a, i, j, p) *
                                     t.at(b, k, l, p);
        out[p] = s;
    });
    return out;
}

void GridMetric::tensor_gram_solve(const SymTensorField& b, SymTensorField& out) const {
    const std::size_t N = nodes();
    const int n = dim();
    const int sc = sym_count(n);
    if (!gram_inv_) {
        std::vector<double> inv(static_cast<std::size_t>(sc) * sc * N);
        const double* gi = ginv_.raw().data();
        for_nodes(N, opts_.exec, [&](std::size_t p) {
            Eigen::MatrixXd Q(sc, sc);
            for (int c = 0; c < sc; ++c) {
                for (int d = 0; d < sc; ++d) {
                    // <E_c, E_d>_g with E_c the packed unit tensor
                    int ci = 0, crem = c;
                    while (crem >= n - ci) { crem -= n - ci; ++ci; }
                    const int cj = ci + crem;
                    int di = 0, drem = d;
                    while (drem >= n - di) { drem -= n - di; ++di; }
                    const int dj = di + drem;
                    double s = 0.0;
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            for (int k = 0; k < n; ++k)
                                for (int l = 0; l < n; ++l) {
                                    const double ec =
                                        ((i == ci && j == cj) || (i == cj && j == ci)) ? 1.0 : 0.0;
                                    const double ed =
                                        ((k == di && l == dj) || (k == dj && l == di)) ? 1.0 : 0.0;
                                    if (ec == 0.0 || ed == 0.0) continue;
                                    s += gi[sym_index(n, i, k) * N + p] *
                                         gi[sym_index(n, j, l) * N + p] * ec * ed;
                                }
                    Q(c, d) = s;
                }
            }
            Eigen::MatrixXd Qi = Q.inverse();
            for (int c = 0; c < sc; ++c)
                for (int d = 0; d < sc; ++d)
                    inv[(static_cast<std::size_t>(c) * sc + d) * N + p] = Qi(c, d);
        });
        gram_inv_ = std::move(inv);
    }
    const std::vector<double>& gi = *gram_inv_;
    for_nodes(N, opts_.exec, [&](std::size_t p) {
        for (int c = 0; c < sc; ++c) {
            double s = 0.0;
            for (int d = 0; d < sc; ++d)
                s += gi[(static_cast<std::size_t>(c) * sc + d) * N + p] * b.raw()[d * N + p];
            out.raw()[c * N + p] = s;
        }
    });
}

SymTensorField GridMetric::multiply(const ScalarField& f, const SymTensorField& h) const {
    SymTensorField out(chart());
    const std::size_t N = nodes();
    for (int c = 0; c < h.comps(); ++c) {
        auto o = out.comp(c);
        auto i = h.comp(c);
        for_nodes(N, opts_.exec, [&](std::size_t p) { o[p] = f[p] * i[p]; });
    }
    return out;
}

double GridMetric::einstein_residual(double sigma) const {
    const CurvaturePack& cp = curvature();
    const std::size_t N = nodes();
    std::vector<double> r(N, 0.0);
    const int sc = sym_count(dim());
    for_nodes(N, opts_.exec, [&](std::size_t p) {
        double m = 0.0;
        for (int c = 0; c < sc; ++c)
            m = std::max(m, std::abs(cp.ricci.raw()[c * N + p] +
                                     g_.raw()[c * N + p] / (2.0 * sigma)));
        r[p] = m;
    });
    return sup_abs(r, opts_.exec);
}

} // namespace nuplus
