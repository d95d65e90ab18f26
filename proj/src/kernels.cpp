#include "nuplus/geometry/kernels.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>

#include "nuplus/geometry/fields.hpp"

namespace nuplus::kernels {

namespace {

// stack buffers below are sized for this; GridMetric enforces the cap
constexpr int kMaxDim = 4;
constexpr int kMaxSym = kMaxDim * (kMaxDim + 1) / 2;

// gather packed symmetric matrix at a node into a dense buffer
inline void load_sym(int n, std::size_t nodes, const double* a, std::size_t node,
                     double* dense) {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            dense[i * n + j] = a[sym_index(n, i, j) * nodes + node];
}

} // namespace

std::size_t sym_invert(int n, std::size_t nodes, const double* g, double* ginv,
                       double* det, Exec exec) {
    std::atomic<std::size_t> bad{nodes};
    const int sc = sym_count(n);
    for_nodes(nodes, exec, [&](std::size_t p) {
        if (n == 2) {
            const double a = g[0 * nodes + p], b = g[1 * nodes + p], c = g[2 * nodes + p];
            const double d = a * c - b * b;
            det[p] = d;
            if (!(a > 0.0 && d > 0.0)) {
                std::size_t cur = bad.load();
                while (p < cur && !bad.compare_exchange_weak(cur, p)) {}
                return;
            }
            ginv[0 * nodes + p] = c / d;
            ginv[1 * nodes + p] = -b / d;
            ginv[2 * nodes + p] = a / d;
            return;
        }
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = g[sym_index(n, i, j) * nodes + p];
        Eigen::LLT<Eigen::MatrixXd> llt(m);
        if (llt.info() != Eigen::Success) {
            std::size_t cur = bad.load();
            while (p < cur && !bad.compare_exchange_weak(cur, p)) {}
            return;
        }
        double d = 1.0;
        for (int i = 0; i < n; ++i) d *= llt.matrixL()(i, i);
        det[p] = d * d;
        Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
        for (int c = 0; c < sc; ++c) {
            // recover (i,j) from packed index
            int i = 0, rem = c;
            while (rem >= n - i) { rem -= n - i; ++i; }
            ginv[c * nodes + p] = inv(i, i + rem);
        }
    });
    return bad.load();
}

void christoffel(int n, std::size_t nodes, const double* ginv, const double* dg,
                 double* gamma, Exec exec) {
    const int sc = sym_count(n);
    for_nodes(nodes, exec, [&](std::size_t p) {
        double gi[kMaxDim * kMaxDim];
        load_sym(n, nodes, ginv, p, gi);
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                for (int j = i; j < n; ++j) {
                    double s = 0.0;
                    for (int l = 0; l < n; ++l) {
                        const double d_i = dg[(i * sc + sym_index(n, j, l)) * nodes + p];
                        const double d_j = dg[(j * sc + sym_index(n, i, l)) * nodes + p];
                        const double d_l = dg[(l * sc + sym_index(n, i, j)) * nodes + p];
                        s += gi[k * n + l] * (d_i + d_j - d_l);
                    }
                    gamma[(k * sc + sym_index(n, i, j)) * nodes + p] = 0.5 * s;
                }
            }
        }
    });
}

void riemann(int n, std::size_t nodes, const double* g, const double* gamma,
             const double* dgamma, double* riem, Exec exec) {
    const int sc = sym_count(n);
    for_nodes(nodes, exec, [&](std::size_t p) {
        double gm[kMaxDim * kMaxDim], ga[kMaxDim * kMaxSym];
        load_sym(n, nodes, g, p, gm);
        for (int k = 0; k < n; ++k)
            for (int c = 0; c < sc; ++c) ga[k * sc + c] = gamma[(k * sc + c) * nodes + p];

        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < n; ++k) {
                    for (int l = 0; l < n; ++l) {
                        double s = 0.0;
                        for (int a = 0; a < n; ++a) {
                            const double dk =
                                dgamma[(k * n * sc + a * sc + sym_index(n, l, j)) * nodes + p];
                            const double dl =
                                dgamma[(l * n * sc + a * sc + sym_index(n, k, j)) * nodes + p];
                            double quad = 0.0;
                            for (int b = 0; b < n; ++b) {
                                quad += ga[a * sc + sym_index(n, k, b)] *
                                            ga[b * sc + sym_index(n, l, j)] -
                                        ga[a * sc + sym_index(n, l, b)] *
                                            ga[b * sc + sym_index(n, k, j)];
                            }
                            s += gm[i * n + a] * (dk - dl + quad);
                        }
                        riem[(((i * n + j) * n + k) * n + l) * nodes + p] = s;
                    }
                }
            }
        }
    });
}

void cov_deriv_sym2(int n, std::size_t nodes, const double* gamma, const double* h,
                    const double* dh, double* out, Exec exec) {
    const int sc = sym_count(n);
    for_nodes(nodes, exec, [&](std::size_t p) {
        for (int a = 0; a < n; ++a) {
            for (int i = 0; i < n; ++i) {
                for (int j = i; j < n; ++j) {
                    double s = dh[(a * sc + sym_index(n, i, j)) * nodes + p];
                    for (int m = 0; m < n; ++m) {
                        s -= gamma[(m * sc + sym_index(n, a, i)) * nodes + p] *
                             h[sym_index(n, m, j) * nodes + p];
                        s -= gamma[(m * sc + sym_index(n, a, j)) * nodes + p] *
                             h[sym_index(n, i, m) * nodes + p];
                    }
                    out[(a * sc + sym_index(n, i, j)) * nodes + p] = s;
                }
            }
        }
    });
}

void cov_deriv2_sym2(int n, std::size_t nodes, const double* gamma, const double* t,
                     const double* dt, double* out, Exec exec) {
    const int sc = sym_count(n);
    for_nodes(nodes, exec, [&](std::size_t p) {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                for (int i = 0; i < n; ++i) {
                    for (int j = i; j < n; ++j) {
                        const int cij = sym_index(n, i, j);
                        double s = dt[(a * n * sc + b * sc + cij) * nodes + p];
                        for (int m = 0; m < n; ++m) {
                            s -= gamma[(m * sc + sym_index(n, a, b)) * nodes + p] *
                                 t[(m * sc + cij) * nodes + p];
                            s -= gamma[(m * sc + sym_index(n, a, i)) * nodes + p] *
                                 t[(b * sc + sym_index(n, m, j)) * nodes + p];
                            s -= gamma[(m * sc + sym_index(n, a, j)) * nodes + p] *
                                 t[(b * sc + sym_index(n, i, m)) * nodes + p];
                        }
                        out[((a * n + b) * sc + cij) * nodes + p] = s;
                    }
                }
            }
        }
    });
}

void cov_deriv_oneform(int n, std::size_t nodes, const double* gamma, const double* w,
                       const double* dw, double* out, Exec exec) {
    const int sc = sym_count(n);
    for_nodes(nodes, exec, [&](std::size_t p) {
        for (int a = 0; a < n; ++a) {
            for (int i = 0; i < n; ++i) {
                double s = dw[(a * n + i) * nodes + p];
                for (int m = 0; m < n; ++m)
                    s -= gamma[(m * sc + sym_index(n, a, i)) * nodes + p] * w[m * nodes + p];
                out[(a * n + i) * nodes + p] = s;
            }
        }
    });
}

} // namespace nuplus::kernels
