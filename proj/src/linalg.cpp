#include "nuplus/numerics/linalg.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "nuplus/core/errors.hpp"

namespace nuplus {

namespace {
double vdot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
} // namespace

CgResult cg_solve(std::size_t n, const VecFn& apply, const std::vector<double>& b,
                  std::vector<double>& x, const CgOptions& opts, const VecFn* precond,
                  const VecFn* project) {
    std::vector<double> r = b, z(n), p(n), ap(n);
    if (x.size() != n) x.assign(n, 0.0);
    if (project) (*project)(x, x);
    apply(x, ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
    if (project) (*project)(r, r);

    auto prec = [&](const std::vector<double>& in, std::vector<double>& out) {
        if (precond)
            (*precond)(in, out);
        else
            out = in;
        if (project) (*project)(out, out);
    };

    prec(r, z);
    p = z;
    double rz = vdot(r, z);
    const double b0 = std::sqrt(std::max(vdot(b, b), 1e-300));
    CgResult res;
    for (int it = 0; it < opts.max_iter; ++it) {
        const double rn = std::sqrt(vdot(r, r));
        res.residual = rn / b0;
        res.iterations = it;
        if (res.residual <= opts.tol) {
            res.converged = true;
            return res;
        }
        apply(p, ap);
        if (project) (*project)(ap, ap);
        const double pap = vdot(p, ap);
        if (!(pap > 0.0)) {
            // nonpositive curvature: stop with what we have
            return res;
        }
        const double alpha = rz / pap;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        prec(r, z);
        const double rz_new = vdot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    res.residual = std::sqrt(vdot(r, r)) / b0;
    res.converged = res.residual <= opts.tol;
    return res;
}

EigResult lanczos_extreme(const PencilOps& ops, bool want_max, int max_iter, double tol,
                          std::uint64_t seed, const std::vector<double>* start) {
    const std::size_t n = ops.n;
    auto m_norm = [&](const std::vector<double>& v) {
        std::vector<double> mv(n);
        ops.m_apply(v, mv);
        return std::sqrt(std::max(vdot(v, mv), 0.0));
    };

    std::vector<std::vector<double>> V;  // M-orthonormal Lanczos basis
    std::vector<std::vector<double>> MV; // M * basis
    std::vector<double> alpha, beta;

    std::vector<double> v(n);
    if (start && start->size() == n) {
        v = *start;
    } else {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> g;
        for (double& x : v) x = g(rng);
    }
    if (ops.project) ops.project(v, v);
    double nv = m_norm(v);
    if (nv == 0.0) throw NumericalError("lanczos: start vector annihilated by projector");
    for (double& x : v) x /= nv;

    EigResult out;
    std::vector<double> w(n), mv(n);
    for (int j = 0; j < max_iter; ++j) {
        V.push_back(v);
        ops.m_apply(v, mv);
        MV.push_back(mv);

        ops.a_apply(v, w);
        ops.m_solve(w, w);
        if (ops.project) ops.project(w, w);

        double a = 0.0;
        {
            std::vector<double> mw(n);
            ops.m_apply(w, mw);
            a = vdot(V.back(), mw);
        }
        alpha.push_back(a);
        // full reorthogonalization against all basis vectors (twice)
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = 0; i < V.size(); ++i) {
                const double c = vdot(w, MV[i]);
                for (std::size_t k = 0; k < n; ++k) w[k] -= c * V[i][k];
            }
        const double b = m_norm(w);

        // Ritz values of the tridiagonal
        const int m = static_cast<int>(alpha.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            T(i, i) = alpha[i];
            if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta.size() > static_cast<std::size_t>(i)
                                                           ? beta[i]
                                                           : 0.0;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        const int pick = want_max ? m - 1 : 0;
        const double theta = es.eigenvalues()(pick);
        out.ritz_history.push_back(theta);

        // residual of the Ritz pair: |beta_m * last component|
        const double rit_res = b * std::abs(es.eigenvectors()(m - 1, pick));
        if (rit_res <= tol * std::max(1.0, std::abs(theta)) || b <= 1e-300 ||
            j == max_iter - 1) {
            out.value = theta;
            out.vector.assign(n, 0.0);
            for (int i = 0; i < m; ++i)
                for (std::size_t k = 0; k < n; ++k)
                    out.vector[k] += es.eigenvectors()(i, pick) * V[i][k];
            if (ops.project) ops.project(out.vector, out.vector);
            // true residual
            std::vector<double> av(n), mvv(n);
            ops.a_apply(out.vector, av);
            ops.m_apply(out.vector, mvv);
            for (std::size_t k = 0; k < n; ++k) av[k] -= theta * mvv[k];
            if (ops.project) ops.project(av, av);
            std::vector<double> mi(n);
            ops.m_solve(av, mi);
            const double vn = m_norm(out.vector);
            out.residual = std::sqrt(std::max(vdot(av, mi), 0.0)) / std::max(vn, 1e-300);
            out.converged = rit_res <= tol * std::max(1.0, std::abs(theta));
            return out;
        }
        beta.push_back(b);
        for (std::size_t k = 0; k < n; ++k) v[k] = w[k] / b;
    }
    return out;
}

EigResult shift_invert_smallest(const PencilOps& ops, double shift, int max_iter, double tol,
                                const VecFn* precond, const std::vector<double>* start) {
    const std::size_t n = ops.n;
    VecFn shifted = [&](const std::vector<double>& x, std::vector<double>& y) {
        std::vector<double> t(n);
        ops.a_apply(x, y);
        ops.m_apply(x, t);
        for (std::size_t i = 0; i < n; ++i) y[i] -= shift * t[i];
    };

    std::vector<double> v(n, 1.0);
    if (start && start->size() == n) v = *start;
    if (ops.project) ops.project(v, v);

    EigResult out;
    std::vector<double> mv(n), x(n, 0.0), av(n);
    for (int it = 0; it < max_iter; ++it) {
        ops.m_apply(v, mv);
        CgOptions copt;
        copt.tol = 1e-13;
        cg_solve(n, shifted, mv, x, copt, precond,
                 ops.project ? &ops.project : nullptr);
        // M-normalize
        ops.m_apply(x, mv);
        const double nx = std::sqrt(std::max(vdot(x, mv), 1e-300));
        for (std::size_t i = 0; i < n; ++i) v[i] = x[i] / nx;

        ops.a_apply(v, av);
        ops.m_apply(v, mv);
        const double theta = vdot(v, av); // v^T A v, ||v||_M = 1
        for (std::size_t i = 0; i < n; ++i) av[i] -= theta * mv[i];
        std::vector<double> mi(n);
        ops.m_solve(av, mi);
        const double res = std::sqrt(std::max(vdot(av, mi), 0.0));
        out.ritz_history.push_back(theta);
        out.value = theta;
        out.residual = res;
        if (res <= tol) {
            out.converged = true;
            out.vector = v;
            return out;
        }
    }
    out.vector = v;
    return out;
}

double golden_max(const std::function<double(double)>& f, double a, double b, double xtol,
                  double* fbest) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    const double x = f1 > f2 ? x1 : x2;
    if (fbest) *fbest = std::max(f1, f2);
    return x;
}

double brent_root(const std::function<double(double)>& f, double a, double b, double fa,
                  double fb, double xtol) {
    if (fa * fb > 0.0) throw NumericalError("brent: interval does not bracket a root");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < 200; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return b;
}

} // namespace nuplus
