#include "nuplus/entropy/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "nuplus/core/errors.hpp"
#include "nuplus/numerics/linalg.hpp"

namespace nuplus {

namespace {

double vdot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double safe_log_sq(double w) {
    const double w2 = w * w;
    return w2 > 0.0 ? std::log(w2) : -745.0; // log of smallest double
}

/// Value and weak gradient of the substituted functional
///   E(w) = c [ sigma (4 w'Sw + w'Cw) + sum mL w^2 ln w^2 + n w'Mw ],
/// c = (4 pi sigma)^{-n/2}. The constraint is w'Mw = 1/c.
struct Objective {
    const ScalarBackend& bk;
    double sigma;
    double c;

    explicit Objective(const ScalarBackend& b, double s)
        : bk(b), sigma(s), c(std::pow(4.0 * std::numbers::pi * s, -0.5 * b.dim())) {}

    double target_norm2() const { return 1.0 / c; }

    double value(const std::vector<double>& w, std::vector<double>& scratch) const {
        const std::size_t n = w.size();
        std::vector<double>& t = scratch;
        bk.stiffness_apply(w, t);
        double quad = 4.0 * vdot(w, t);
        bk.curvature_apply(w, t);
        quad += vdot(w, t);
        bk.mass_apply(w, t);
        const double m2 = vdot(w, t);
        const std::vector<double>& ml = bk.lumped_mass();
        double logterm = 0.0;
        for (std::size_t i = 0; i < n; ++i) logterm += ml[i] * w[i] * w[i] * safe_log_sq(w[i]);
        return c * (sigma * quad + logterm + bk.dim() * m2);
    }

    // weak gradient (no Riesz map yet)
    void gradient(const std::vector<double>& w, std::vector<double>& g,
                  std::vector<double>& scratch) const {
        const std::size_t n = w.size();
        bk.stiffness_apply(w, g);
        for (double& v : g) v *= 8.0 * sigma;
        bk.curvature_apply(w, scratch);
        for (std::size_t i = 0; i < n; ++i) g[i] += 2.0 * sigma * scratch[i];
        bk.mass_apply(w, scratch);
        for (std::size_t i = 0; i < n; ++i) g[i] += 2.0 * bk.dim() * scratch[i];
        const std::vector<double>& ml = bk.lumped_mass();
        for (std::size_t i = 0; i < n; ++i)
            g[i] += ml[i] * (2.0 * w[i] * safe_log_sq(w[i]) + 2.0 * w[i]);
        for (double& v : g) v *= c;
    }

    // weak Euler-Lagrange vector  sigma(4S+C)w + mL.(w ln w^2) + n Mw
    void el_weak(const std::vector<double>& w, std::vector<double>& a,
                 std::vector<double>& scratch) const {
        const std::size_t n = w.size();
        bk.stiffness_apply(w, a);
        for (double& v : a) v *= 4.0 * sigma;
        bk.curvature_apply(w, scratch);
        for (std::size_t i = 0; i < n; ++i) a[i] += sigma * scratch[i];
        bk.mass_apply(w, scratch);
        for (std::size_t i = 0; i < n; ++i) a[i] += bk.dim() * scratch[i];
        const std::vector<double>& ml = bk.lumped_mass();
        for (std::size_t i = 0; i < n; ++i) a[i] += ml[i] * w[i] * safe_log_sq(w[i]);
    }

    // sup-norm of the f-form stationarity residual, mu = current value
    double el_residual(const std::vector<double>& w, double mu,
                       std::vector<double>& scratch) const {
        const std::size_t n = w.size();
        std::vector<double> a(n);
        el_weak(w, a, scratch);
        bk.mass_solve(a, a);
        double wbar = 0.0;
        for (double v : w) wbar += std::abs(v);
        wbar /= static_cast<double>(n);
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double denom = std::max(std::abs(w[i]), 1e-8 * wbar);
            r = std::max(r, std::abs(a[i] - mu * w[i]) / denom);
        }
        return r;
    }
};

void m_normalize(const ScalarBackend& bk, std::vector<double>& w, double target_norm2) {
    std::vector<double> t(w.size());
    bk.mass_apply(w, t);
    const double s = std::sqrt(target_norm2 / std::max(vdot(w, t), 1e-300));
    for (double& v : w) v *= s;
}

// one Newton step on the bordered stationarity system; returns false when the
// CG solve hits nonpositive curvature (caller falls back to gradient steps)
bool newton_step(const Objective& obj, std::vector<double>& w, double& theta) {
    const ScalarBackend& bk = obj.bk;
    const std::size_t n = w.size();
    std::vector<double> scratch(n), f(n), mw(n);

    obj.el_weak(w, f, scratch);
    bk.mass_apply(w, mw);
    // multiplier equation uses mL on the linear-in-w part
    const std::vector<double>& ml = bk.lumped_mass();
    std::vector<double> fw = f;
    for (std::size_t i = 0; i < n; ++i) fw[i] += ml[i] * w[i];
    theta = vdot(w, fw) / obj.target_norm2();
    for (std::size_t i = 0; i < n; ++i) f[i] = fw[i] - theta * mw[i];

    VecFn happly = [&](const std::vector<double>& x, std::vector<double>& y) {
        std::vector<double> t(n);
        bk.stiffness_apply(x, y);
        for (double& v : y) v *= 4.0 * obj.sigma;
        bk.curvature_apply(x, t);
        for (std::size_t i = 0; i < n; ++i) y[i] += obj.sigma * t[i];
        bk.mass_apply(x, t);
        for (std::size_t i = 0; i < n; ++i) y[i] += (bk.dim() - theta) * t[i];
        for (std::size_t i = 0; i < n; ++i)
            y[i] += ml[i] * (safe_log_sq(w[i]) + 3.0) * x[i];
    };
    VecFn prec = [&](const std::vector<double>& b, std::vector<double>& x) {
        bk.precond_solve(obj.sigma, bk.dim() + 1.0, b, x);
    };

    std::vector<double> x1(n, 0.0), x2(n, 0.0), rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -f[i];
    CgOptions copt;
    copt.tol = 1e-12;
    CgResult r1 = cg_solve(n, happly, rhs, x1, copt, &prec);
    CgResult r2 = cg_solve(n, happly, mw, x2, copt, &prec);
    if (!r1.converged && r1.residual > 1e-6) return false;
    if (!r2.converged && r2.residual > 1e-6) return false;

    const double cres = 0.5 * (obj.target_norm2() - vdot(w, mw));
    const double denom = vdot(mw, x2);
    if (denom == 0.0) return false;
    const double dtheta = (cres - vdot(mw, x1)) / denom;
    for (std::size_t i = 0; i < n; ++i) w[i] += x1[i] + dtheta * x2[i];
    theta += dtheta;
    m_normalize(bk, w, obj.target_norm2());
    return true;
}

MuResult minimize_from(const Objective& obj, std::vector<double> w, const MuOptions& opts) {
    const ScalarBackend& bk = obj.bk;
    const std::size_t n = w.size();
    m_normalize(bk, w, obj.target_norm2());

    std::vector<double> scratch(n), grad(n), riesz(n), tangent(n), mw(n);
    std::vector<double> w_prev, g_prev;
    double E = obj.value(w, scratch);

    MuResult out;
    out.value_trace.push_back(E);

    double step = 0.0;
    int it = 0;
    bool newton_phase = false;
    for (; it < opts.max_iter; ++it) {
        obj.gradient(w, grad, scratch);
        bk.mass_solve(grad, riesz);
        bk.mass_apply(w, mw);
        const double coef = vdot(grad, w) / obj.target_norm2();
        for (std::size_t i = 0; i < n; ++i) tangent[i] = riesz[i] - coef * w[i];

        const double dd = vdot(grad, tangent); // directional derivative along -tangent
        const double tnorm = std::sqrt(std::max(vdot(tangent, tangent), 0.0));

        // residual check every few iterations
        if (it % 5 == 0 || dd <= 0.0) {
            const double res = obj.el_residual(w, E, scratch);
            out.el_residual = res;
            if (res <= opts.el_tol) break;
            if (opts.use_newton && res <= 1e-2 * (1.0 + std::abs(E))) newton_phase = true;
        }

        if (newton_phase) {
            std::vector<double> w_try = w;
            double theta = 0.0;
            if (newton_step(obj, w_try, theta)) {
                const double E_try = obj.value(w_try, scratch);
                if (E_try <= E + 1e-12 * (1.0 + std::abs(E))) {
                    w = std::move(w_try);
                    E = E_try;
                    out.value_trace.push_back(E);
                    const double res = obj.el_residual(w, E, scratch);
                    out.el_residual = res;
                    if (res <= std::min(opts.el_tol, 1e-10 * (1.0 + std::abs(E))) ||
                        res <= opts.el_tol * 1e-3)
                        break;
                    continue;
                }
            }
            newton_phase = false; // fall back to gradient steps this round
        }

        // Barzilai-Borwein step with Armijo backtracking
        if (!w_prev.empty()) {
            double sy = 0.0, ss = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double s = w[i] - w_prev[i];
                const double y = riesz[i] - g_prev[i];
                sy += s * y;
                ss += s * s;
            }
            step = (sy > 0.0 && ss > 0.0) ? ss / sy : step * 2.0;
        } else {
            step = 0.1 * std::sqrt(obj.target_norm2()) / std::max(tnorm, 1e-30);
        }
        step = std::clamp(step, 1e-12, 1e6);

        w_prev = w;
        g_prev = riesz;

        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            std::vector<double> w_try(n);
            for (std::size_t i = 0; i < n; ++i) w_try[i] = w[i] - step * tangent[i];
            m_normalize(bk, w_try, obj.target_norm2());
            const double E_try = obj.value(w_try, scratch);
            if (E_try <= E - 1e-4 * step * dd || E_try < E) {
                w = std::move(w_try);
                E = E_try;
                out.value_trace.push_back(E);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            const double res = obj.el_residual(w, E, scratch);
            out.el_residual = res;
            break; // line search exhausted; residual decides below
        }
    }

    out.el_residual = obj.el_residual(w, E, scratch);
    if (out.el_residual > opts.el_tol)
        throw OptimizerError("mu_plus optimizer did not reach tolerance", out.el_residual);

    // enforce the sign convention w > 0 (the functional is even in w)
    double mean = 0.0;
    for (double v : w) mean += v;
    if (mean < 0.0)
        for (double& v : w) v = -v;

    bk.mass_apply(w, mw);
    out.constraint_residual = std::abs(obj.c * vdot(w, mw) - 1.0);
    out.mu = E;
    out.w = std::move(w);
    out.iterations = it;
    return out;
}

} // namespace

double w_plus(const ScalarBackend& bk, const std::vector<double>& f, double sigma,
              double* norm_defect) {
    if (!(sigma > 0.0)) throw DomainError("w_plus: sigma must be positive");
    if (f.size() != bk.size()) throw UsageError("w_plus: field size mismatch");
    Objective obj(bk, sigma);
    std::vector<double> w(f.size()), scratch(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) w[i] = std::exp(-0.5 * f[i]);
    if (norm_defect) {
        std::vector<double> mw(f.size());
        bk.mass_apply(w, mw);
        *norm_defect = obj.c * vdot(w, mw) - 1.0;
    }
    return obj.value(w, scratch);
}

MuResult minimize_mu(const ScalarBackend& bk, double sigma, const MuOptions& opts,
                     const std::vector<double>* warm_w) {
    if (!(sigma > 0.0)) throw DomainError("mu_plus: sigma must be positive");
    Objective obj(bk, sigma);
    const std::size_t n = bk.size();

    std::vector<std::vector<double>> starts;
    if (warm_w && warm_w->size() == n) {
        starts.push_back(*warm_w);
    } else {
        starts.emplace_back(n, 1.0); // constant start
        for (int k = 0; k < opts.multistart; ++k) {
            std::vector<double> r = bk.random_smooth(opts.seed + 17 * k + 1);
            for (double& v : r) v = std::max(std::abs(1.0 + 0.5 * v), 0.05);
            starts.push_back(std::move(r));
        }
    }

    MuResult best;
    bool have = false;
    double lo = 0.0, hi = 0.0;
    for (auto& s : starts) {
        MuResult r = minimize_from(obj, std::move(s), opts);
        if (!have) {
            lo = hi = r.mu;
        } else {
            lo = std::min(lo, r.mu);
            hi = std::max(hi, r.mu);
        }
        if (!have || r.mu < best.mu) best = std::move(r);
        have = true;
    }
    best.multistart_spread = hi - lo;
    return best;
}

LambdaResult lambda_entropy(const ScalarBackend& bk, double tol,
                            const std::vector<double>* warm) {
    const std::size_t n = bk.size();
    PencilOps ops;
    ops.n = n;
    ops.a_apply = [&bk, n](const std::vector<double>& x, std::vector<double>& y) {
        std::vector<double> t(n);
        bk.stiffness_apply(x, y);
        for (double& v : y) v *= 4.0;
        bk.curvature_apply(x, t);
        for (std::size_t i = 0; i < n; ++i) y[i] += t[i];
    };
    ops.m_apply = [&bk](const std::vector<double>& x, std::vector<double>& y) {
        bk.mass_apply(x, y);
    };
    ops.m_solve = [&bk](const std::vector<double>& x, std::vector<double>& y) {
        bk.mass_solve(x, y);
    };
    const double shift = bk.min_curvature_estimate() - 1.0;
    VecFn prec = [&bk, shift](const std::vector<double>& b, std::vector<double>& x) {
        bk.precond_solve(0.25, std::max(1.0, -shift), b, x); // heuristic scale
    };
    EigResult e = shift_invert_smallest(ops, shift, 200, tol, &prec, warm);
    if (!e.converged)
        throw NumericalError("lambda eigensolve did not converge", e.ritz_history);
    LambdaResult out;
    out.lambda = e.value;
    out.residual = e.residual;
    out.mode = std::move(e.vector);
    return out;
}

EntropyResult maximize_nu(const ScalarBackend& bk, const NuOptions& opts) {
    EntropyResult out;
    out.metric_tag = bk.metric_tag();

    std::vector<double> lambda_warm;
    {
        LambdaResult lr = lambda_entropy(bk);
        out.lambda = lr.lambda;
        if (lr.lambda >= -1e-9) throw EntropyUndefinedError(lr.lambda);
    }

    struct Probe {
        double mu;
        std::vector<double> w;
    };
    std::map<double, Probe> cache; // keyed by sigma

    auto evaluate = [&](double sigma, bool multistart) -> const Probe& {
        auto it = cache.find(sigma);
        if (it != cache.end()) return it->second;
        const std::vector<double>* warm = nullptr;
        if (!cache.empty()) {
            // warm start from the nearest evaluated sigma
            auto up = cache.lower_bound(sigma);
            if (up == cache.end())
                warm = &std::prev(up)->second.w;
            else if (up == cache.begin())
                warm = &up->second.w;
            else {
                auto lo = std::prev(up);
                warm = (std::log(sigma / lo->first) < std::log(up->first / sigma))
                           ? &lo->second.w
                           : &up->second.w;
            }
        }
        MuOptions mo = opts.inner;
        if (!multistart && warm) {
            MuResult r = minimize_mu(bk, sigma, mo, warm);
            return cache.emplace(sigma, Probe{r.mu, std::move(r.w)}).first->second;
        }
        MuResult r = minimize_mu(bk, sigma, mo, nullptr);
        out.multistart_spread = std::max(out.multistart_spread, r.multistart_spread);
        return cache.emplace(sigma, Probe{r.mu, std::move(r.w)}).first->second;
    };

    double lo, hi;
    if (opts.warm && opts.warm_sigma > 0.0) {
        MuResult r0 = minimize_mu(bk, opts.warm_sigma, opts.inner, &opts.warm_w);
        cache.emplace(opts.warm_sigma, Probe{r0.mu, std::move(r0.w)});
        double a = opts.warm_sigma / 1.6, b = opts.warm_sigma * 1.6;
        // expand until interior maximum
        for (int guard = 0; guard < 40; ++guard) {
            const double fa = evaluate(a, false).mu;
            const double fm = evaluate(opts.warm_sigma, false).mu;
            const double fb = evaluate(b, false).mu;
            if (fm >= fa && fm >= fb) break;
            if (fa > fm)
                a /= 1.6;
            else
                b *= 1.6;
            if (b > opts.sigma_max) throw SigmaCapError(opts.sigma_max, std::max(fa, fb));
            if (a < opts.sigma_min) break;
        }
        lo = a;
        hi = b;
    } else {
        const int np = std::max(opts.scan_points, 5);
        const double lmin = std::log(opts.sigma_min), lmax = std::log(opts.sigma_max);
        int best = 0;
        double best_mu = -1e300;
        std::vector<double> sig(np);
        for (int i = 0; i < np; ++i) {
            sig[i] = std::exp(lmin + (lmax - lmin) * i / (np - 1));
            const double mu = evaluate(sig[i], i == 0).mu;
            if (mu > best_mu) {
                best_mu = mu;
                best = i;
            }
        }
        if (best == np - 1) throw SigmaCapError(opts.sigma_max, best_mu);
        lo = sig[std::max(best - 1, 0)];
        hi = sig[best + 1];
    }

    // golden section on ln sigma
    auto mu_of_log = [&](double ls) { return evaluate(std::exp(ls), false).mu; };
    const double ls_star0 = golden_max(mu_of_log, std::log(lo), std::log(hi), 1e-4);

    // derivative polish: sigma* is the root of the trace identity
    //   G(sigma) = mu(sigma) + c int f e^{-f} dV - n/2,  d mu / d sigma = G / sigma
    auto g_of = [&](double sigma) {
        const Probe& p = evaluate(sigma, false);
        Objective obj(bk, sigma);
        const std::vector<double>& ml = bk.lumped_mass();
        double fef = 0.0;
        for (std::size_t i = 0; i < p.w.size(); ++i)
            fef += ml[i] * (-safe_log_sq(p.w[i])) * p.w[i] * p.w[i];
        return p.mu + obj.c * fef - 0.5 * bk.dim();
    };
    double sa = std::exp(ls_star0 - 2e-4), sb = std::exp(ls_star0 + 2e-4);
    double ga = g_of(sa), gb = g_of(sb);
    for (int guard = 0; guard < 60 && ga * gb > 0.0; ++guard) {
        // widen geometrically until the derivative changes sign
        if (std::abs(ga) < std::abs(gb))
            sa /= 1.3;
        else
            sb *= 1.3;
        if (sb > opts.sigma_max) throw SigmaCapError(opts.sigma_max, evaluate(sa, false).mu);
        sa = std::max(sa, opts.sigma_min);
        ga = g_of(sa);
        gb = g_of(sb);
    }
    double sigma_star;
    if (ga * gb <= 0.0 && ga != gb)
        sigma_star = brent_root(g_of, sa, sb, ga, gb, 1e-12 * std::max(1.0, sb));
    else
        sigma_star = std::exp(ls_star0);

    const Probe& final = evaluate(sigma_star, false);
    MuResult check = minimize_mu(bk, sigma_star, opts.inner, &final.w);

    out.nu_plus = check.mu;
    out.sigma_star = sigma_star;
    out.w_star = check.w;
    out.f_star.resize(check.w.size());
    for (std::size_t i = 0; i < check.w.size(); ++i)
        out.f_star[i] = -safe_log_sq(check.w[i]);
    out.el_residual = check.el_residual;
    out.constraint_residual = check.constraint_residual;
    out.eq_trace_residual = std::abs(g_of(sigma_star));
    for (const auto& [s, p] : cache) out.mu_curve.emplace_back(s, p.mu);
    return out;
}

} // namespace nuplus
