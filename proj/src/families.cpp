#include "nuplus/geometry/families.hpp"

#include <cmath>
#include <numbers>

#include "nuplus/core/errors.hpp"

namespace nuplus {

SymTensorField flat_metric(const ChartPtr& chart, const std::vector<double>& diag) {
    SymTensorField g(chart);
    const int n = chart->dim();
    if (!diag.empty() && static_cast<int>(diag.size()) != n)
        throw UsageError("flat_metric: diag size mismatch");
    for (int i = 0; i < n; ++i) {
        const double d = diag.empty() ? 1.0 : diag[i];
        auto c = g.comp(sym_index(n, i, i));
        for (std::size_t p = 0; p < g.nodes(); ++p) c[p] = d;
    }
    return g;
}

SymTensorField conformal_metric(const ChartPtr& chart, const ScalarField& u) {
    SymTensorField g(chart);
    const int n = chart->dim();
    for (int i = 0; i < n; ++i) {
        auto c = g.comp(sym_index(n, i, i));
        for (std::size_t p = 0; p < g.nodes(); ++p) c[p] = std::exp(2.0 * u[p]);
    }
    return g;
}

ScalarField sine_bump(const ChartPtr& chart, double amp) {
    ScalarField u(chart);
    const int n = chart->dim();
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t p = 0; p < u.size(); ++p) {
        double v = amp;
        for (int a = 0; a < n; ++a)
            v *= std::sin(two_pi * chart->coord(a, p) / chart->period()[a]);
        u[p] = v;
    }
    return u;
}

SymTensorField random_sym_tensor(const ChartPtr& chart, std::uint64_t seed, int max_mode,
                                 double amp) {
    SymTensorField h(chart);
    for (int c = 0; c < h.comps(); ++c) {
        auto f = chart->spectral().random_band_limited(seed * 1000003u + c, max_mode);
        auto o = h.comp(c);
        for (std::size_t p = 0; p < h.nodes(); ++p) o[p] = amp * f[p];
    }
    return h;
}

OneFormField random_one_form(const ChartPtr& chart, std::uint64_t seed, int max_mode,
                             double amp) {
    OneFormField w(chart);
    for (int a = 0; a < chart->dim(); ++a) {
        auto f = chart->spectral().random_band_limited(seed * 2000029u + a, max_mode);
        auto o = w.comp(a);
        for (std::size_t p = 0; p < w.nodes(); ++p) o[p] = amp * f[p];
    }
    return w;
}

ScalarField random_scalar(const ChartPtr& chart, std::uint64_t seed, int max_mode, double amp) {
    auto f = chart->spectral().random_band_limited(seed * 3000073u, max_mode);
    ScalarField s(chart);
    for (std::size_t p = 0; p < s.size(); ++p) s[p] = amp * f[p];
    return s;
}

SymTensorField add(const SymTensorField& a, double s, const SymTensorField& b) {
    SymTensorField out = a;
    for (std::size_t i = 0; i < out.raw().size(); ++i) out.raw()[i] += s * b.raw()[i];
    return out;
}

SymTensorField scale_tensor(double s, const SymTensorField& a) {
    SymTensorField out = a;
    for (double& v : out.raw()) v *= s;
    return out;
}

} // namespace nuplus
