#include "nuplus/entropy/grid_backend.hpp"

#include <algorithm>
#include <cmath>

namespace nuplus {

GridScalarBackend::GridScalarBackend(const GridMetric& gm) : gm_(gm) {
    const std::size_t N = gm.nodes();
    const double cw = gm.chart()->cell_weight();
    mass_.resize(N);
    for (std::size_t p = 0; p < N; ++p) mass_[p] = gm.density()[p] * cw;

    const int n = gm.dim();
    double acc = 0.0, accm = 0.0;
    for (std::size_t p = 0; p < N; ++p) {
        double tr = 0.0;
        for (int a = 0; a < n; ++a) tr += gm.inverse().at(a, a, p);
        acc += gm.density()[p] * tr / n;
        accm += gm.density()[p];
    }
    mean_coeff_ = acc / static_cast<double>(N) * cw;
    mean_mass_ = accm / static_cast<double>(N) * cw;

    min_r_ = 0.0;
    const ScalarField& R = gm.curvature().scalar;
    for (std::size_t p = 0; p < N; ++p) min_r_ = std::min(min_r_, R[p]);
}

void GridScalarBackend::mass_apply(const std::vector<double>& x, std::vector<double>& y) const {
    y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = mass_[i] * x[i];
}

void GridScalarBackend::mass_solve(const std::vector<double>& b, std::vector<double>& x) const {
    x.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) x[i] = b[i] / mass_[i];
}

void GridScalarBackend::stiffness_apply(const std::vector<double>& x,
                                        std::vector<double>& y) const {
    const std::size_t N = gm_.nodes();
    const int n = gm_.dim();
    const Spectral& sp = gm_.chart()->spectral();
    const double cw = gm_.chart()->cell_weight();

    std::vector<std::vector<double>> dx(n, std::vector<double>(N));
    for (int a = 0; a < n; ++a) sp.derivative(x.data(), a, dx[a].data());

    // flux^a = dens g^{ab} d_b x, then y = -cw * d_a flux^a  (divergence form)
    std::vector<double> flux(N), dflux(N);
    y.assign(N, 0.0);
    for (int a = 0; a < n; ++a) {
        for (std::size_t p = 0; p < N; ++p) {
            double s = 0.0;
            for (int b = 0; b < n; ++b)
                s += gm_.inverse().at(a, b, p) * dx[b][p];
            flux[p] = gm_.density()[p] * s;
        }
        sp.derivative(flux.data(), a, dflux.data());
        for (std::size_t p = 0; p < N; ++p) y[p] -= cw * dflux[p];
    }
}

void GridScalarBackend::curvature_apply(const std::vector<double>& x,
                                        std::vector<double>& y) const {
    const ScalarField& R = gm_.curvature().scalar;
    y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = mass_[i] * R[i] * x[i];
}

void GridScalarBackend::precond_solve(double sigma, double tau, const std::vector<double>& b,
                                      std::vector<double>& x) const {
    x.resize(b.size());
    const double a = 4.0 * sigma * mean_coeff_;
    const double c = std::max(tau, 0.05) * mean_mass_;
    gm_.chart()->spectral().helmholtz_solve(b.data(), a, c, x.data());
}

std::vector<double> GridScalarBackend::random_smooth(std::uint64_t seed) const {
    return gm_.chart()->spectral().random_band_limited(seed, 4);
}

} // namespace nuplus
