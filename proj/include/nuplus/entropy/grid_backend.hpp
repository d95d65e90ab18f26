#pragma once

#include "nuplus/entropy/backend.hpp"
#include "nuplus/geometry/metric.hpp"

namespace nuplus {

/// Spectral realization of the scalar backend on a periodic grid metric.
/// The Dirichlet form is assembled in divergence form so it is symmetric to
/// FFT roundoff. Keeps a reference to the metric; the caller owns it.
class GridScalarBackend final : public ScalarBackend {
public:
    explicit GridScalarBackend(const GridMetric& gm);

    int dim() const override { return gm_.dim(); }
    std::size_t size() const override { return gm_.nodes(); }
    double volume() const override { return gm_.volume(); }

    const std::vector<double>& lumped_mass() const override { return mass_; }
    void mass_apply(const std::vector<double>& x, std::vector<double>& y) const override;
    void mass_solve(const std::vector<double>& b, std::vector<double>& x) const override;
    void stiffness_apply(const std::vector<double>& x, std::vector<double>& y) const override;
    void curvature_apply(const std::vector<double>& x, std::vector<double>& y) const override;
    void precond_solve(double sigma, double tau, const std::vector<double>& b,
                       std::vector<double>& x) const override;
    std::vector<double> random_smooth(std::uint64_t seed) const override;
    double min_curvature_estimate() const override { return min_r_; }
    const void* metric_tag() const override { return &gm_; }

    const GridMetric& metric() const { return gm_; }

private:
    const GridMetric& gm_;
    std::vector<double> mass_; // dens * cell weight
    double mean_coeff_ = 1.0;  // mean of dens * tr(g^{-1})/n, for the preconditioner
    double mean_mass_ = 1.0;
    double min_r_ = 0.0;
};

} // namespace nuplus
