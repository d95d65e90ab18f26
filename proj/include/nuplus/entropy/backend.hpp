#pragma once

#include <cstdint>
#include <vector>

namespace nuplus {

/// Discretization-independent view of a closed Riemannian manifold, enough to
/// evaluate and optimize the entropy functionals. The grid realizes the weak
/// forms spectrally, the Bolza chart with P1 finite elements; the optimizer
/// never looks behind this interface.
///
/// Conventions: S is the Dirichlet form <grad x, grad phi_i> (PSD), C the
/// curvature form <R x, phi_i>, M the L^2(dV) mass. lumped_mass() is a
/// positive diagonal with the exact total volume; it weighs the pointwise
/// nonlinearities.
class ScalarBackend {
public:
    virtual ~ScalarBackend() = default;

    virtual int dim() const = 0;
    virtual std::size_t size() const = 0;
    virtual double volume() const = 0;

    virtual const std::vector<double>& lumped_mass() const = 0;
    virtual void mass_apply(const std::vector<double>& x, std::vector<double>& y) const = 0;
    virtual void mass_solve(const std::vector<double>& b, std::vector<double>& x) const = 0;
    virtual void stiffness_apply(const std::vector<double>& x, std::vector<double>& y) const = 0;
    virtual void curvature_apply(const std::vector<double>& x, std::vector<double>& y) const = 0;

    /// Approximate inverse of sigma (4S + C) + tau M for the CG solves.
    virtual void precond_solve(double sigma, double tau, const std::vector<double>& b,
                               std::vector<double>& x) const {
        (void)sigma;
        (void)tau;
        mass_solve(b, x);
    }

    /// Smooth random field, unit rms, deterministic in the seed.
    virtual std::vector<double> random_smooth(std::uint64_t seed) const = 0;

    /// Lower bound estimate for the scalar curvature (for eigen shifts).
    virtual double min_curvature_estimate() const = 0;

    /// Identity of the metric this backend was built from; entropy results
    /// remember it so stale-result usage can be rejected.
    virtual const void* metric_tag() const = 0;
};

} // namespace nuplus
