#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

namespace nuplus {

/// Trigonometric differentiation on a periodic tensor-product grid.
///
/// All transforms run through FFTW (r2c/c2r, FFTW_ESTIMATE so plan choice
/// is deterministic) on internal buffers guarded by a mutex; callers hand in
/// plain arrays. First derivatives zero the Nyquist mode so results stay
/// real and antisymmetric; dealias() applies the 2/3 truncation rule.
class Spectral {
public:
    Spectral(std::vector<int> res, std::vector<double> period);
    ~Spectral();

    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    int dim() const { return static_cast<int>(res_.size()); }
    std::size_t nodes() const { return nodes_; }

    /// d/dx_axis, spectral accuracy.
    void derivative(const double* in, int axis, double* out) const;
    /// d^2/(dx_a dx_b). For a == b keeps the Nyquist mode (-k^2 is even).
    void derivative2(const double* in, int a, int b, double* out) const;

    /// Zero all modes with |m_axis| > res_axis/3 on any axis.
    void dealias(double* f) const;

    /// Solve (a (-Lap0) + b) x = in with the flat Laplacian. When b == 0 the
    /// mean mode is zeroed (solution fixed to zero mean).
    void helmholtz_solve(const double* in, double a, double b, double* out) const;

    /// Fraction of spectral energy (excluding the mean) beyond the 2/3 band.
    double band_tail_fraction(const double* f) const;

    /// Random real field with iid normal coefficients on modes
    /// |m_axis| <= max_mode, unit rms, deterministic in the seed.
    std::vector<double> random_band_limited(std::uint64_t seed, int max_mode) const;

private:
    struct Plans;

    void forward(const double* in) const;  // fills cbuf_
    void backward(double* out) const;      // consumes cbuf_, normalizes

    // signed integer mode index of position i along an axis
    int mode_of(int axis, int i) const;

    std::vector<int> res_;
    std::vector<double> period_;
    std::size_t nodes_ = 0;
    std::size_t cmodes_ = 0; // complex count, last axis halved

    std::unique_ptr<Plans> plans_;
    mutable std::mutex mutex_;
    mutable double* rbuf_ = nullptr;
    mutable std::complex<double>* cbuf_ = nullptr;
};

} // namespace nuplus
