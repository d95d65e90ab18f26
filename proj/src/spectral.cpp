#include "nuplus/geometry/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "nuplus/core/errors.hpp"

namespace nuplus {

struct Spectral::Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

Spectral::Spectral(std::vector<int> res, std::vector<double> period)
    : res_(std::move(res)), period_(std::move(period)), plans_(new Plans) {
    if (res_.empty() || res_.size() != period_.size())
        throw ConfigError("spectral: resolution/period rank mismatch");
    nodes_ = 1;
    for (int r : res_) nodes_ *= static_cast<std::size_t>(r);
    cmodes_ = nodes_ / static_cast<std::size_t>(res_.back()) *
              static_cast<std::size_t>(res_.back() / 2 + 1);

    rbuf_ = fftw_alloc_real(nodes_);
    cbuf_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(cmodes_));

    // FFTW_ESTIMATE keeps plan selection (hence roundoff) reproducible.
    plans_->fwd = fftw_plan_dft_r2c(dim(), res_.data(), rbuf_,
                                    reinterpret_cast<fftw_complex*>(cbuf_), FFTW_ESTIMATE);
    plans_->bwd = fftw_plan_dft_c2r(dim(), res_.data(),
                                    reinterpret_cast<fftw_complex*>(cbuf_), rbuf_,
                                    FFTW_ESTIMATE);
    if (!plans_->fwd || !plans_->bwd) throw ConfigError("spectral: FFTW plan failed");
}

Spectral::~Spectral() {
    if (plans_->fwd) fftw_destroy_plan(plans_->fwd);
    if (plans_->bwd) fftw_destroy_plan(plans_->bwd);
    fftw_free(rbuf_);
    fftw_free(cbuf_);
}

int Spectral::mode_of(int axis, int i) const {
    const int n = res_[axis];
    return i <= n / 2 ? i : i - n;
}

void Spectral::forward(const double* in) const {
    std::memcpy(rbuf_, in, nodes_ * sizeof(double));
    fftw_execute(plans_->fwd);
}

void Spectral::backward(double* out) const {
    fftw_execute(plans_->bwd);
    const double scale = 1.0 / static_cast<double>(nodes_);
    for (std::size_t i = 0; i < nodes_; ++i) out[i] = rbuf_[i] * scale;
}

namespace {

// Iterate complex-layout multi-indices; calls f(flat, idx).
template <class F>
void for_modes(const std::vector<int>& res, F&& f) {
    const int n = static_cast<int>(res.size());
    std::vector<int> idx(n, 0);
    std::vector<int> lim(res.begin(), res.end());
    lim[n - 1] = res[n - 1] / 2 + 1;
    std::size_t flat = 0;
    while (true) {
        f(flat, idx);
        ++flat;
        int a = n - 1;
        while (a >= 0 && ++idx[a] == lim[a]) idx[a--] = 0;
        if (a < 0) break;
    }
}

} // namespace

void Spectral::derivative(const double* in, int axis, double* out) const {
    std::lock_guard<std::mutex> lock(mutex_);
    forward(in);
    const double two_pi = 2.0 * std::numbers::pi;
    for_modes(res_, [&](std::size_t flat, const std::vector<int>& idx) {
        const int m = mode_of(axis, idx[axis]);
        if (2 * std::abs(m) == res_[axis]) { // Nyquist: odd derivative is zeroed
            cbuf_[flat] = 0.0;
            return;
        }
        const double k = two_pi * m / period_[axis];
        cbuf_[flat] *= std::complex<double>(0.0, k);
    });
    backward(out);
}

void Spectral::derivative2(const double* in, int a, int b, double* out) const {
    std::lock_guard<std::mutex> lock(mutex_);
    forward(in);
    const double two_pi = 2.0 * std::numbers::pi;
    for_modes(res_, [&](std::size_t flat, const std::vector<int>& idx) {
        const int ma = mode_of(a, idx[a]);
        const int mb = mode_of(b, idx[b]);
        if (a != b && (2 * std::abs(ma) == res_[a] || 2 * std::abs(mb) == res_[b])) {
            cbuf_[flat] = 0.0;
            return;
        }
        const double ka = two_pi * ma / period_[a];
        const double kb = two_pi * mb / period_[b];
        cbuf_[flat] *= -ka * kb;
    });
    backward(out);
}

void Spectral::dealias(double* f) const {
    std::lock_guard<std::mutex> lock(mutex_);
    forward(f);
    for_modes(res_, [&](std::size_t flat, const std::vector<int>& idx) {
        for (int a = 0; a < dim(); ++a) {
            if (3 * std::abs(mode_of(a, idx[a])) > res_[a]) {
                cbuf_[flat] = 0.0;
                return;
            }
        }
    });
    backward(f);
}

void Spectral::helmholtz_solve(const double* in, double a, double b, double* out) const {
    std::lock_guard<std::mutex> lock(mutex_);
    forward(in);
    const double two_pi = 2.0 * std::numbers::pi;
    for_modes(res_, [&](std::size_t flat, const std::vector<int>& idx) {
        double k2 = 0.0;
        for (int ax = 0; ax < dim(); ++ax) {
            const double k = two_pi * mode_of(ax, idx[ax]) / period_[ax];
            k2 += k * k;
        }
        const double denom = a * k2 + b;
        cbuf_[flat] = denom != 0.0 ? cbuf_[flat] / denom : 0.0;
    });
    backward(out);
}

double Spectral::band_tail_fraction(const double* f) const {
    std::lock_guard<std::mutex> lock(mutex_);
    forward(f);
    double tail = 0.0, total = 0.0;
    for_modes(res_, [&](std::size_t flat, const std::vector<int>& idx) {
        bool mean = true, outside = false;
        // r2c stores half the spectrum; interior last-axis modes count twice
        const int ml = idx[dim() - 1];
        double mult = (ml == 0 || 2 * ml == res_[dim() - 1]) ? 1.0 : 2.0;
        for (int a = 0; a < dim(); ++a) {
            const int m = mode_of(a, idx[a]);
            if (m != 0) mean = false;
            if (3 * std::abs(m) > res_[a]) outside = true;
        }
        if (mean) return;
        const double e = mult * std::norm(cbuf_[flat]);
        total += e;
        if (outside) tail += e;
    });
    return total > 0.0 ? tail / total : 0.0;
}

std::vector<double> Spectral::random_band_limited(std::uint64_t seed, int max_mode) const {
    // Build the field in physical space from explicit cosine/sine modes so the
    // result is independent of FFT layout and exactly band-limited.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = dim();

    struct Mode {
        std::vector<int> m;
        double ca, sa;
    };
    std::vector<Mode> modes;
    std::vector<int> m(n, -max_mode);
    while (true) {
        bool all_zero = true;
        for (int a = 0; a < n; ++a)
            if (m[a] != 0) all_zero = false;
        // keep one representative of each +-m pair, skip the mean
        bool keep = !all_zero;
        for (int a = 0; a < n && keep; ++a) {
            if (m[a] > 0) break;
            if (m[a] < 0) keep = false;
        }
        if (keep) modes.push_back({m, gauss(rng), gauss(rng)});
        int a = n - 1;
        while (a >= 0 && ++m[a] > max_mode) m[a--] = -max_mode;
        if (a < 0) break;
    }

    std::vector<double> f(nodes_, 0.0);
    std::vector<double> x(n);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t node = 0; node < nodes_; ++node) {
        std::size_t rem = node;
        for (int a = n - 1; a >= 0; --a) {
            const int i = static_cast<int>(rem % res_[a]);
            rem /= res_[a];
            x[a] = two_pi * i / res_[a]; // phase, period-independent
        }
        double v = 0.0;
        for (const Mode& mo : modes) {
            double phase = 0.0;
            for (int a = 0; a < n; ++a) phase += mo.m[a] * x[a];
            v += mo.ca * std::cos(phase) + mo.sa * std::sin(phase);
        }
        f[node] = v;
    }
    // unit rms
    double ss = 0.0;
    for (double v : f) ss += v * v;
    const double rms = std::sqrt(ss / static_cast<double>(nodes_));
    if (rms > 0)
        for (double& v : f) v /= rms;
    return f;
}

} // namespace nuplus
