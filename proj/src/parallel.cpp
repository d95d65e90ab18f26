#include "nuplus/core/parallel.hpp"

#include <algorithm>

namespace nuplus {

Exec& default_exec() {
    static Exec mode = Exec::parallel;
    return mode;
}

namespace {

double pairwise_block(const double* x, std::size_t n) {
    if (n <= 32) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_block(x, half) + pairwise_block(x + half, n - half);
}

} // namespace

double pairwise_sum(const double* x, std::size_t n) { return pairwise_block(x, n); }

double sup_abs(const double* x, std::size_t n, Exec exec) {
    double m = 0.0;
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static) reduction(max : m)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
            m = std::max(m, std::abs(x[i]));
    } else {
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
    }
    return m;
}

} // namespace nuplus
