#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace nuplus {

/// Execution policy for the per-node kernels. Every kernel has identical
/// serial and OpenMP code paths; results are bitwise equal because shared
/// reductions always go through pairwise_sum in a fixed order.
enum class Exec : std::uint8_t { serial, parallel };

Exec& default_exec();

template <class F>
inline void for_nodes(std::size_t count, Exec exec, F&& body) {
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i)
            body(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < count; ++i) body(i);
    }
}

/// Fixed-order pairwise summation. Deterministic for any thread count (the
/// summand buffer is filled in parallel, reduced serially) and accurate to
/// O(log n) ulps.
double pairwise_sum(const double* x, std::size_t n);

inline double pairwise_sum(const std::vector<double>& x) {
    return pairwise_sum(x.data(), x.size());
}

/// max_i |x_i|; order independent.
double sup_abs(const double* x, std::size_t n, Exec exec);

inline double sup_abs(const std::vector<double>& x, Exec exec = default_exec()) {
    return sup_abs(x.data(), x.size(), exec);
}

} // namespace nuplus
