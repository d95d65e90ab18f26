#include "nuplus/geometry/chart.hpp"

#include <string>

#include "nuplus/core/errors.hpp"

namespace nuplus {

Chart::Chart(GridSpec spec) : spec_(std::move(spec)) {
    nodes_ = 1;
    cell_weight_ = 1.0;
    for (int a = 0; a < spec_.dim; ++a) {
        nodes_ *= static_cast<std::size_t>(spec_.res[a]);
        cell_weight_ *= spec_.period[a] / spec_.res[a];
    }
    stride_.assign(spec_.dim, 1);
    for (int a = spec_.dim - 2; a >= 0; --a)
        stride_[a] = stride_[a + 1] * static_cast<std::size_t>(spec_.res[a + 1]);
    spectral_ = std::make_unique<Spectral>(spec_.res, spec_.period);
}

std::shared_ptr<const Chart> Chart::build(const GridSpec& spec) {
    if (spec.dim < 2) throw ConfigError("chart: dimension must be >= 2");
    if (static_cast<int>(spec.res.size()) != spec.dim ||
        static_cast<int>(spec.period.size()) != spec.dim)
        throw ConfigError("chart: resolution/period rank mismatch");
    for (int a = 0; a < spec.dim; ++a) {
        if (spec.res[a] < 8 || spec.res[a] % 2 != 0)
            throw ConfigError("chart: axis " + std::to_string(a) +
                              " resolution must be even and >= 8, got " +
                              std::to_string(spec.res[a]));
        if (!(spec.period[a] > 0.0))
            throw ConfigError("chart: axis " + std::to_string(a) + " period must be > 0");
    }
    return std::shared_ptr<const Chart>(new Chart(spec));
}

double Chart::coord(int axis, std::size_t node) const {
    const std::size_t i = (node / stride_[axis]) % static_cast<std::size_t>(spec_.res[axis]);
    return spec_.period[axis] * static_cast<double>(i) / spec_.res[axis];
}

double Chart::coordinate_volume() const {
    double v = 1.0;
    for (double p : spec_.period) v *= p;
    return v;
}

} // namespace nuplus
