#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nuplus/geometry/spectral.hpp"

namespace nuplus {

struct GridSpec {
    int dim = 2;
    std::vector<int> res;       // per axis, even, >= 8
    std::vector<double> period; // per axis, > 0
};

/// Periodic coordinate torus: the discrete model every grid field lives on.
/// Immutable; shared between all fields built on it.
class Chart {
public:
    static std::shared_ptr<const Chart> build(const GridSpec& spec);

    int dim() const { return spec_.dim; }
    const std::vector<int>& res() const { return spec_.res; }
    const std::vector<double>& period() const { return spec_.period; }
    std::size_t nodes() const { return nodes_; }

    const Spectral& spectral() const { return *spectral_; }

    /// Coordinate of a node along an axis.
    double coord(int axis, std::size_t node) const;

    /// Flat quadrature weight per node (product of period/res).
    double cell_weight() const { return cell_weight_; }

    /// Product of the periods == quadrature of 1 in flat coordinates.
    double coordinate_volume() const;

    bool same_as(const Chart& other) const { return this == &other; }

private:
    explicit Chart(GridSpec spec);

    GridSpec spec_;
    std::size_t nodes_ = 0;
    double cell_weight_ = 0.0;
    std::vector<std::size_t> stride_;
    std::unique_ptr<Spectral> spectral_;
};

using ChartPtr = std::shared_ptr<const Chart>;

} // namespace nuplus
