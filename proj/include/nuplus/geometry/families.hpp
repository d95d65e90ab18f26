#pragma once

#include <cstdint>

#include "nuplus/geometry/fields.hpp"

namespace nuplus {

/// Identity metric, optionally scaled per axis: diag(d_0, ..., d_{n-1}).
SymTensorField flat_metric(const ChartPtr& chart, const std::vector<double>& diag = {});

/// Conformally flat metric e^{2u} delta.
SymTensorField conformal_metric(const ChartPtr& chart, const ScalarField& u);

/// u = amp * prod_a sin(2 pi x_a / L_a), the standard test bump.
ScalarField sine_bump(const ChartPtr& chart, double amp);

/// Random band-limited symmetric 2-tensor, unit-rms components,
/// deterministic in the seed.
SymTensorField random_sym_tensor(const ChartPtr& chart, std::uint64_t seed, int max_mode,
                                 double amp = 1.0);

/// Random band-limited one-form.
OneFormField random_one_form(const ChartPtr& chart, std::uint64_t seed, int max_mode,
                             double amp = 1.0);

/// Random band-limited scalar.
ScalarField random_scalar(const ChartPtr& chart, std::uint64_t seed, int max_mode,
                          double amp = 1.0);

SymTensorField add(const SymTensorField& a, double s, const SymTensorField& b);
SymTensorField scale_tensor(double s, const SymTensorField& a);

} // namespace nuplus
