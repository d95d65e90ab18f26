#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "nuplus/core/errors.hpp"
#include "nuplus/geometry/chart.hpp"

namespace nuplus {

/// Packed index of the (i,j) entry of a symmetric n x n matrix, i <= j,
/// upper triangle enumerated row by row.
inline int sym_index(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
}

inline int sym_count(int n) { return n * (n + 1) / 2; }

namespace detail {
inline void check_same_chart(const Chart& a, const Chart& b) {
    if (!a.same_as(b)) throw UsageError("fields live on different charts");
}
} // namespace detail

/// One real sample per node.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(ChartPtr chart, double fill = 0.0)
        : chart_(std::move(chart)), v_(chart_->nodes(), fill) {}
    ScalarField(ChartPtr chart, std::vector<double> values)
        : chart_(std::move(chart)), v_(std::move(values)) {
        if (v_.size() != chart_->nodes()) throw UsageError("scalar field: size mismatch");
    }

    const ChartPtr& chart() const { return chart_; }
    std::size_t size() const { return v_.size(); }
    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }

private:
    ChartPtr chart_;
    std::vector<double> v_;
};

/// n real components per node, component-major storage.
class OneFormField {
public:
    OneFormField() = default;
    explicit OneFormField(ChartPtr chart)
        : chart_(std::move(chart)), data_(chart_->nodes() * chart_->dim(), 0.0) {}

    const ChartPtr& chart() const { return chart_; }
    int dim() const { return chart_->dim(); }
    std::size_t nodes() const { return chart_->nodes(); }

    std::span<double> comp(int a) { return {data_.data() + a * nodes(), nodes()}; }
    std::span<const double> comp(int a) const { return {data_.data() + a * nodes(), nodes()}; }
    double& at(int a, std::size_t i) { return data_[a * nodes() + i]; }
    double at(int a, std::size_t i) const { return data_[a * nodes() + i]; }

    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

private:
    ChartPtr chart_;
    std::vector<double> data_;
};

/// Symmetric 2-tensor: n(n+1)/2 packed components per node, component-major.
class SymTensorField {
public:
    SymTensorField() = default;
    explicit SymTensorField(ChartPtr chart)
        : chart_(std::move(chart)),
          data_(chart_->nodes() * sym_count(chart_->dim()), 0.0) {}

    const ChartPtr& chart() const { return chart_; }
    int dim() const { return chart_->dim(); }
    int comps() const { return sym_count(dim()); }
    std::size_t nodes() const { return chart_->nodes(); }

    std::span<double> comp(int c) { return {data_.data() + c * nodes(), nodes()}; }
    std::span<const double> comp(int c) const { return {data_.data() + c * nodes(), nodes()}; }
    double& at(int i, int j, std::size_t node) {
        return data_[sym_index(dim(), i, j) * nodes() + node];
    }
    double at(int i, int j, std::size_t node) const {
        return data_[sym_index(dim(), i, j) * nodes() + node];
    }

    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

private:
    ChartPtr chart_;
    std::vector<double> data_;
};

// small vector-space helpers shared by the solvers

inline void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

inline void scal(double a, std::vector<double>& x) {
    for (double& v : x) v *= a;
}

inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

} // namespace nuplus
