// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#include "ulrn/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace ulrn {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return shape.empty() ? 0 : n;
}

void check_positive_dims(const std::vector<std::size_t>& shape) {
    if (shape.empty()) throw DimensionError("tensor shape must have at least one dimension");
    for (std::size_t d : shape) {
        if (d == 0) throw DimensionError("tensor shape has a zero dimension: " + shape_str(shape));
    }
}

void check_same_shape(const char* op, const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) {
        throw DimensionError(std::string(op) + ": shapes disagree: " + a.shape_str() + " vs " +
                             b.shape_str());
    }
}

template <typename F>
Tensor map(const Tensor& a, F f) {
    Tensor out(a.shape());
    const double* p = a.data();
    double* q = out.data();
    for (std::size_t i = 0; i < a.size(); ++i) q[i] = f(p[i]);
    return out;
}

} // namespace

std::string shape_str(const std::vector<std::size_t>& shape) {
    std::string s;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += 'x';
        s += std::to_string(shape[i]);
    }
    return s;
}

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
    check_positive_dims(shape_);
    data_.assign(shape_product(shape_), 0.0);
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    check_positive_dims(shape_);
    if (data_.size() != shape_product(shape_)) {
        throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                             " does not match shape " + ulrn::shape_str(shape_));
    }
}

Tensor Tensor::full(std::vector<std::size_t> shape, double value) {
    Tensor t(std::move(shape));
    std::fill(t.data_.begin(), t.data_.end(), value);
    return t;
}

Tensor Tensor::scalar(double value) { return Tensor({1}, {value}); }

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> data) {
    return Tensor({rows, cols}, std::move(data));
}

std::size_t Tensor::rows() const {
    if (shape_.size() != 2) throw DimensionError("expected a rank-2 tensor, got " + shape_str());
    return shape_[0];
}

std::size_t Tensor::cols() const {
    if (shape_.size() != 2) throw DimensionError("expected a rank-2 tensor, got " + shape_str());
    return shape_[1];
}

double& Tensor::at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
double Tensor::at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

std::string Tensor::shape_str() const { return ulrn::shape_str(shape_); }

bool Tensor::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    const std::size_t m = a.rows(), k = a.cols();
    const std::size_t k2 = b.rows(), n = b.cols();
    if (k != k2) {
        throw DimensionError("matmul: inner dimensions disagree: " + a.shape_str() + " vs " +
                             b.shape_str());
    }
    Tensor out({m, n});
    const double* pa = a.data();
    const double* pb = b.data();
    double* pc = out.data();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            const double av = pa[i * k + p];
            if (av == 0.0) continue;
            const double* brow = pb + p * n;
            double* crow = pc + i * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
    return out;
}

Tensor transpose(const Tensor& a) {
    const std::size_t m = a.rows(), n = a.cols();
    Tensor out({n, m});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out[j * m + i] = a[i * n + j];
    return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
    check_same_shape("add", a, b);
    Tensor out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Tensor add_bias_row(const Tensor& a, const Tensor& bias) {
    const std::size_t m = a.rows(), n = a.cols();
    if (bias.rows() != 1 || bias.cols() != n) {
        throw DimensionError("add_bias_row: bias " + bias.shape_str() + " does not broadcast over " +
                             a.shape_str());
    }
    Tensor out(a.shape());
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i * n + j] = a[i * n + j] + bias[j];
    return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
    check_same_shape("sub", a, b);
    Tensor out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
    check_same_shape("mul", a, b);
    Tensor out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

Tensor affine(const Tensor& a, double scale, double shift) {
    return map(a, [=](double v) { return scale * v + shift; });
}

Tensor relu(const Tensor& a) {
    return map(a, [](double v) { return v > 0.0 ? v : 0.0; });
}

Tensor tanh(const Tensor& a) {
    return map(a, [](double v) { return std::tanh(v); });
}

Tensor exp(const Tensor& a) {
    return map(a, [](double v) { return std::exp(v); });
}

Tensor log(const Tensor& a) {
    return map(a, [](double v) { return std::log(v); });
}

Tensor xlogx(const Tensor& a) {
    return map(a, [](double v) { return v == 0.0 ? 0.0 : v * std::log(v); });
}

Tensor log_softmax(const Tensor& logits) {
    const std::size_t m = logits.rows(), k = logits.cols();
    if (k < 2) throw DimensionError("log_softmax: needs at least 2 classes, got " + logits.shape_str());
    Tensor out(logits.shape());
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = logits.data() + i * k;
        double mx = row[0];
        for (std::size_t j = 1; j < k; ++j) mx = std::max(mx, row[j]);
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += std::exp(row[j] - mx);
        const double lse = mx + std::log(s);
        for (std::size_t j = 0; j < k; ++j) out[i * k + j] = row[j] - lse;
    }
    return out;
}

Tensor softmax(const Tensor& logits) { return exp(log_softmax(logits)); }

double sum(const Tensor& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i];
    return s;
}

Tensor mean_rows(const Tensor& a) {
    const std::size_t m = a.rows(), n = a.cols();
    Tensor out({1, n});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out[j] += a[i * n + j];
    for (std::size_t j = 0; j < n; ++j) out[j] /= static_cast<double>(m);
    return out;
}

std::vector<std::size_t> argmax_rows(const Tensor& a) {
    const std::size_t m = a.rows(), n = a.cols();
    std::vector<std::size_t> idx(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = a.data() + i * n;
        std::size_t best = 0;
        for (std::size_t j = 1; j < n; ++j) {
            if (row[j] > row[best]) best = j;
        }
        idx[i] = best;
    }
    return idx;
}

Tensor take_rows(const Tensor& a, const std::vector<std::size_t>& rows) {
    const std::size_t n = a.cols();
    if (rows.empty()) throw DimensionError("take_rows: empty row selection");
    Tensor out({rows.size(), n});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double* src = a.data() + rows[i] * n;
        std::copy(src, src + n, out.data() + i * n);
    }
    return out;
}

} // namespace ulrn
