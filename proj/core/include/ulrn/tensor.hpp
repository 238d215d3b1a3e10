// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "ulrn/error.hpp"

namespace ulrn {

/// Dense n-dimensional array of f64 values in row-major order.
///
/// The data length always equals the product of the shape. Most of the
/// library works with rank-2 tensors (batch dimension first); rank-1
/// tensors of size one serve as scalars.
class Tensor {
public:
    Tensor() = default;

    /// Zero-filled tensor of the given shape.
    explicit Tensor(std::vector<std::size_t> shape);

    Tensor(std::vector<std::size_t> shape, std::vector<double> data);

    static Tensor zeros(std::vector<std::size_t> shape) { return Tensor(std::move(shape)); }
    static Tensor full(std::vector<std::size_t> shape, double value);
    static Tensor scalar(double value);
    static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    /// Rank-2 accessors; throw DimensionError when the tensor is not a matrix.
    std::size_t rows() const;
    std::size_t cols() const;

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    double& at(std::size_t r, std::size_t c);
    double at(std::size_t r, std::size_t c) const;

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
    std::string shape_str() const;

    bool all_finite() const;

private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

/// Formats a shape as "MxN" for error messages.
std::string shape_str(const std::vector<std::size_t>& shape);

// Value-level tensor math. These back both the autodiff graph and the
// plain inference paths, so there is a single implementation of each rule.

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

Tensor add(const Tensor& a, const Tensor& b);
/// Adds a 1xN bias row to every row of an MxN matrix.
Tensor add_bias_row(const Tensor& a, const Tensor& bias);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor affine(const Tensor& a, double scale, double shift);
Tensor relu(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor exp(const Tensor& a);
Tensor log(const Tensor& a);
/// v * ln(v) with 0 * ln(0) taken as 0 by continuity.
Tensor xlogx(const Tensor& a);

/// Row-wise log-softmax with per-row max subtraction, safe for logits of
/// magnitude 1e3 and beyond.
Tensor log_softmax(const Tensor& logits);
Tensor softmax(const Tensor& logits);

double sum(const Tensor& a);
/// MxN -> 1xN column means.
Tensor mean_rows(const Tensor& a);
/// Per-row argmax; ties break to the lowest index.
std::vector<std::size_t> argmax_rows(const Tensor& a);

/// Copies the selected rows of a rank-2 tensor, preserving order.
Tensor take_rows(const Tensor& a, const std::vector<std::size_t>& rows);

} // namespace ulrn
