// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "ulrn/params.hpp"

namespace ulrn {

struct OptimSpec {
    enum class Kind { Sgd, Adam };
    Kind kind = Kind::Sgd;
    double lr = 0.01;
    double momentum = 0.0; // SGD only
    double beta1 = 0.9;    // Adam only
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Stateful first-order optimizer over one ParameterSet.
///
/// SGD: v <- momentum * v + grad; value <- value - lr * v.
/// Adam: bias-corrected first and second moment estimates.
class Optimizer {
public:
    Optimizer(OptimSpec spec, const ParameterSet& params);

    void step(ParameterSet& params);

    double lr() const { return spec_.lr; }
    void set_lr(double lr);

private:
    OptimSpec spec_;
    std::vector<Tensor> m_; // SGD velocity or Adam first moment
    std::vector<Tensor> v_; // Adam second moment
    std::int64_t t_ = 0;
};

} // namespace ulrn
