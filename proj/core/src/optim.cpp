// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#include "ulrn/optim.hpp"

#include <cmath>

#include "ulrn/error.hpp"

namespace ulrn {

Optimizer::Optimizer(OptimSpec spec, const ParameterSet& params) : spec_(spec) {
    if (spec_.lr <= 0.0) throw ConfigError("optimizer learning rate must be positive");
    m_.reserve(params.size());
    for (const auto& e : params) m_.emplace_back(e.value.shape());
    if (spec_.kind == OptimSpec::Kind::Adam) {
        v_.reserve(params.size());
        for (const auto& e : params) v_.emplace_back(e.value.shape());
    }
}

void Optimizer::set_lr(double lr) {
    if (lr <= 0.0) throw ConfigError("optimizer learning rate must be positive");
    spec_.lr = lr;
}

void Optimizer::step(ParameterSet& params) {
    if (params.size() != m_.size()) {
        throw ContractError("optimizer bound to a different parameter set");
    }
    if (spec_.kind == OptimSpec::Kind::Sgd) {
        for (std::size_t p = 0; p < params.size(); ++p) {
            auto& e = params.entry(p);
            Tensor& vel = m_[p];
            for (std::size_t i = 0; i < e.value.size(); ++i) {
                vel[i] = spec_.momentum * vel[i] + e.grad[i];
                e.value[i] -= spec_.lr * vel[i];
            }
        }
        return;
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(spec_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(spec_.beta2, static_cast<double>(t_));
    for (std::size_t p = 0; p < params.size(); ++p) {
        auto& e = params.entry(p);
        Tensor& m = m_[p];
        Tensor& v = v_[p];
        for (std::size_t i = 0; i < e.value.size(); ++i) {
            const double g = e.grad[i];
            m[i] = spec_.beta1 * m[i] + (1.0 - spec_.beta1) * g;
            v[i] = spec_.beta2 * v[i] + (1.0 - spec_.beta2) * g * g;
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            e.value[i] -= spec_.lr * mhat / (std::sqrt(vhat) + spec_.eps);
        }
    }
}

} // namespace ulrn
