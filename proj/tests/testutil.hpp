// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ulrn/graph.hpp"
#include "ulrn/losses.hpp"

namespace ulrn::test {

/// Central finite differences, the independent oracle for every analytic
/// gradient in the suite. The builder must construct the loss from the
/// parameter set's current values each time it is called.
struct GradCheckResult {
    double max_rel_err = 0.0;
    std::string worst; // "name[i]" of the worst component
    std::size_t checked = 0;
};

inline GradCheckResult gradcheck(ParameterSet& params,
                                 const std::function<LossValue(Graph&)>& build,
                                 double h = 1e-5, double abs_floor = 1e-6) {
    params.zero_grads();
    std::vector<std::vector<double>> analytic;
    {
        Graph g;
        LossValue loss = build(g);
        g.backward(loss.node);
        for (std::size_t p = 0; p < params.size(); ++p) {
            analytic.push_back(params.entry(p).grad.values());
        }
    }
    auto eval = [&]() {
        Graph g;
        return build(g).value;
    };
    GradCheckResult result;
    for (std::size_t p = 0; p < params.size(); ++p) {
        auto& entry = params.entry(p);
        for (std::size_t i = 0; i < entry.value.size(); ++i) {
            const double keep = entry.value[i];
            entry.value[i] = keep + h;
            const double up = eval();
            entry.value[i] = keep - h;
            const double down = eval();
            entry.value[i] = keep;
            const double fd = (up - down) / (2.0 * h);
            const double a = analytic[p][i];
            const double denom = std::max({std::abs(a), std::abs(fd), abs_floor});
            const double rel = std::abs(a - fd) / denom;
            if (rel > result.max_rel_err) {
                result.max_rel_err = rel;
                result.worst = entry.name + "[" + std::to_string(i) + "]";
            }
            ++result.checked;
        }
    }
    return result;
}

} // namespace ulrn::test
