// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "ulrn/labels.hpp"
#include "ulrn/tensor.hpp"

namespace ulrn {

enum class FilterKind { None, PreFilter, BlockF };

struct FilterConfig {
    FilterKind kind = FilterKind::None;
    double delta = 0.01; // prefilter threshold, in (0, 1]

    void validate() const;
};

/// The threshold rule scales with class count: 0.01 at K=10, 0.001 at K=100.
double default_delta(std::size_t num_classes);

struct FilterOutcome {
    std::vector<char> keep_mask; // one flag per sample
    std::size_t kept_count = 0;
    std::size_t dropped_count = 0;

    std::vector<std::size_t> kept_rows() const;
};

/// Keeps a sample iff every forgetting-class teacher probability is below
/// delta. An empty forgetting set keeps everything.
FilterOutcome prefilter(const Tensor& teacher_probs, const LabelSplit& split, double delta);

/// Keeps a sample iff the teacher argmax is not a forgetting class; argmax
/// ties break to the lowest class index.
FilterOutcome blockf(const Tensor& teacher_probs, const LabelSplit& split);

/// Dispatch on FilterConfig; FilterKind::None keeps every sample.
FilterOutcome apply_filter(const Tensor& teacher_probs, const LabelSplit& split,
                           const FilterConfig& config);

} // namespace ulrn
