// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#include "ulrn/filters.hpp"

namespace ulrn {

void FilterConfig::validate() const {
    if (kind == FilterKind::PreFilter && !(delta > 0.0 && delta <= 1.0)) {
        throw ConfigError("prefilter delta must be in (0, 1]");
    }
}

double default_delta(std::size_t num_classes) {
    return 0.1 / static_cast<double>(num_classes);
}

std::vector<std::size_t> FilterOutcome::kept_rows() const {
    std::vector<std::size_t> rows;
    rows.reserve(kept_count);
    for (std::size_t i = 0; i < keep_mask.size(); ++i) {
        if (keep_mask[i]) rows.push_back(i);
    }
    return rows;
}

namespace {

FilterOutcome from_mask(std::vector<char> mask) {
    FilterOutcome out;
    out.keep_mask = std::move(mask);
    for (char c : out.keep_mask) out.kept_count += c ? 1 : 0;
    out.dropped_count = out.keep_mask.size() - out.kept_count;
    return out;
}

} // namespace

FilterOutcome prefilter(const Tensor& teacher_probs, const LabelSplit& split, double delta) {
    const std::size_t m = teacher_probs.rows(), k = teacher_probs.cols();
    if (k != split.num_classes()) {
        throw DimensionError("prefilter: " + std::to_string(k) +
                             " columns vs K=" + std::to_string(split.num_classes()));
    }
    std::vector<char> mask(m, 1);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t f : split.forget()) {
            if (!(teacher_probs[i * k + f] < delta)) {
                mask[i] = 0;
                break;
            }
        }
    }
    return from_mask(std::move(mask));
}

FilterOutcome blockf(const Tensor& teacher_probs, const LabelSplit& split) {
    if (teacher_probs.cols() != split.num_classes()) {
        throw DimensionError("blockf: " + std::to_string(teacher_probs.cols()) +
                             " columns vs K=" + std::to_string(split.num_classes()));
    }
    const auto arg = argmax_rows(teacher_probs);
    std::vector<char> mask(arg.size(), 1);
    for (std::size_t i = 0; i < arg.size(); ++i) {
        if (split.is_forget(arg[i])) mask[i] = 0;
    }
    return from_mask(std::move(mask));
}

FilterOutcome apply_filter(const Tensor& teacher_probs, const LabelSplit& split,
                           const FilterConfig& config) {
    config.validate();
    switch (config.kind) {
    case FilterKind::PreFilter:
        return prefilter(teacher_probs, split, config.delta);
    case FilterKind::BlockF:
        return blockf(teacher_probs, split);
    case FilterKind::None:
        break;
    }
    return from_mask(std::vector<char>(teacher_probs.rows(), 1));
}

} // namespace ulrn
