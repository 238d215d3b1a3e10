// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "ulrn/error.hpp"

namespace ulrn {

/// Partition of the class indices {0..K-1} into forgetting and retaining
/// sets. The retaining set is never empty: unlearning every class at once
/// is rejected at construction.
class LabelSplit {
public:
    LabelSplit(std::size_t num_classes, std::vector<std::size_t> forget);

    std::size_t num_classes() const { return num_classes_; }
    bool is_forget(std::size_t k) const { return mask_[k] != 0; }

    const std::vector<std::size_t>& forget() const { return forget_; }
    const std::vector<std::size_t>& retain() const { return retain_; }
    std::size_t forget_count() const { return forget_.size(); }
    std::size_t retain_count() const { return retain_.size(); }

private:
    std::size_t num_classes_;
    std::vector<std::size_t> forget_; // sorted, deduplicated
    std::vector<std::size_t> retain_;
    std::vector<char> mask_;
};

} // namespace ulrn
