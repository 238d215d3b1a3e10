// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "ulrn/tensor.hpp"

namespace ulrn {

/// One named trainable tensor with its gradient accumulator.
struct ParamEntry {
    std::string name;
    Tensor value;
    Tensor grad; // always the same shape as value
};

/// Ordered collection of named parameters. Insertion order is stable and
/// defines the serialization order of checkpoints.
class ParameterSet {
public:
    /// Adds a parameter with a zero gradient. Duplicate names are rejected.
    std::size_t add(std::string name, Tensor value);

    std::size_t size() const { return entries_.size(); }
    bool contains(const std::string& name) const { return index_.count(name) != 0; }

    ParamEntry& entry(std::size_t i) { return entries_[i]; }
    const ParamEntry& entry(std::size_t i) const { return entries_[i]; }

    std::size_t index_of(const std::string& name) const;
    ParamEntry& at(const std::string& name) { return entries_[index_of(name)]; }
    const ParamEntry& at(const std::string& name) const { return entries_[index_of(name)]; }

    void zero_grads();

    auto begin() { return entries_.begin(); }
    auto end() { return entries_.end(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

private:
    std::vector<ParamEntry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

} // namespace ulrn
