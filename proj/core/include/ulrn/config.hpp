// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ulrn/dataset.hpp"
#include "ulrn/engine.hpp"
#include "ulrn/eval.hpp"

namespace ulrn {

/// Experiment configuration file: flat `key = value` lines, UTF-8, `#`
/// comments. Unknown keys are errors so typos never pass silently, and any
/// referenced file must exist at load time.
class ExperimentConfig {
public:
    static ExperimentConfig load(const std::filesystem::path& path);
    static ExperimentConfig from_string(const std::string& text, const std::string& origin);

    /// Applies a `key=value` override (CLI flags) before anything is derived.
    void set(const std::string& key, const std::string& value);

    /// FNV-1a over the canonicalized (sorted `key=value` lines) effective
    /// config; names cached gold checkpoints.
    std::uint64_t hash() const;

    // derived, typed views
    DatasetPair load_data() const;
    ClassifierSpec classifier_spec(std::size_t input_dim, std::size_t num_classes) const;
    GeneratorSpec generator_spec(std::size_t output_dim, double data_lo, double data_hi) const;
    SupConfig teacher_config(std::uint64_t seed) const;
    TrainConfig unlearn_config(std::uint64_t seed, std::size_t num_classes) const;
    RelearnConfig relearn_config() const;
    MiaIIConfig mia_config(std::uint64_t seed) const;

    std::vector<std::size_t> forget_classes() const;
    std::vector<std::uint64_t> seeds() const;
    /// output_dir from the file, overridable by the ULRN_OUT environment variable.
    std::filesystem::path output_dir() const;
    std::string data_kind() const;

    std::vector<std::string> sweep_methods() const;
    /// Semicolon-separated groups of comma-separated class indices.
    std::vector<std::vector<std::size_t>> sweep_forget_groups() const;

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::string& raw(const std::string& key) const;

private:
    ExperimentConfig() = default;
    void validate_keys() const;
    void validate_paths() const;

    std::string get(const std::string& key, const std::string& fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    double get_f64(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::size_t> get_size_list(const std::string& key,
                                           const std::vector<std::size_t>& fallback) const;

    std::map<std::string, std::string> values_;
    std::string origin_;
};

} // namespace ulrn
