// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "ulrn/labels.hpp"
#include "ulrn/tensor.hpp"

namespace ulrn {

enum class SplitTag { Train, Test };

struct NormStats {
    std::vector<double> mean;
    std::vector<double> std_dev;
};

/// Labeled feature matrix: x is N x d, y holds class indices.
struct Dataset {
    Tensor x;
    std::vector<std::size_t> y;
    SplitTag tag = SplitTag::Train;
    /// Present when normalization has been applied; always the train stats.
    NormStats stats;
    bool normalized = false;

    std::size_t size() const { return y.size(); }
    std::size_t dim() const { return x.cols(); }
    std::size_t num_classes() const;
    void min_max(double& lo, double& hi) const;
};

/// Seeded Gaussian-mixture spec. Class means default to a circle of the
/// given radius in the first two feature dimensions.
struct BlobSpec {
    std::size_t num_classes = 5;
    std::size_t dim = 2;
    std::vector<std::vector<double>> means; // empty -> circle layout
    double sigma = 0.5;
    double radius = 3.0;
    std::size_t train_per_class = 400;
    std::size_t test_per_class = 200;
    std::uint64_t seed = 1;

    void validate() const;
    std::vector<std::vector<double>> resolved_means() const;
};

struct DatasetPair {
    Dataset train;
    Dataset test;
};

DatasetPair make_blobs(const BlobSpec& spec);

/// Big-endian IDX ingestion (images magic 0x00000803, labels 0x00000801,
/// both u8 payloads); pixels scale to [0,1] and flatten row-major.
Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path, SplitTag tag = SplitTag::Train);

/// Subset with labels preserved; an empty result is an error.
Dataset restrict(const Dataset& d, const std::vector<std::size_t>& classes);

/// Z-scores both splits with statistics computed on train only.
void normalize_pair(Dataset& train, Dataset& test);

} // namespace ulrn
