// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#include "ulrn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>

#include "ulrn/rng.hpp"

namespace ulrn {

std::size_t Dataset::num_classes() const {
    std::size_t k = 0;
    for (std::size_t label : y) k = std::max(k, label + 1);
    return k;
}

void Dataset::min_max(double& lo, double& hi) const {
    lo = x[0];
    hi = x[0];
    for (std::size_t i = 0; i < x.size(); ++i) {
        lo = std::min(lo, x[i]);
        hi = std::max(hi, x[i]);
    }
}

void BlobSpec::validate() const {
    if (num_classes < 2) throw ConfigError("blobs need at least 2 classes");
    if (dim < 1) throw ConfigError("blobs need at least 1 feature");
    if (!(sigma >= 0.0)) throw ConfigError("blob sigma must be nonnegative");
    if (train_per_class < 1 || test_per_class < 1) {
        throw ConfigError("blobs need at least 1 sample per class and split");
    }
    if (!means.empty()) {
        if (means.size() != num_classes) throw ConfigError("one mean per class required");
        for (const auto& m : means) {
            if (m.size() != dim) throw ConfigError("blob mean dimension mismatch");
        }
    }
}

std::vector<std::vector<double>> BlobSpec::resolved_means() const {
    if (!means.empty()) return means;
    std::vector<std::vector<double>> out(num_classes, std::vector<double>(dim, 0.0));
    for (std::size_t c = 0; c < num_classes; ++c) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(c) /
                             static_cast<double>(num_classes);
        out[c][0] = radius * std::cos(angle);
        if (dim > 1) out[c][1] = radius * std::sin(angle);
    }
    return out;
}

namespace {

Dataset sample_blobs(const BlobSpec& spec, const std::vector<std::vector<double>>& means,
                     std::size_t per_class, SplitTag tag, Rng& rng) {
    const std::size_t n = per_class * spec.num_classes;
    Dataset d;
    d.tag = tag;
    d.x = Tensor({n, spec.dim});
    d.y.resize(n);
    std::size_t row = 0;
    for (std::size_t c = 0; c < spec.num_classes; ++c) {
        for (std::size_t i = 0; i < per_class; ++i, ++row) {
            for (std::size_t j = 0; j < spec.dim; ++j) {
                d.x[row * spec.dim + j] = means[c][j] + spec.sigma * rng.next_normal();
            }
            d.y[row] = c;
        }
    }
    return d;
}

} // namespace

DatasetPair make_blobs(const BlobSpec& spec) {
    spec.validate();
    const auto means = spec.resolved_means();
    Rng rng(spec.seed);
    DatasetPair pair;
    pair.train = sample_blobs(spec, means, spec.train_per_class, SplitTag::Train, rng);
    pair.test = sample_blobs(spec, means, spec.test_per_class, SplitTag::Test, rng);
    return pair;
}

namespace {

class IdxReader {
public:
    IdxReader(const std::filesystem::path& path) : path_(path.string()) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open " + path_);
        bytes_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }

    std::uint32_t read_u32_be() {
        if (offset_ + 4 > bytes_.size()) {
            throw FormatError(path_ + ": truncated at offset " + std::to_string(offset_));
        }
        const auto* p = reinterpret_cast<const unsigned char*>(bytes_.data()) + offset_;
        offset_ += 4;
        return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
               (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
    }

    const unsigned char* read_bytes(std::size_t n) {
        if (offset_ + n > bytes_.size()) {
            throw FormatError(path_ + ": truncated at offset " + std::to_string(offset_) +
                              ", need " + std::to_string(n) + " more bytes");
        }
        const auto* p = reinterpret_cast<const unsigned char*>(bytes_.data()) + offset_;
        offset_ += n;
        return p;
    }

    void expect_magic(std::uint32_t want) {
        const std::size_t at = offset_;
        const std::uint32_t got = read_u32_be();
        if (got != want) {
            throw FormatError(path_ + ": bad magic at offset " + std::to_string(at) + ": got 0x" +
                              to_hex(got) + ", expected 0x" + to_hex(want));
        }
    }

    std::size_t remaining() const { return bytes_.size() - offset_; }
    const std::string& path() const { return path_; }

private:
    static std::string to_hex(std::uint32_t v) {
        static const char* digits = "0123456789abcdef";
        std::string s(8, '0');
        for (int i = 7; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xF];
        return s;
    }

    std::string path_;
    std::string bytes_;
    std::size_t offset_ = 0;
};

} // namespace

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path, SplitTag tag) {
    IdxReader images(images_path);
    images.expect_magic(0x00000803);
    const std::uint32_t n = images.read_u32_be();
    const std::uint32_t rows = images.read_u32_be();
    const std::uint32_t cols = images.read_u32_be();
    const std::size_t d = std::size_t(rows) * cols;
    if (n == 0 || d == 0) throw FormatError(images.path() + ": empty image dimensions");

    IdxReader labels(labels_path);
    labels.expect_magic(0x00000801);
    const std::uint32_t n_labels = labels.read_u32_be();
    if (n_labels != n) {
        throw FormatError(labels.path() + ": label count " + std::to_string(n_labels) +
                          " does not match image count " + std::to_string(n));
    }

    Dataset out;
    out.tag = tag;
    out.x = Tensor({n, d});
    out.y.resize(n);
    const unsigned char* pix = images.read_bytes(std::size_t(n) * d);
    for (std::size_t i = 0; i < std::size_t(n) * d; ++i) {
        out.x[i] = static_cast<double>(pix[i]) / 255.0;
    }
    const unsigned char* lab = labels.read_bytes(n);
    for (std::size_t i = 0; i < n; ++i) out.y[i] = lab[i];
    return out;
}

Dataset restrict(const Dataset& d, const std::vector<std::size_t>& classes) {
    if (classes.empty()) throw ContractError("restrict: empty class subset");
    std::vector<char> wanted;
    for (std::size_t c : classes) {
        if (c >= wanted.size()) wanted.resize(c + 1, 0);
        wanted[c] = 1;
    }
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.y[i] < wanted.size() && wanted[d.y[i]]) rows.push_back(i);
    }
    if (rows.empty()) {
        throw MetricError("restrict: no samples with labels in the requested subset");
    }
    Dataset out;
    out.tag = d.tag;
    out.normalized = d.normalized;
    out.stats = d.stats;
    out.x = take_rows(d.x, rows);
    out.y.reserve(rows.size());
    for (std::size_t i : rows) out.y.push_back(d.y[i]);
    return out;
}

void normalize_pair(Dataset& train, Dataset& test) {
    const std::size_t n = train.size(), d = train.dim();
    NormStats stats;
    stats.mean.assign(d, 0.0);
    stats.std_dev.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) stats.mean[j] += train.x[i * d + j];
    for (std::size_t j = 0; j < d; ++j) stats.mean[j] /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double v = train.x[i * d + j] - stats.mean[j];
            stats.std_dev[j] += v * v;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        stats.std_dev[j] = std::sqrt(stats.std_dev[j] / static_cast<double>(n));
        if (stats.std_dev[j] < 1e-12) stats.std_dev[j] = 1.0; // constant feature
    }
    auto apply = [&](Dataset& ds) {
        for (std::size_t i = 0; i < ds.size(); ++i)
            for (std::size_t j = 0; j < d; ++j)
                ds.x[i * d + j] = (ds.x[i * d + j] - stats.mean[j]) / stats.std_dev[j];
        ds.stats = stats; // train statistics on both splits
        ds.normalized = true;
    };
    apply(train);
    apply(test);
}

} // namespace ulrn
