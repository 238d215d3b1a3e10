// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "ulrn/dataset.hpp"
#include "ulrn/engine.hpp"
#include "ulrn/eval.hpp"
#include "ulrn/filters.hpp"
#include "ulrn/rng.hpp"

using namespace ulrn;
namespace fs = std::filesystem;

namespace {

Tensor prob_row10(double forget_value, std::size_t forget_class) {
    Tensor t({1, 10});
    const double rest = (1.0 - forget_value) / 9.0;
    for (std::size_t i = 0; i < 10; ++i) t[i] = i == forget_class ? forget_value : rest;
    return t;
}

fs::path scratch_dir() {
    fs::path dir = fs::temp_directory_path() / "ulrn_filters_data_test";
    fs::create_directories(dir);
    return dir;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void push_u32_be(std::string& s, std::uint32_t v) {
    s.push_back(static_cast<char>((v >> 24) & 0xFF));
    s.push_back(static_cast<char>((v >> 16) & 0xFF));
    s.push_back(static_cast<char>((v >> 8) & 0xFF));
    s.push_back(static_cast<char>(v & 0xFF));
}

} // namespace

TEST_CASE("prefilter keeps only samples below delta on every forgetting class") {
    LabelSplit split(10, {7});
    CHECK(prefilter(prob_row10(0.005, 7), split, 0.01).kept_count == 1);
    CHECK(prefilter(prob_row10(0.02, 7), split, 0.01).kept_count == 0);

    LabelSplit none(10, {});
    CHECK(prefilter(prob_row10(0.9, 7), none, 0.01).kept_count == 1); // vacuous forall
}

TEST_CASE("prefilter with delta one keeps rows with strictly sub-one probabilities") {
    LabelSplit split(4, {0});
    Tensor t = Tensor::matrix(2, 4, {1.0, 0.0, 0.0, 0.0, 0.25, 0.25, 0.25, 0.25});
    FilterOutcome out = prefilter(t, split, 1.0);
    CHECK(out.keep_mask[0] == 0); // T_0 = 1 is not < 1
    CHECK(out.keep_mask[1] == 1);
}

TEST_CASE("blockf drops on argmax membership with lowest-index tie break") {
    LabelSplit split(3, {0});
    CHECK(blockf(Tensor::matrix(1, 3, {0.6, 0.3, 0.1}), split).kept_count == 0);
    CHECK(blockf(Tensor::matrix(1, 3, {0.1, 0.6, 0.3}), split).kept_count == 1);
    const double third = 1.0 / 3.0;
    CHECK(blockf(Tensor::matrix(1, 3, {third, third, third}), split).kept_count == 0);
}

TEST_CASE("samples kept by a sub-1/K prefilter never argmax to a forgetting class") {
    Rng rng(71);
    const std::size_t k = 5;
    LabelSplit split(k, {2});
    const double delta = 1.0 / static_cast<double>(k);
    for (int rep = 0; rep < 300; ++rep) {
        Tensor t({1, k});
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            t[i] = rng.next_unit();
            s += t[i];
        }
        for (std::size_t i = 0; i < k; ++i) t[i] /= s;
        FilterOutcome pre = prefilter(t, split, delta);
        if (pre.kept_count == 1) {
            CHECK(blockf(t, split).kept_count == 1);
        }
    }
}

TEST_CASE("filtering an already kept subset is idempotent") {
    Rng rng(73);
    LabelSplit split(4, {1});
    Tensor t({32, 4});
    for (std::size_t r = 0; r < 32; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < 4; ++c) {
            t[r * 4 + c] = 0.05 + rng.next_unit();
            s += t[r * 4 + c];
        }
        for (std::size_t c = 0; c < 4; ++c) t[r * 4 + c] /= s;
    }
    FilterOutcome first = prefilter(t, split, 0.3);
    if (first.kept_count > 0) {
        Tensor kept = take_rows(t, first.kept_rows());
        FilterOutcome second = prefilter(kept, split, 0.3);
        CHECK(second.kept_count == first.kept_count);
        CHECK(second.dropped_count == 0);
    }
    CHECK(first.kept_count + first.dropped_count == 32);
}

TEST_CASE("filter config validation and the delta default rule") {
    FilterConfig bad{FilterKind::PreFilter, 0.0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK(default_delta(10) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(default_delta(100) == doctest::Approx(0.001).epsilon(1e-12));
}

TEST_CASE("blob generation: degenerate sigma, determinism, balance") {
    BlobSpec spec;
    spec.num_classes = 3;
    spec.sigma = 0.0;
    spec.train_per_class = 5;
    spec.test_per_class = 2;
    spec.seed = 11;
    DatasetPair pair = make_blobs(spec);
    const auto means = spec.resolved_means();
    for (std::size_t i = 0; i < pair.train.size(); ++i) {
        const std::size_t c = pair.train.y[i];
        CHECK(pair.train.x[i * 2 + 0] == means[c][0]);
        CHECK(pair.train.x[i * 2 + 1] == means[c][1]);
    }

    DatasetPair again = make_blobs(spec);
    CHECK(std::memcmp(pair.train.x.data(), again.train.x.data(),
                      pair.train.x.size() * sizeof(double)) == 0);
    CHECK(pair.test.size() == 6);
}

TEST_CASE("default blobs are linearly separable to 99 percent") {
    BlobSpec spec; // K=5, d=2, sigma=0.5, radius 3
    spec.seed = 21;
    DatasetPair pair = make_blobs(spec);
    ClassifierSpec linear{2, {}, 5}; // no hidden layer: a linear probe
    SupConfig cfg;
    cfg.epochs = 12;
    cfg.lr = 0.1;
    cfg.seed = 3;
    TeacherResult probe = train_teacher(pair.train, pair.test, linear, cfg);
    CHECK(probe.test_acc >= 99.0);
}

TEST_CASE("restrict keeps labels and partitions the dataset") {
    BlobSpec spec;
    spec.train_per_class = 10;
    spec.test_per_class = 5;
    DatasetPair pair = make_blobs(spec);
    LabelSplit split(5, {3});

    Dataset all = restrict(pair.train, {0, 1, 2, 3, 4});
    CHECK(all.size() == pair.train.size());

    Dataset forget = restrict(pair.train, split.forget());
    Dataset retain = restrict(pair.train, split.retain());
    CHECK(forget.size() == 10);
    CHECK(forget.size() + retain.size() == pair.train.size());
    for (std::size_t label : forget.y) CHECK(label == 3);

    CHECK_THROWS_AS(restrict(pair.train, {9}), MetricError);
    CHECK_THROWS_AS(restrict(pair.train, {}), ContractError);
}

TEST_CASE("normalization reuses train statistics on test") {
    BlobSpec spec;
    spec.train_per_class = 50;
    spec.test_per_class = 20;
    spec.seed = 31;
    DatasetPair pair = make_blobs(spec);
    Dataset raw_test = pair.test;

    // oracle: train stats computed here, independently
    const std::size_t n = pair.train.size(), d = pair.train.dim();
    std::vector<double> mu(d, 0.0), sd(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) mu[j] += pair.train.x[i * d + j];
    for (std::size_t j = 0; j < d; ++j) mu[j] /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double v = pair.train.x[i * d + j] - mu[j];
            sd[j] += v * v;
        }
    for (std::size_t j = 0; j < d; ++j) sd[j] = std::sqrt(sd[j] / static_cast<double>(n));

    normalize_pair(pair.train, pair.test);
    for (std::size_t i = 0; i < pair.test.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double expected = (raw_test.x[i * d + j] - mu[j]) / sd[j];
            CHECK(pair.test.x[i * d + j] == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    CHECK(pair.train.normalized);
    CHECK(pair.test.stats.mean == pair.train.stats.mean);
}

TEST_CASE("idx round trip on a hand-built fixture") {
    const fs::path dir = scratch_dir();
    std::string images;
    push_u32_be(images, 0x00000803);
    push_u32_be(images, 2); // two images
    push_u32_be(images, 2); // rows
    push_u32_be(images, 2); // cols
    const unsigned char pix[8] = {0, 51, 102, 153, 204, 255, 10, 20};
    for (unsigned char p : pix) images.push_back(static_cast<char>(p));

    std::string labels;
    push_u32_be(labels, 0x00000801);
    push_u32_be(labels, 2);
    labels.push_back(7);
    labels.push_back(1);

    write_bytes(dir / "img.idx", images);
    write_bytes(dir / "lab.idx", labels);

    Dataset d = load_idx(dir / "img.idx", dir / "lab.idx");
    REQUIRE(d.size() == 2);
    CHECK(d.dim() == 4);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(d.x[i] == doctest::Approx(pix[i] / 255.0).epsilon(1e-15));
    }
    CHECK(d.y[0] == 7);
    CHECK(d.y[1] == 1);
}

TEST_CASE("idx rejects bad magic, truncation, empty files, and count mismatch") {
    const fs::path dir = scratch_dir();

    std::string wrong_magic;
    push_u32_be(wrong_magic, 0x00000802);
    push_u32_be(wrong_magic, 1);
    write_bytes(dir / "bad.idx", wrong_magic);
    write_bytes(dir / "empty.idx", "");

    std::string labels;
    push_u32_be(labels, 0x00000801);
    push_u32_be(labels, 1);
    labels.push_back(0);
    write_bytes(dir / "one_label.idx", labels);

    CHECK_THROWS_AS(load_idx(dir / "bad.idx", dir / "one_label.idx"), FormatError);
    CHECK_THROWS_AS(load_idx(dir / "empty.idx", dir / "one_label.idx"), FormatError);

    std::string truncated;
    push_u32_be(truncated, 0x00000803);
    push_u32_be(truncated, 2);
    push_u32_be(truncated, 2);
    push_u32_be(truncated, 2);
    truncated.push_back(1); // 1 byte instead of 8
    write_bytes(dir / "trunc.idx", truncated);
    CHECK_THROWS_AS(load_idx(dir / "trunc.idx", dir / "one_label.idx"), FormatError);

    std::string images;
    push_u32_be(images, 0x00000803);
    push_u32_be(images, 2);
    push_u32_be(images, 1);
    push_u32_be(images, 1);
    images.push_back(1);
    images.push_back(2);
    write_bytes(dir / "two.idx", images);
    CHECK_THROWS_AS(load_idx(dir / "two.idx", dir / "one_label.idx"), FormatError);
}
