// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstring>

#include "testutil.hpp"
#include "ulrn/models.hpp"

using namespace ulrn;

namespace {

// Reference generator typed in independently from the published xoshiro256++
// and splitmix64 descriptions; guards the stream against regressions.
struct RefXoshiro {
    std::array<std::uint64_t, 4> s;

    explicit RefXoshiro(std::uint64_t seed) {
        std::uint64_t x = seed;
        auto smix = [&x]() {
            x += 0x9E3779B97F4A7C15ull;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            return z ^ (z >> 31);
        };
        for (auto& w : s) w = smix();
    }

    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }
};

} // namespace

TEST_CASE("rng stream matches the reference recurrence") {
    for (std::uint64_t seed : {0ull, 1ull, 42ull, 0xDEADBEEFull}) {
        Rng rng(seed);
        RefXoshiro ref(seed);
        for (int i = 0; i < 100; ++i) CHECK(rng.next_u64() == ref.next());
    }
}

TEST_CASE("rng unit interval and determinism") {
    Rng a(9), b(9);
    for (int i = 0; i < 1000; ++i) {
        const double v = a.next_unit();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
        CHECK(v == b.next_unit());
    }
}

TEST_CASE("init zeroes biases and is seed deterministic") {
    ClassifierSpec spec{4, {8, 8}, 3};
    Rng r1(77), r2(77);
    ParameterSet a = init_classifier(spec, r1);
    ParameterSet b = init_classifier(spec, r2);
    REQUIRE(a.size() == 6);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& ea = a.entry(i);
        const auto& eb = b.entry(i);
        CHECK(ea.name == eb.name);
        CHECK(std::memcmp(ea.value.data(), eb.value.data(),
                          ea.value.size() * sizeof(double)) == 0);
        if (ea.name[0] == 'b') {
            for (std::size_t j = 0; j < ea.value.size(); ++j) CHECK(ea.value[j] == 0.0);
        }
    }
}

TEST_CASE("weight sample mean stays within three sigma of zero") {
    ClassifierSpec spec{100, {}, 100}; // one 100x100 weight: 1e4 draws
    Rng rng(2024);
    ParameterSet ps = init_classifier(spec, rng);
    const Tensor& w = ps.at("w0").value;
    double mean = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) mean += w[i];
    mean /= static_cast<double>(w.size());
    const double bound = std::sqrt(6.0 / 200.0);
    const double sigma_mean = bound / std::sqrt(3.0 * static_cast<double>(w.size()));
    CHECK(std::abs(mean) < 3.0 * sigma_mean);
}

TEST_CASE("zero weight classifier gives uniform probabilities") {
    ClassifierSpec spec{2, {4}, 5};
    Rng rng(1);
    ParameterSet ps = init_classifier(spec, rng);
    for (auto& e : ps) std::fill(e.value.values().begin(), e.value.values().end(), 0.0);
    Tensor probs = softmax(classifier_logits(ps, spec, Tensor::matrix(3, 2, {1, 2, 3, 4, 5, 6})));
    for (std::size_t i = 0; i < probs.size(); ++i) {
        CHECK(probs[i] == doctest::Approx(0.2).epsilon(1e-12));
    }
}

TEST_CASE("hand-set single hidden layer forward pass") {
    ClassifierSpec spec{2, {2}, 3};
    Rng rng(1);
    ParameterSet ps = init_classifier(spec, rng);
    ps.at("w0").value = Tensor::matrix(2, 2, {1, 0, 0, 1});
    ps.at("b0").value = Tensor::matrix(1, 2, {0.5, -0.25});
    ps.at("w1").value = Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6});
    ps.at("b1").value = Tensor::matrix(1, 3, {0.1, 0.2, 0.3});

    // x = [1, -2]: pre = [1.5, -2.25], relu = [1.5, 0], logits = 1.5*[1,2,3] + b1
    Tensor logits = classifier_logits(ps, spec, Tensor::matrix(1, 2, {1, -2}));
    CHECK(logits[0] == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(logits[1] == doctest::Approx(3.2).epsilon(1e-12));
    CHECK(logits[2] == doctest::Approx(4.8).epsilon(1e-12));
}

TEST_CASE("classifier batch shape contract and dimension errors") {
    ClassifierSpec spec{3, {4}, 2};
    Rng rng(3);
    ParameterSet ps = init_classifier(spec, rng);
    Tensor x({7, 3});
    Tensor logits = classifier_logits(ps, spec, x);
    CHECK(logits.rows() == 7);
    CHECK(logits.cols() == 2);
    CHECK_THROWS_AS(classifier_logits(ps, spec, Tensor({7, 4})), DimensionError);
}

TEST_CASE("noise sampling: determinism, shape, and moments") {
    Rng a(31), b(31);
    Tensor z1 = sample_noise(a, 4, 3);
    Tensor z2 = sample_noise(b, 4, 3);
    CHECK(z1.rows() == 4);
    CHECK(z1.cols() == 3);
    CHECK(std::memcmp(z1.data(), z2.data(), z1.size() * sizeof(double)) == 0);

    Rng big(57);
    Tensor z = sample_noise(big, 1000, 100); // 1e5 draws
    double mean = 0.0, var = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) mean += z[i];
    mean /= static_cast<double>(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) var += (z[i] - mean) * (z[i] - mean);
    var /= static_cast<double>(z.size());
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("generator output stays in range; zero parameters hit midpoint") {
    GeneratorSpec spec{6, {16}, 2, -2.0, 3.0};
    Rng rng(13);
    ParameterSet ps = init_generator(spec, rng);
    Tensor z = sample_noise(rng, 64, 6);
    Tensor x = generate(ps, spec, z);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(x[i] >= -2.0);
        CHECK(x[i] <= 3.0);
    }

    for (auto& e : ps) std::fill(e.value.values().begin(), e.value.values().end(), 0.0);
    Tensor mid = generate(ps, spec, z);
    for (std::size_t i = 0; i < mid.size(); ++i) {
        CHECK(mid[i] == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("generator gradient passes the finite-difference oracle") {
    GeneratorSpec spec{3, {5}, 2, -1.5, 1.5};
    Rng rng(21);
    ParameterSet ps = init_generator(spec, rng);
    Tensor z = sample_noise(rng, 4, 3);

    auto build = [&](Graph& g) -> LossValue {
        NodeId x = generate(g, ps, spec, g.constant(z), true);
        NodeId loss = g.sum(g.mul(x, x));
        return {loss, g.value(loss)[0]};
    };
    auto r = test::gradcheck(ps, build, 1e-5, 1e-6);
    CHECK(r.max_rel_err < 1e-4);
}

TEST_CASE("classifier spec can be recovered from parameters") {
    ClassifierSpec spec{7, {12, 9}, 4};
    Rng rng(4);
    ParameterSet ps = init_classifier(spec, rng);
    ClassifierSpec got = infer_classifier_spec(ps);
    CHECK(got.input_dim == 7);
    CHECK(got.hidden == std::vector<std::size_t>{12, 9});
    CHECK(got.num_classes == 4);
}

TEST_CASE("spec validation rejects degenerate setups") {
    CHECK_THROWS_AS((ClassifierSpec{0, {4}, 3}).validate(), ConfigError);
    CHECK_THROWS_AS((ClassifierSpec{2, {4}, 1}).validate(), ConfigError);
    CHECK_THROWS_AS((GeneratorSpec{4, {4}, 2, 1.0, 1.0}).validate(), ConfigError);
}
