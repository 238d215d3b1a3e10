// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "ulrn/engine.hpp"
#include "ulrn/losses.hpp"
#include "ulrn/models.hpp"
#include "ulrn/rng.hpp"

using namespace ulrn;

namespace {

Tensor random_matrix(Rng& rng, std::size_t r, std::size_t c) {
    Tensor t({r, c});
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.next_normal();
    return t;
}

void BM_Matmul(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    Tensor a = random_matrix(rng, n, n);
    Tensor b = random_matrix(rng, n, n);
    for (auto _ : state) {
        Tensor c = matmul(a, b);
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_Matmul)->Arg(32)->Arg(64)->Arg(128);

void BM_LogSoftmax(benchmark::State& state) {
    Rng rng(2);
    Tensor logits = random_matrix(rng, 256, 10);
    for (auto _ : state) {
        Tensor out = log_softmax(logits);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_LogSoftmax);

void BM_StudentStep(benchmark::State& state) {
    const auto batch = static_cast<std::size_t>(state.range(0));
    Rng rng(3);
    ClassifierSpec spec{2, {32, 32}, 5};
    ParameterSet student = init_classifier(spec, rng);
    Optimizer opt({OptimSpec::Kind::Sgd, 0.05, 0.9}, student);
    Tensor x = random_matrix(rng, batch, 2);
    Tensor teacher_probs({batch, 5});
    for (std::size_t r = 0; r < batch; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < 5; ++c) {
            teacher_probs[r * 5 + c] = 0.1 + rng.next_unit();
            s += teacher_probs[r * 5 + c];
        }
        for (std::size_t c = 0; c < 5; ++c) teacher_probs[r * 5 + c] /= s;
    }
    for (auto _ : state) {
        Graph g;
        NodeId log_s = g.log_softmax(classifier_logits(g, student, spec, g.constant(x), true));
        LossValue loss = kd_loss(g, teacher_probs, log_s);
        student.zero_grads();
        g.backward(loss.node);
        opt.step(student);
        benchmark::DoNotOptimize(loss.value);
    }
}
BENCHMARK(BM_StudentStep)->Arg(64)->Arg(128)->Arg(256);

void BM_GeneratorStep(benchmark::State& state) {
    Rng rng(4);
    ClassifierSpec cls{2, {32, 32}, 5};
    GeneratorSpec gen_spec{8, {32, 32}, 2, -4.0, 4.0};
    ParameterSet teacher = init_classifier(cls, rng);
    ParameterSet student = init_classifier(cls, rng);
    ParameterSet gen = init_generator(gen_spec, rng);
    Optimizer opt({OptimSpec::Kind::Adam, 1e-3}, gen);
    LabelSplit split(5, {3});
    for (auto _ : state) {
        Tensor z = sample_noise(rng, 128, 8);
        Graph g;
        NodeId x = generate(g, gen, gen_spec, g.constant(std::move(z)), true);
        NodeId log_t = g.log_softmax(classifier_logits(g, std::as_const(teacher), cls, x));
        NodeId log_s = g.log_softmax(classifier_logits(g, std::as_const(student), cls, x));
        LossValue loss = is_loss(g, log_t, log_s, split);
        gen.zero_grads();
        g.backward(loss.node);
        opt.step(gen);
        benchmark::DoNotOptimize(loss.value);
    }
}
BENCHMARK(BM_GeneratorStep);

void BM_Redistribute(benchmark::State& state) {
    Rng rng(5);
    Tensor logits = random_matrix(rng, 256, 10);
    LabelSplit split(10, {7});
    for (auto _ : state) {
        Tensor out = redistribute_logits(logits, split);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_Redistribute);

} // namespace

BENCHMARK_MAIN();
