// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ulrn/dataset.hpp"
#include "ulrn/filters.hpp"
#include "ulrn/losses.hpp"
#include "ulrn/models.hpp"
#include "ulrn/optim.hpp"

namespace ulrn {

/// Unlearning method variants. Each name fixes the generator loss, the
/// student target, and the sample filter; the combinations are not
/// independently configurable, so an inconsistent setup cannot be built.
enum class Method { Dfkd, BlockF, Gkt, Is, Pf, Ispf, Pd, PdIs };

enum class GenLoss { Adversarial, Inhibited };
enum class StudentTarget { Raw, PostFilter, Pd };

struct MethodTraits {
    GenLoss gen_loss;
    StudentTarget target;
    FilterKind filter;
};

MethodTraits method_traits(Method m);
const char* method_name(Method m);
/// Parses a method name; unknown names raise a ConfigError listing the
/// valid spellings.
Method parse_method(const std::string& name);
const std::vector<Method>& all_methods();

struct LrDecay {
    std::vector<std::size_t> milestones; // strictly increasing epoch counts
    double gamma = 0.1;
};

/// Supervised training configuration for teacher / gold / relearn runs.
struct SupConfig {
    std::size_t epochs = 30;
    std::size_t batch_size = 64;
    double lr = 0.05;
    double momentum = 0.9;
    LrDecay decay;
    std::uint64_t seed = 1;
};

/// Unlearning loop configuration.
struct TrainConfig {
    std::size_t epochs = 60;
    std::size_t loops = 1;
    std::size_t n_g = 1;  // generator steps per loop
    std::size_t n_s = 10; // student steps per loop
    std::size_t batch_size = 128;
    double lr_g = 1e-3; // generator Adam
    double lr_s = 0.05; // student SGD, momentum 0.9
    LrDecay decay;
    std::uint64_t seed = 1;
    Method method = Method::Ispf;
    double delta = 0.01;        // prefilter threshold when the method filters
    double balance_weight = 0.0;

    void validate() const;
    FilterConfig filter_config() const;
};

/// Per-student-step diagnostics.
struct StepLog {
    std::size_t step = 0; // global student-step index
    std::size_t epoch = 0;
    std::size_t loop = 0;
    double loss_g = 0.0;
    double loss_s = 0.0; // 0 when the step was skipped (kept == 0)
    std::vector<std::size_t> class_counts; // teacher argmax per class, full batch
    std::size_t n_forget_synth = 0;
    std::size_t n_filtered = 0;
    std::size_t kept = 0;
    double h_b = 0.0;
    double wall_ms = 0.0;
};

struct TeacherResult {
    ParameterSet params;
    ClassifierSpec spec;
    double train_acc = 0.0; // percent
    double test_acc = 0.0;
};

struct UnlearnResult {
    ParameterSet student;
    std::vector<StepLog> steps;
};

/// Supervised cross-entropy training of a classifier, deterministic per seed.
TeacherResult train_teacher(const Dataset& train, const Dataset& test, const ClassifierSpec& spec,
                            const SupConfig& config);

/// The gold baseline: the same procedure restricted to retaining-class
/// samples. The model keeps all K outputs.
TeacherResult retrain_gold(const Dataset& train, const Dataset& test, const LabelSplit& split,
                           const ClassifierSpec& spec, const SupConfig& config);

/// The distillation-based unlearning loop: alternating generator and student
/// steps over synthetic batches, with the method's generator loss, student
/// target, and filter. Fresh noise is drawn for every step; the generator
/// persists across epochs; the teacher is never mutated.
UnlearnResult run_unlearning(const ParameterSet& teacher, const ClassifierSpec& teacher_spec,
                             const GeneratorSpec& gen_spec, const TrainConfig& config,
                             const LabelSplit& split);

/// Counts teacher-argmax predictions per class (ties to the lowest index).
std::vector<std::size_t> synthesis_composition(const Tensor& teacher_probs,
                                               const LabelSplit& split);

/// Convenience: per-sample mean cross-entropy of a labeled batch. Exposed
/// for the relearning and membership procedures in eval.
double supervised_step(ParameterSet& params, const ClassifierSpec& spec, Optimizer& opt,
                       const Tensor& x, const std::vector<std::size_t>& y);

} // namespace ulrn
