// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ulrn/dataset.hpp"
#include "ulrn/engine.hpp"

namespace ulrn {

/// Percent of samples with label in `classes` whose argmax prediction equals
/// the label. An empty matching subset is an error, not 0.
double accuracy(const ParameterSet& params, const ClassifierSpec& spec, const Dataset& d,
                const std::vector<std::size_t>& classes);

/// Relearning procedure settings for the anamnesis index. The batch size and
/// seed pin the fine-tuning schedule so that identical inputs relearn along
/// identical trajectories.
struct RelearnConfig {
    double lr = 0.01;
    std::size_t max_steps = 500;
    double alpha = 0.05; // accuracy margin fraction
    std::size_t eval_every = 1;
    std::size_t batch_size = 64;
    std::uint64_t seed = 99;

    void validate() const;
};

/// Steps of full-dataset fine-tuning until forgetting-class test accuracy
/// reaches (1 - alpha) * target_af. Already above threshold counts as 1;
/// hitting max_steps reports max_steps (censored).
std::size_t relearn_steps(const ParameterSet& params, const ClassifierSpec& spec,
                          const Dataset& train_full, const Dataset& test,
                          const LabelSplit& split, double target_af, const RelearnConfig& config);

/// Anamnesis index: relearning time of the unlearned model over relearning
/// time of the retrained model, both toward the original model's A_f.
double ain(const ParameterSet& unlearned, const ParameterSet& retrained,
           const ParameterSet& original, const ClassifierSpec& spec, const Dataset& train_full,
           const Dataset& test, const LabelSplit& split, const RelearnConfig& config);

struct MiaResult {
    double percent = 0.0;
    bool degenerate = false; // all scores equal; percent forced to 50
};

/// Loss-threshold membership attack. The threshold maximizes balanced
/// accuracy between retaining train (member) and retaining test (non-member)
/// cross-entropy losses; the score is the percent of forgetting train
/// samples landing on the non-member side.
MiaResult mia_i(const ParameterSet& params, const ClassifierSpec& spec, const Dataset& d_f_train,
                const Dataset& d_r_train, const Dataset& d_r_test);

/// Core of mia_i on raw score vectors, exposed for property tests: the
/// decision is invariant under strictly monotone transforms of the scores.
MiaResult mia_i_from_losses(const std::vector<double>& forget_losses,
                            const std::vector<double>& member_losses,
                            const std::vector<double>& nonmember_losses);

struct MiaIIConfig {
    std::size_t n_shadow = 4;
    std::uint64_t seed = 7;
    SupConfig shadow_train; // budget for each shadow classifier
};

/// Trained membership attacker: a small MLP over softmax vectors. Training
/// it depends only on the dataset and the shadow budget, so one attacker
/// serves every target model evaluated under the same seed.
struct MiaAttacker {
    ClassifierSpec spec;
    ParameterSet params;
    std::uint64_t seed = 0;
};

/// Trains shadow classifiers on disjoint random halves of `train`, collects
/// (softmax, member?) signal pairs, and fits the attack MLP with a held-out
/// validation split selecting the best iterate.
MiaAttacker train_mia_attacker(const ClassifierSpec& spec, const Dataset& train,
                               const MiaIIConfig& config);

/// Attacks one target on a balanced member (train) / non-member (test) set;
/// returns the F1 of member predictions as a percent.
double mia_ii_attack(const MiaAttacker& attacker, const ParameterSet& target,
                     const ClassifierSpec& spec, const Dataset& train, const Dataset& test);

/// Shadow-model membership attack F1 (percent): train_mia_attacker followed
/// by mia_ii_attack.
double mia_ii(const ParameterSet& target, const ClassifierSpec& spec, const Dataset& train,
              const Dataset& test, const MiaIIConfig& config);

/// One evaluated run, ready for aggregation.
struct RunMetrics {
    std::string method;
    std::uint64_t seed = 0;
    double a_f = 0.0;
    double a_r = 0.0;
    double mia_i = 0.0;
    double mia_ii = 0.0;
    double ain = 0.0;
    std::vector<double> per_class; // test accuracy per class
};

struct ReportRow {
    std::string method;
    std::size_t seed_count = 0;
    double a_f_mean = 0.0, a_f_std = 0.0;
    double a_r_mean = 0.0, a_r_std = 0.0;
    double mia_i = 0.0;
    double mia_ii = 0.0;
    double ain = 0.0;
    std::vector<double> per_class; // mean per-class accuracy over runs
};

/// Per-class test accuracies in class order.
std::vector<double> per_class_accuracy(const ParameterSet& params, const ClassifierSpec& spec,
                                       const Dataset& test);

/// Groups runs by method (first-appearance order) and aggregates with mean
/// and population standard deviation.
std::vector<ReportRow> assemble_report(const std::vector<RunMetrics>& runs);

double mean_of(const std::vector<double>& v);
double population_std(const std::vector<double>& v);

} // namespace ulrn
