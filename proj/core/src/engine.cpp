// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#include "ulrn/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <utility>

namespace ulrn {

MethodTraits method_traits(Method m) {
    switch (m) {
    case Method::Dfkd:
        return {GenLoss::Adversarial, StudentTarget::Raw, FilterKind::None};
    case Method::BlockF:
        return {GenLoss::Adversarial, StudentTarget::Raw, FilterKind::BlockF};
    case Method::Gkt:
        return {GenLoss::Adversarial, StudentTarget::Raw, FilterKind::PreFilter};
    case Method::Is:
        return {GenLoss::Inhibited, StudentTarget::Raw, FilterKind::PreFilter};
    case Method::Pf:
        return {GenLoss::Adversarial, StudentTarget::PostFilter, FilterKind::None};
    case Method::Ispf:
        return {GenLoss::Inhibited, StudentTarget::PostFilter, FilterKind::None};
    case Method::Pd:
        return {GenLoss::Adversarial, StudentTarget::Pd, FilterKind::None};
    case Method::PdIs:
        return {GenLoss::Inhibited, StudentTarget::Pd, FilterKind::None};
    }
    throw ContractError("unknown method");
}

const char* method_name(Method m) {
    switch (m) {
    case Method::Dfkd: return "DFKD";
    case Method::BlockF: return "BlockF";
    case Method::Gkt: return "GKT";
    case Method::Is: return "IS";
    case Method::Pf: return "PF";
    case Method::Ispf: return "ISPF";
    case Method::Pd: return "PD";
    case Method::PdIs: return "PD_IS";
    }
    return "?";
}

const std::vector<Method>& all_methods() {
    static const std::vector<Method> methods = {Method::Dfkd, Method::BlockF, Method::Gkt,
                                                Method::Is,   Method::Pf,     Method::Ispf,
                                                Method::Pd,   Method::PdIs};
    return methods;
}

Method parse_method(const std::string& name) {
    for (Method m : all_methods()) {
        if (name == method_name(m)) return m;
    }
    std::string valid;
    for (Method m : all_methods()) {
        if (!valid.empty()) valid += ", ";
        valid += method_name(m);
    }
    throw ConfigError("unknown method '" + name + "', valid methods: " + valid);
}

void TrainConfig::validate() const {
    if (epochs < 1 || loops < 1 || n_g < 1 || n_s < 1 || batch_size < 1) {
        throw ConfigError("unlearning counts (epochs, loops, n_g, n_s, batch_size) must be >= 1");
    }
    if (lr_g <= 0.0 || lr_s <= 0.0) throw ConfigError("learning rates must be positive");
    if (balance_weight < 0.0) throw ConfigError("balance_weight must be >= 0");
    for (std::size_t i = 1; i < decay.milestones.size(); ++i) {
        if (decay.milestones[i] <= decay.milestones[i - 1]) {
            throw ConfigError("lr decay milestones must be strictly increasing");
        }
    }
    filter_config().validate();
}

FilterConfig TrainConfig::filter_config() const {
    return FilterConfig{method_traits(method).filter, delta};
}

std::vector<std::size_t> synthesis_composition(const Tensor& teacher_probs,
                                               const LabelSplit& split) {
    if (teacher_probs.cols() != split.num_classes()) {
        throw DimensionError("synthesis_composition: " + std::to_string(teacher_probs.cols()) +
                             " columns vs K=" + std::to_string(split.num_classes()));
    }
    std::vector<std::size_t> counts(split.num_classes(), 0);
    for (std::size_t c : argmax_rows(teacher_probs)) ++counts[c];
    return counts;
}

namespace {

Tensor one_hot(const std::vector<std::size_t>& y, std::size_t num_classes) {
    Tensor t({y.size(), num_classes});
    for (std::size_t i = 0; i < y.size(); ++i) t[i * num_classes + y[i]] = 1.0;
    return t;
}

double accuracy_percent(const ParameterSet& params, const ClassifierSpec& spec, const Dataset& d) {
    const auto pred = argmax_rows(classifier_logits(params, spec, d.x));
    std::size_t hit = 0;
    for (std::size_t i = 0; i < d.size(); ++i) hit += pred[i] == d.y[i] ? 1 : 0;
    return 100.0 * static_cast<double>(hit) / static_cast<double>(d.size());
}

TeacherResult train_supervised(const Dataset& train, const Dataset& test,
                               const ClassifierSpec& spec, const SupConfig& config) {
    spec.validate();
    if (config.batch_size < 1) throw ConfigError("supervised batch_size must be >= 1");
    Rng rng(config.seed);
    TeacherResult result;
    result.spec = spec;
    result.params = init_classifier(spec, rng);

    Optimizer opt({OptimSpec::Kind::Sgd, config.lr, config.momentum}, result.params);
    std::vector<std::size_t> order(train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::size_t step = 0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(start + config.batch_size, order.size());
            std::vector<std::size_t> rows(order.begin() + start, order.begin() + end);
            Tensor xb = take_rows(train.x, rows);
            std::vector<std::size_t> yb;
            yb.reserve(rows.size());
            for (std::size_t r : rows) yb.push_back(train.y[r]);

            Graph g;
            NodeId logits = classifier_logits(g, result.params, spec, g.constant(xb), true);
            LossValue loss = kd_loss(g, one_hot(yb, spec.num_classes), g.log_softmax(logits));
            if (!std::isfinite(loss.value)) {
                throw TrainingError("supervised training diverged at step " +
                                    std::to_string(step));
            }
            result.params.zero_grads();
            g.backward(loss.node);
            opt.step(result.params);
            ++step;
        }
        for (std::size_t ms : config.decay.milestones) {
            if (ms == epoch + 1) opt.set_lr(opt.lr() * config.decay.gamma);
        }
    }
    result.train_acc = accuracy_percent(result.params, spec, train);
    result.test_acc = accuracy_percent(result.params, spec, test);
    return result;
}

} // namespace

TeacherResult train_teacher(const Dataset& train, const Dataset& test, const ClassifierSpec& spec,
                            const SupConfig& config) {
    return train_supervised(train, test, spec, config);
}

TeacherResult retrain_gold(const Dataset& train, const Dataset& test, const LabelSplit& split,
                           const ClassifierSpec& spec, const SupConfig& config) {
    if (split.forget_count() == 0) return train_supervised(train, test, spec, config);
    return train_supervised(restrict(train, split.retain()), test, spec, config);
}

double supervised_step(ParameterSet& params, const ClassifierSpec& spec, Optimizer& opt,
                       const Tensor& x, const std::vector<std::size_t>& y) {
    Graph g;
    NodeId logits = classifier_logits(g, params, spec, g.constant(x), true);
    LossValue loss = kd_loss(g, one_hot(y, spec.num_classes), g.log_softmax(logits));
    params.zero_grads();
    g.backward(loss.node);
    opt.step(params);
    return loss.value;
}

UnlearnResult run_unlearning(const ParameterSet& teacher, const ClassifierSpec& teacher_spec,
                             const GeneratorSpec& gen_spec, const TrainConfig& config,
                             const LabelSplit& split) {
    config.validate();
    teacher_spec.validate();
    gen_spec.validate();
    if (teacher_spec.num_classes != split.num_classes()) {
        throw ContractError("teacher has " + std::to_string(teacher_spec.num_classes) +
                            " classes, split expects " + std::to_string(split.num_classes()));
    }
    if (gen_spec.output_dim != teacher_spec.input_dim) {
        throw DimensionError("generator output dim " + std::to_string(gen_spec.output_dim) +
                             " vs classifier input dim " + std::to_string(teacher_spec.input_dim));
    }

    const MethodTraits traits = method_traits(config.method);
    const FilterConfig filter = config.filter_config();

    Rng rng(config.seed);
    UnlearnResult result;
    result.student = init_classifier(teacher_spec, rng);
    ParameterSet generator = init_generator(gen_spec, rng);

    Optimizer opt_s({OptimSpec::Kind::Sgd, config.lr_s, 0.9}, result.student);
    Optimizer opt_g({OptimSpec::Kind::Adam, config.lr_g}, generator);

    const std::size_t m = config.batch_size;
    std::size_t global_step = 0;
    double last_loss_g = 0.0;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::size_t loop = 0; loop < config.loops; ++loop) {
            for (std::size_t i = 0; i < config.n_g; ++i) {
                Tensor z = sample_noise(rng, m, gen_spec.noise_dim);
                Graph g;
                NodeId x = generate(g, generator, gen_spec, g.constant(std::move(z)), true);
                // teacher and student enter as fixed functions; the gradient
                // reaches the generator through both forward passes
                NodeId log_t = g.log_softmax(classifier_logits(g, teacher, teacher_spec, x));
                NodeId log_s = g.log_softmax(
                    classifier_logits(g, std::as_const(result.student), teacher_spec, x));
                LossValue gen_loss = traits.gen_loss == GenLoss::Inhibited
                                         ? is_loss(g, log_t, log_s, split)
                                         : adv_loss(g, log_t, log_s);
                NodeId total = gen_loss.node;
                if (config.balance_weight > 0.0) {
                    total = g.add(total, g.scale(balance_loss(g, log_t).node,
                                                 config.balance_weight));
                }
                last_loss_g = g.value(total)[0];
                if (!std::isfinite(last_loss_g)) {
                    throw TrainingError("generator loss diverged at step " +
                                        std::to_string(global_step));
                }
                generator.zero_grads();
                g.backward(total);
                opt_g.step(generator);
            }

            for (std::size_t j = 0; j < config.n_s; ++j) {
                const auto t0 = std::chrono::steady_clock::now();
                Tensor z = sample_noise(rng, m, gen_spec.noise_dim);
                Tensor x = generate(generator, gen_spec, z);
                Tensor t_logits = classifier_logits(teacher, teacher_spec, x);
                Tensor t_probs = softmax(t_logits);

                StepLog log;
                log.step = global_step;
                log.epoch = epoch;
                log.loop = loop;
                log.loss_g = last_loss_g;
                log.class_counts = synthesis_composition(t_probs, split);
                for (std::size_t f : split.forget()) log.n_forget_synth += log.class_counts[f];

                const FilterOutcome outcome = apply_filter(t_probs, split, filter);
                log.kept = outcome.kept_count;
                log.n_filtered = outcome.dropped_count;
                const auto kept_rows = outcome.kept_rows();
                log.h_b = batch_retaining_entropy(t_probs, split, kept_rows);

                if (outcome.kept_count > 0) {
                    const bool subset = outcome.kept_count < m;
                    Tensor x_kept = subset ? take_rows(x, kept_rows) : x;
                    Tensor t_logits_kept = subset ? take_rows(t_logits, kept_rows) : t_logits;
                    Tensor t_probs_kept = subset ? take_rows(t_probs, kept_rows) : t_probs;

                    Graph g;
                    NodeId logits = classifier_logits(g, result.student, teacher_spec,
                                                      g.constant(std::move(x_kept)), true);
                    NodeId log_s = g.log_softmax(logits);
                    LossValue loss{0, 0.0};
                    switch (traits.target) {
                    case StudentTarget::Raw:
                        loss = kd_loss(g, t_probs_kept, log_s);
                        break;
                    case StudentTarget::PostFilter:
                        loss = postfilter_kd_loss(g, t_logits_kept, log_s, split);
                        break;
                    case StudentTarget::Pd:
                        loss = kd_loss(g, pd_target(t_probs_kept, split), log_s);
                        break;
                    }
                    if (!std::isfinite(loss.value)) {
                        throw TrainingError("student loss diverged at step " +
                                            std::to_string(global_step));
                    }
                    log.loss_s = loss.value;
                    result.student.zero_grads();
                    g.backward(loss.node);
                    opt_s.step(result.student);
                }
                // kept == 0: the update is skipped and the log row records it

                const auto t1 = std::chrono::steady_clock::now();
                log.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
                result.steps.push_back(std::move(log));
                ++global_step;
            }
        }
        for (std::size_t ms : config.decay.milestones) {
            if (ms == epoch + 1) opt_s.set_lr(opt_s.lr() * config.decay.gamma);
        }
    }
    return result;
}

} // namespace ulrn
