// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#include "ulrn/eval.hpp"

#include <algorithm>
#include <cmath>

#include "ulrn/rng.hpp"

namespace ulrn {

namespace {

std::vector<std::size_t> rows_with_labels(const Dataset& d,
                                          const std::vector<std::size_t>& classes) {
    std::vector<char> wanted;
    for (std::size_t c : classes) {
        if (c >= wanted.size()) wanted.resize(c + 1, 0);
        wanted[c] = 1;
    }
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.y[i] < wanted.size() && wanted[d.y[i]]) rows.push_back(i);
    }
    return rows;
}

/// Per-sample cross-entropy -ln p_y under the model.
std::vector<double> per_sample_ce(const ParameterSet& params, const ClassifierSpec& spec,
                                  const Dataset& d) {
    const Tensor log_probs = log_softmax(classifier_logits(params, spec, d.x));
    const std::size_t k = log_probs.cols();
    std::vector<double> losses(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) losses[i] = -log_probs[i * k + d.y[i]];
    return losses;
}

} // namespace

double accuracy(const ParameterSet& params, const ClassifierSpec& spec, const Dataset& d,
                const std::vector<std::size_t>& classes) {
    const auto rows = rows_with_labels(d, classes);
    if (rows.empty()) throw MetricError("accuracy: no samples in the requested class subset");
    const Tensor logits = classifier_logits(params, spec, take_rows(d.x, rows));
    const auto pred = argmax_rows(logits);
    std::size_t hit = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) hit += pred[i] == d.y[rows[i]] ? 1 : 0;
    return 100.0 * static_cast<double>(hit) / static_cast<double>(rows.size());
}

void RelearnConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("relearn alpha must be in (0, 1)");
    if (max_steps < 1) throw ConfigError("relearn max_steps must be >= 1");
    if (eval_every < 1) throw ConfigError("relearn eval_every must be >= 1");
    if (batch_size < 1) throw ConfigError("relearn batch_size must be >= 1");
    if (lr <= 0.0) throw ConfigError("relearn lr must be positive");
}

std::size_t relearn_steps(const ParameterSet& params, const ClassifierSpec& spec,
                          const Dataset& train_full, const Dataset& test, const LabelSplit& split,
                          double target_af, const RelearnConfig& config) {
    config.validate();
    const double target = (1.0 - config.alpha) * target_af;
    const Dataset test_f = restrict(test, split.forget());
    auto af_of = [&](const ParameterSet& p) {
        const auto pred = argmax_rows(classifier_logits(p, spec, test_f.x));
        std::size_t hit = 0;
        for (std::size_t i = 0; i < test_f.size(); ++i) hit += pred[i] == test_f.y[i] ? 1 : 0;
        return 100.0 * static_cast<double>(hit) / static_cast<double>(test_f.size());
    };

    ParameterSet model = params; // fine-tune a copy
    if (af_of(model) >= target) return 1; // already there; avoids a zero ratio

    Optimizer opt({OptimSpec::Kind::Sgd, config.lr, 0.9}, model);
    Rng rng(config.seed);
    std::vector<std::size_t> order(train_full.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);

    std::size_t cursor = 0;
    for (std::size_t step = 1; step <= config.max_steps; ++step) {
        if (cursor >= order.size()) {
            rng.shuffle(order);
            cursor = 0;
        }
        const std::size_t end = std::min(cursor + config.batch_size, order.size());
        std::vector<std::size_t> rows(order.begin() + cursor, order.begin() + end);
        cursor = end;
        Tensor xb = take_rows(train_full.x, rows);
        std::vector<std::size_t> yb;
        yb.reserve(rows.size());
        for (std::size_t r : rows) yb.push_back(train_full.y[r]);
        supervised_step(model, spec, opt, xb, yb);
        if (step % config.eval_every == 0 && af_of(model) >= target) return step;
    }
    return config.max_steps; // censored
}

double ain(const ParameterSet& unlearned, const ParameterSet& retrained,
           const ParameterSet& original, const ClassifierSpec& spec, const Dataset& train_full,
           const Dataset& test, const LabelSplit& split, const RelearnConfig& config) {
    const double original_af = accuracy(original, spec, test, split.forget());
    if (original_af <= 0.0) {
        throw MetricError("ain: the original model has zero forgetting-class accuracy");
    }
    const std::size_t rt_un =
        relearn_steps(unlearned, spec, train_full, test, split, original_af, config);
    const std::size_t rt_re =
        relearn_steps(retrained, spec, train_full, test, split, original_af, config);
    return static_cast<double>(rt_un) / static_cast<double>(rt_re);
}

MiaResult mia_i_from_losses(const std::vector<double>& forget_losses,
                            const std::vector<double>& member_losses,
                            const std::vector<double>& nonmember_losses) {
    if (forget_losses.empty() || member_losses.empty() || nonmember_losses.empty()) {
        throw MetricError("mia_i: empty loss population");
    }
    std::vector<double> fit;
    fit.reserve(member_losses.size() + nonmember_losses.size());
    fit.insert(fit.end(), member_losses.begin(), member_losses.end());
    fit.insert(fit.end(), nonmember_losses.begin(), nonmember_losses.end());
    std::sort(fit.begin(), fit.end());
    fit.erase(std::unique(fit.begin(), fit.end()), fit.end());
    if (fit.size() < 2) return {50.0, true}; // all scores equal, no threshold exists

    // predict member iff loss <= tau; tau maximizes balanced accuracy,
    // ties resolve to the largest tau
    double best_tau = 0.0;
    double best_ba = -1.0;
    for (std::size_t i = 0; i + 1 < fit.size(); ++i) {
        const double tau = 0.5 * (fit[i] + fit[i + 1]);
        std::size_t tp = 0, tn = 0;
        for (double v : member_losses) tp += v <= tau ? 1 : 0;
        for (double v : nonmember_losses) tn += v > tau ? 1 : 0;
        const double ba = 0.5 * (static_cast<double>(tp) / member_losses.size() +
                                 static_cast<double>(tn) / nonmember_losses.size());
        if (ba >= best_ba) {
            best_ba = ba;
            best_tau = tau;
        }
    }
    std::size_t out = 0;
    for (double v : forget_losses) out += v > best_tau ? 1 : 0;
    return {100.0 * static_cast<double>(out) / forget_losses.size(), false};
}

MiaResult mia_i(const ParameterSet& params, const ClassifierSpec& spec, const Dataset& d_f_train,
                const Dataset& d_r_train, const Dataset& d_r_test) {
    if (d_f_train.size() == 0 || d_r_train.size() == 0 || d_r_test.size() == 0) {
        throw MetricError("mia_i: empty split");
    }
    return mia_i_from_losses(per_sample_ce(params, spec, d_f_train),
                             per_sample_ce(params, spec, d_r_train),
                             per_sample_ce(params, spec, d_r_test));
}

namespace {

struct AttackSet {
    Tensor x;
    std::vector<std::size_t> y; // 1 = member
};

AttackSet collect_signals(const Tensor& probs, std::size_t label) {
    AttackSet s;
    s.x = probs;
    s.y.assign(probs.rows(), label);
    return s;
}

AttackSet concat(const AttackSet& a, const AttackSet& b) {
    AttackSet out;
    const std::size_t k = a.x.cols();
    out.x = Tensor({a.x.rows() + b.x.rows(), k});
    std::copy(a.x.data(), a.x.data() + a.x.size(), out.x.data());
    std::copy(b.x.data(), b.x.data() + b.x.size(), out.x.data() + a.x.size());
    out.y = a.y;
    out.y.insert(out.y.end(), b.y.begin(), b.y.end());
    return out;
}

} // namespace

MiaAttacker train_mia_attacker(const ClassifierSpec& spec, const Dataset& train,
                               const MiaIIConfig& config) {
    if (config.n_shadow < 2) throw ConfigError("mia_ii needs at least 2 shadow models");
    if (train.size() < 4) throw ConfigError("mia_ii: dataset too small to split");

    // shadow signals: each shadow trains on half the data, the other half is out
    std::vector<AttackSet> signals;
    for (std::size_t s = 0; s < config.n_shadow; ++s) {
        Rng split_rng(derive_seed(config.seed, s));
        std::vector<std::size_t> perm(train.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        split_rng.shuffle(perm);
        const std::size_t half = perm.size() / 2;
        std::vector<std::size_t> in_rows(perm.begin(), perm.begin() + half);
        std::vector<std::size_t> out_rows(perm.begin() + half, perm.begin() + 2 * half);

        Dataset in_set;
        in_set.x = take_rows(train.x, in_rows);
        for (std::size_t r : in_rows) in_set.y.push_back(train.y[r]);
        SupConfig shadow_cfg = config.shadow_train;
        shadow_cfg.seed = derive_seed(config.seed, 1000 + s);
        TeacherResult shadow = train_teacher(in_set, in_set, spec, shadow_cfg);

        const Tensor probs_in = softmax(classifier_logits(shadow.params, spec, in_set.x));
        Dataset out_set;
        out_set.x = take_rows(train.x, out_rows);
        const Tensor probs_out = softmax(classifier_logits(shadow.params, spec, out_set.x));
        signals.push_back(concat(collect_signals(probs_in, 1), collect_signals(probs_out, 0)));
    }
    AttackSet all = signals[0];
    for (std::size_t s = 1; s < signals.size(); ++s) all = concat(all, signals[s]);

    // attack MLP on softmax vectors, best-validation-iterate selection
    ClassifierSpec attack_spec{spec.num_classes, {16}, 2};
    Rng attack_rng(derive_seed(config.seed, 424242));
    ParameterSet attack = init_classifier(attack_spec, attack_rng);
    Optimizer opt({OptimSpec::Kind::Adam, 0.01}, attack);

    std::vector<std::size_t> order(all.y.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    attack_rng.shuffle(order);
    const std::size_t n_val = std::max<std::size_t>(1, order.size() / 10);
    std::vector<std::size_t> val_rows(order.end() - n_val, order.end());
    order.resize(order.size() - n_val);

    Tensor val_x = take_rows(all.x, val_rows);
    std::vector<std::size_t> val_y;
    for (std::size_t r : val_rows) val_y.push_back(all.y[r]);

    auto val_loss = [&](const ParameterSet& p) {
        const Tensor lp = log_softmax(classifier_logits(p, attack_spec, val_x));
        double s = 0.0;
        for (std::size_t i = 0; i < val_y.size(); ++i) s -= lp[i * 2 + val_y[i]];
        return s / static_cast<double>(val_y.size());
    };

    ParameterSet best = attack;
    double best_val = val_loss(attack);
    const std::size_t attack_epochs = 30, attack_batch = 64;
    for (std::size_t epoch = 0; epoch < attack_epochs; ++epoch) {
        attack_rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += attack_batch) {
            const std::size_t end = std::min(start + attack_batch, order.size());
            std::vector<std::size_t> rows(order.begin() + start, order.begin() + end);
            Tensor xb = take_rows(all.x, rows);
            std::vector<std::size_t> yb;
            for (std::size_t r : rows) yb.push_back(all.y[r]);
            supervised_step(attack, attack_spec, opt, xb, yb);
        }
        const double v = val_loss(attack);
        if (v < best_val) {
            best_val = v;
            best = attack;
        }
    }
    return MiaAttacker{attack_spec, std::move(best), config.seed};
}

double mia_ii_attack(const MiaAttacker& attacker, const ParameterSet& target,
                     const ClassifierSpec& spec, const Dataset& train, const Dataset& test) {
    // balanced member/non-member test set drawn from the target's world
    Rng pick_rng(derive_seed(attacker.seed, 31337));
    const std::size_t n_each = std::min(train.size(), test.size());
    auto pick = [&](const Dataset& d) {
        std::vector<std::size_t> idx(d.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        pick_rng.shuffle(idx);
        idx.resize(n_each);
        return take_rows(d.x, idx);
    };
    const Tensor member_probs = softmax(classifier_logits(target, spec, pick(train)));
    const Tensor nonmember_probs = softmax(classifier_logits(target, spec, pick(test)));

    const auto pred_m = argmax_rows(classifier_logits(attacker.params, attacker.spec, member_probs));
    const auto pred_n =
        argmax_rows(classifier_logits(attacker.params, attacker.spec, nonmember_probs));
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t p : pred_m) {
        tp += p == 1 ? 1 : 0;
        fn += p == 0 ? 1 : 0;
    }
    for (std::size_t p : pred_n) fp += p == 1 ? 1 : 0;
    if (2 * tp + fp + fn == 0) return 0.0;
    return 100.0 * 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

double mia_ii(const ParameterSet& target, const ClassifierSpec& spec, const Dataset& train,
              const Dataset& test, const MiaIIConfig& config) {
    return mia_ii_attack(train_mia_attacker(spec, train, config), target, spec, train, test);
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double population_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double mu = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return std::sqrt(s / static_cast<double>(v.size()));
}

std::vector<double> per_class_accuracy(const ParameterSet& params, const ClassifierSpec& spec,
                                       const Dataset& test) {
    std::vector<double> out;
    out.reserve(spec.num_classes);
    for (std::size_t c = 0; c < spec.num_classes; ++c) {
        out.push_back(accuracy(params, spec, test, {c}));
    }
    return out;
}

std::vector<ReportRow> assemble_report(const std::vector<RunMetrics>& runs) {
    std::vector<std::string> methods;
    for (const auto& r : runs) {
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
            methods.push_back(r.method);
        }
    }
    std::vector<ReportRow> rows;
    for (const auto& name : methods) {
        std::vector<double> af, ar, m1, m2, an;
        std::vector<double> per_class_sum;
        for (const auto& r : runs) {
            if (r.method != name) continue;
            af.push_back(r.a_f);
            ar.push_back(r.a_r);
            m1.push_back(r.mia_i);
            m2.push_back(r.mia_ii);
            an.push_back(r.ain);
            if (per_class_sum.size() < r.per_class.size()) {
                per_class_sum.resize(r.per_class.size(), 0.0);
            }
            for (std::size_t c = 0; c < r.per_class.size(); ++c) {
                per_class_sum[c] += r.per_class[c];
            }
        }
        ReportRow row;
        row.method = name;
        row.seed_count = af.size();
        row.per_class = std::move(per_class_sum);
        for (double& v : row.per_class) v /= static_cast<double>(af.size());
        row.a_f_mean = mean_of(af);
        row.a_f_std = population_std(af);
        row.a_r_mean = mean_of(ar);
        row.a_r_std = population_std(ar);
        row.mia_i = mean_of(m1);
        row.mia_ii = mean_of(m2);
        row.ain = mean_of(an);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace ulrn
