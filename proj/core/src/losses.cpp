// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#include "ulrn/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ulrn {

LabelSplit::LabelSplit(std::size_t num_classes, std::vector<std::size_t> forget)
    : num_classes_(num_classes), forget_(std::move(forget)) {
    if (num_classes_ < 2) throw ContractError("label split needs at least 2 classes");
    std::sort(forget_.begin(), forget_.end());
    forget_.erase(std::unique(forget_.begin(), forget_.end()), forget_.end());
    for (std::size_t k : forget_) {
        if (k >= num_classes_) {
            throw ContractError("forgetting class " + std::to_string(k) + " out of range for K=" +
                                std::to_string(num_classes_));
        }
    }
    if (forget_.size() == num_classes_) {
        throw ContractError("cannot unlearn every class: the retaining set would be empty");
    }
    mask_.assign(num_classes_, 0);
    for (std::size_t k : forget_) mask_[k] = 1;
    for (std::size_t k = 0; k < num_classes_; ++k) {
        if (!mask_[k]) retain_.push_back(k);
    }
}

namespace {

void check_probability_rows(const Tensor& probs) {
    const std::size_t m = probs.rows(), k = probs.cols();
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double v = probs[i * k + j];
            if (v < 0.0) {
                throw ContractError("probability row " + std::to_string(i) +
                                    " has a negative entry");
            }
            s += v;
        }
        if (std::abs(s - 1.0) > 1e-9) {
            throw ContractError("probability row " + std::to_string(i) + " sums to " +
                                std::to_string(s) + ", expected 1");
        }
    }
}

void check_rows_match(const Tensor& teacher, const Tensor& student) {
    if (!teacher.same_shape(student)) {
        throw DimensionError("teacher/student shapes disagree: " + teacher.shape_str() + " vs " +
                             student.shape_str());
    }
}

// ln(T) with the 0*ln(0) convention folded in: entries where T is 0 read 0,
// so the later product with T contributes exactly 0.
Tensor safe_log(const Tensor& probs) {
    Tensor out(probs.shape());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        out[i] = probs[i] == 0.0 ? 0.0 : std::log(probs[i]);
    }
    return out;
}

// mean over the batch of sum_k P_k * d_k, optionally sign-masked per class.
// Every loss in this file funnels through here so the exact-negation and
// empty-forget-set identities hold bit for bit.
LossValue masked_mean_kl(Graph& g, NodeId probs, NodeId diff, const LabelSplit* split) {
    NodeId prod = g.mul(probs, diff);
    if (split) {
        const std::size_t m = g.value(prod).rows();
        const std::size_t k = g.value(prod).cols();
        Tensor signs({m, k});
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < k; ++j)
                signs[i * k + j] = split->is_forget(j) ? 1.0 : -1.0;
        prod = g.mul(prod, g.constant(std::move(signs)));
    }
    const double inv_m = 1.0 / static_cast<double>(g.value(prod).rows());
    NodeId node = g.affine(g.sum(prod), inv_m, 0.0);
    return {node, g.value(node)[0]};
}

LossValue kd_core(Graph& g, const Tensor& teacher_probs, NodeId student_log_probs) {
    check_rows_match(teacher_probs, g.value(student_log_probs));
    check_probability_rows(teacher_probs);
    NodeId log_t = g.constant(safe_log(teacher_probs));
    NodeId diff = g.sub(log_t, student_log_probs);
    return masked_mean_kl(g, g.constant(teacher_probs), diff, nullptr);
}

} // namespace

LossValue kd_loss(Graph& g, const Tensor& teacher_probs, NodeId student_log_probs) {
    return kd_core(g, teacher_probs, student_log_probs);
}

LossValue adv_loss(Graph& g, const Tensor& teacher_probs, NodeId student_log_probs) {
    LossValue kd = kd_core(g, teacher_probs, student_log_probs);
    NodeId node = g.scale(kd.node, -1.0);
    return {node, g.value(node)[0]};
}

LossValue adv_loss(Graph& g, NodeId teacher_log_probs, NodeId student_log_probs) {
    check_rows_match(g.value(teacher_log_probs), g.value(student_log_probs));
    NodeId diff = g.sub(teacher_log_probs, student_log_probs);
    LossValue kd = masked_mean_kl(g, g.exp(teacher_log_probs), diff, nullptr);
    NodeId node = g.scale(kd.node, -1.0);
    return {node, g.value(node)[0]};
}

LossValue is_loss(Graph& g, const Tensor& teacher_probs, NodeId student_log_probs,
                  const LabelSplit& split) {
    check_rows_match(teacher_probs, g.value(student_log_probs));
    check_probability_rows(teacher_probs);
    NodeId diff = g.sub(g.constant(safe_log(teacher_probs)), student_log_probs);
    return masked_mean_kl(g, g.constant(teacher_probs), diff, &split);
}

LossValue is_loss(Graph& g, NodeId teacher_log_probs, NodeId student_log_probs,
                  const LabelSplit& split) {
    check_rows_match(g.value(teacher_log_probs), g.value(student_log_probs));
    NodeId diff = g.sub(teacher_log_probs, student_log_probs);
    return masked_mean_kl(g, g.exp(teacher_log_probs), diff, &split);
}

Tensor redistribute_logits(const Tensor& logits, const LabelSplit& split) {
    const std::size_t m = logits.rows(), k = logits.cols();
    if (k != split.num_classes()) {
        throw DimensionError("redistribute_logits: " + std::to_string(k) +
                             " columns vs K=" + std::to_string(split.num_classes()));
    }
    if (split.retain_count() == 0) {
        throw ContractError("redistribute_logits: no retaining classes to receive mass");
    }
    Tensor out(logits.shape());
    const double denom = static_cast<double>(split.retain_count());
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = logits.data() + i * k;
        double mn = row[0];
        for (std::size_t j = 1; j < k; ++j) mn = std::min(mn, row[j]);
        double delta = 0.0;
        for (std::size_t f : split.forget()) delta += row[f] - mn;
        const double share = delta / denom;
        for (std::size_t j = 0; j < k; ++j) {
            out[i * k + j] = split.is_forget(j) ? mn : row[j] + share;
        }
    }
    return out;
}

LossValue postfilter_kd_loss(Graph& g, const Tensor& teacher_logits, NodeId student_log_probs,
                             const LabelSplit& split) {
    return kd_loss(g, softmax(redistribute_logits(teacher_logits, split)), student_log_probs);
}

Tensor pd_target(const Tensor& teacher_probs, const LabelSplit& split) {
    const std::size_t m = teacher_probs.rows(), k = teacher_probs.cols();
    if (k != split.num_classes()) {
        throw DimensionError("pd_target: " + std::to_string(k) +
                             " columns vs K=" + std::to_string(split.num_classes()));
    }
    check_probability_rows(teacher_probs);
    Tensor out(teacher_probs.shape());
    for (std::size_t i = 0; i < m; ++i) {
        double retain_mass = 0.0;
        for (std::size_t r : split.retain()) retain_mass += teacher_probs[i * k + r];
        if (retain_mass <= 1e-12) {
            throw ContractError("pd_target: row " + std::to_string(i) +
                                " has no retaining probability mass");
        }
        for (std::size_t j = 0; j < k; ++j) {
            out[i * k + j] = split.is_forget(j) ? 0.0 : teacher_probs[i * k + j] / retain_mass;
        }
    }
    return out;
}

LossValue balance_loss(Graph& g, NodeId teacher_log_probs) {
    NodeId probs = g.exp(teacher_log_probs);
    NodeId node = g.sum(g.xlogx(g.mean_rows(probs)));
    return {node, g.value(node)[0]};
}

double batch_retaining_entropy(const Tensor& teacher_probs, const LabelSplit& split,
                               const std::vector<std::size_t>& rows) {
    const std::size_t k = teacher_probs.cols();
    if (k != split.num_classes()) {
        throw DimensionError("batch_retaining_entropy: " + std::to_string(k) +
                             " columns vs K=" + std::to_string(split.num_classes()));
    }
    double h = 0.0;
    for (std::size_t i : rows) {
        for (std::size_t r : split.retain()) {
            const double p = teacher_probs[i * k + r];
            if (p > 0.0) h -= p * std::log(p);
        }
    }
    return h;
}

double batch_retaining_entropy(const Tensor& teacher_probs, const LabelSplit& split) {
    std::vector<std::size_t> all(teacher_probs.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return batch_retaining_entropy(teacher_probs, split, all);
}

} // namespace ulrn
