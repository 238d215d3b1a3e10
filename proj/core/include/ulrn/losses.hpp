// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ulrn/graph.hpp"
#include "ulrn/labels.hpp"

namespace ulrn {

/// Scalar loss node plus its cached value.
struct LossValue {
    NodeId node;
    double value;
};

// All losses reduce with the batch MEAN so learning-rate semantics do not
// depend on batch size; the H_B diagnostic below is a SUM by definition.
// Natural logs throughout, and 0*ln(0) is taken as 0 by continuity.

/// Distillation loss for the student: mean KL(teacher || student). The
/// teacher rows are fixed probabilities (each summing to 1 within 1e-9);
/// gradient reaches whatever the student log-probs node depends on.
LossValue kd_loss(Graph& g, const Tensor& teacher_probs, NodeId student_log_probs);

/// Adversarial generator loss: exactly -kd_loss. The node overload routes
/// the gradient through the teacher forward as well, which is what drives
/// the generator toward regions where teacher and student disagree.
LossValue adv_loss(Graph& g, const Tensor& teacher_probs, NodeId student_log_probs);
LossValue adv_loss(Graph& g, NodeId teacher_log_probs, NodeId student_log_probs);

/// Inhibited-synthesis generator loss: the retaining-class KL terms keep the
/// adversarial sign while the forgetting-class terms flip, so chasing
/// teacher-confident forgetting regions is penalized instead of rewarded.
/// With an empty forgetting set this is adv_loss exactly.
LossValue is_loss(Graph& g, const Tensor& teacher_probs, NodeId student_log_probs,
                  const LabelSplit& split);
LossValue is_loss(Graph& g, NodeId teacher_log_probs, NodeId student_log_probs,
                  const LabelSplit& split);

/// Logit redistribution: per row, the forgetting logits drop to the row
/// minimum and the removed mass spreads evenly over the retaining logits.
/// Row sums are preserved and every forgetting logit ends up at the row min.
Tensor redistribute_logits(const Tensor& logits, const LabelSplit& split);

/// Student loss against redistributed teacher logits:
/// kd_loss(softmax(redistribute_logits(t)), student).
LossValue postfilter_kd_loss(Graph& g, const Tensor& teacher_logits, NodeId student_log_probs,
                             const LabelSplit& split);

/// Probability-distribution target: zero out forgetting entries and
/// renormalize the retaining entries per row.
Tensor pd_target(const Tensor& teacher_probs, const LabelSplit& split);

/// Optional generator regularizer: negative entropy of the batch-mean
/// teacher distribution, minimized when synthesis is class balanced.
LossValue balance_loss(Graph& g, NodeId teacher_log_probs);

/// H_B: summed Shannon entropy of the retaining-class teacher probabilities
/// over every sample involved in distillation. The row-selection overload
/// serves filtered batches; an empty selection yields 0.
double batch_retaining_entropy(const Tensor& teacher_probs, const LabelSplit& split);
double batch_retaining_entropy(const Tensor& teacher_probs, const LabelSplit& split,
                               const std::vector<std::size_t>& rows);

} // namespace ulrn
