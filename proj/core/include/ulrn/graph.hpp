// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ulrn/params.hpp"
#include "ulrn/tensor.hpp"

namespace ulrn {

using NodeId = std::size_t;

/// Reverse-mode autodiff tape.
///
/// Operations are recorded in topological order; backward() walks the tape
/// once in reverse and accumulates gradients into the ParameterSet entries
/// referenced by param() leaves. Constants never receive gradients, so the
/// caller controls gradient routing by choosing which leaves are parameters.
///
/// A Graph is intended to be built fresh per training step and is strictly
/// single-threaded; node values are immutable once recorded.
class Graph {
public:
    NodeId constant(Tensor value);
    NodeId param(ParameterSet& params, const std::string& name);

    NodeId matmul(NodeId a, NodeId b);
    /// Elementwise add; also accepts a 1xN bias row against an MxN left side.
    NodeId add(NodeId a, NodeId b);
    NodeId sub(NodeId a, NodeId b);
    NodeId mul(NodeId a, NodeId b);
    /// scale * a + shift, elementwise with scalar coefficients.
    NodeId affine(NodeId a, double scale, double shift);
    NodeId scale(NodeId a, double factor) { return affine(a, factor, 0.0); }
    NodeId relu(NodeId a);
    NodeId tanh(NodeId a);
    NodeId exp(NodeId a);
    NodeId log(NodeId a);
    /// x * ln(x) elementwise; gradient at exactly 0 is 0, like relu.
    NodeId xlogx(NodeId a);
    NodeId log_softmax(NodeId a);
    /// Full reduction to a scalar of shape {1}.
    NodeId sum(NodeId a);
    /// MxN -> 1xN column means.
    NodeId mean_rows(NodeId a);

    const Tensor& value(NodeId id) const { return nodes_[id].value; }
    std::size_t node_count() const { return nodes_.size(); }

    /// Accumulates d(loss)/d(param) into every parameter leaf reachable from
    /// the scalar loss node. Repeated calls accumulate further; callers reset
    /// with ParameterSet::zero_grads().
    void backward(NodeId loss);

private:
    enum class Op {
        Constant,
        Param,
        MatMul,
        Add,
        AddBias,
        Sub,
        Mul,
        Affine,
        Relu,
        Tanh,
        Exp,
        Log,
        XLogX,
        LogSoftmax,
        Sum,
        MeanRows,
    };

    struct Node {
        Op op;
        NodeId a = 0;
        NodeId b = 0;
        double scale = 1.0;
        Tensor value;
        ParameterSet* params = nullptr;
        std::size_t param_index = 0;
    };

    NodeId push(Node node);
    const Tensor& val(NodeId id) const { return nodes_[id].value; }

    std::vector<Node> nodes_;
};

} // namespace ulrn
