// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#include "ulrn/graph.hpp"

#include <cmath>

namespace ulrn {

std::size_t ParameterSet::add(std::string name, Tensor value) {
    if (index_.count(name)) throw ContractError("duplicate parameter name: " + name);
    Tensor grad(value.shape());
    const std::size_t i = entries_.size();
    index_.emplace(name, i);
    entries_.push_back(ParamEntry{std::move(name), std::move(value), std::move(grad)});
    return i;
}

std::size_t ParameterSet::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ContractError("unknown parameter name: " + name);
    return it->second;
}

void ParameterSet::zero_grads() {
    for (auto& e : entries_) std::fill(e.grad.values().begin(), e.grad.values().end(), 0.0);
}

NodeId Graph::push(Node node) {
    nodes_.push_back(std::move(node));
    return nodes_.size() - 1;
}

NodeId Graph::constant(Tensor value) {
    return push(Node{Op::Constant, 0, 0, 1.0, std::move(value)});
}

NodeId Graph::param(ParameterSet& params, const std::string& name) {
    const std::size_t idx = params.index_of(name);
    Node n{Op::Param, 0, 0, 1.0, params.entry(idx).value};
    n.params = &params;
    n.param_index = idx;
    return push(std::move(n));
}

NodeId Graph::matmul(NodeId a, NodeId b) {
    return push(Node{Op::MatMul, a, b, 1.0, ulrn::matmul(val(a), val(b))});
}

NodeId Graph::add(NodeId a, NodeId b) {
    const Tensor& ta = val(a);
    const Tensor& tb = val(b);
    if (ta.same_shape(tb)) return push(Node{Op::Add, a, b, 1.0, ulrn::add(ta, tb)});
    return push(Node{Op::AddBias, a, b, 1.0, ulrn::add_bias_row(ta, tb)});
}

NodeId Graph::sub(NodeId a, NodeId b) {
    return push(Node{Op::Sub, a, b, 1.0, ulrn::sub(val(a), val(b))});
}

NodeId Graph::mul(NodeId a, NodeId b) {
    return push(Node{Op::Mul, a, b, 1.0, ulrn::mul(val(a), val(b))});
}

NodeId Graph::affine(NodeId a, double scale, double shift) {
    Node n{Op::Affine, a, 0, scale, ulrn::affine(val(a), scale, shift)};
    return push(std::move(n));
}

NodeId Graph::relu(NodeId a) { return push(Node{Op::Relu, a, 0, 1.0, ulrn::relu(val(a))}); }
NodeId Graph::tanh(NodeId a) { return push(Node{Op::Tanh, a, 0, 1.0, ulrn::tanh(val(a))}); }
NodeId Graph::exp(NodeId a) { return push(Node{Op::Exp, a, 0, 1.0, ulrn::exp(val(a))}); }
NodeId Graph::log(NodeId a) { return push(Node{Op::Log, a, 0, 1.0, ulrn::log(val(a))}); }
NodeId Graph::xlogx(NodeId a) { return push(Node{Op::XLogX, a, 0, 1.0, ulrn::xlogx(val(a))}); }

NodeId Graph::log_softmax(NodeId a) {
    return push(Node{Op::LogSoftmax, a, 0, 1.0, ulrn::log_softmax(val(a))});
}

NodeId Graph::sum(NodeId a) {
    return push(Node{Op::Sum, a, 0, 1.0, Tensor::scalar(ulrn::sum(val(a)))});
}

NodeId Graph::mean_rows(NodeId a) {
    return push(Node{Op::MeanRows, a, 0, 1.0, ulrn::mean_rows(val(a))});
}

void Graph::backward(NodeId loss) {
    if (loss >= nodes_.size()) throw ContractError("backward: node id out of range");
    if (val(loss).size() != 1) {
        throw ContractError("backward: loss node must be scalar, got shape " +
                            val(loss).shape_str());
    }

    std::vector<Tensor> grads(nodes_.size());
    std::vector<char> live(nodes_.size(), 0);
    auto ensure = [&](NodeId id) -> Tensor& {
        if (!live[id]) {
            grads[id] = Tensor(val(id).shape());
            live[id] = 1;
        }
        return grads[id];
    };
    ensure(loss)[0] = 1.0;

    for (std::size_t idx = loss + 1; idx-- > 0;) {
        if (!live[idx]) continue;
        const Node& n = nodes_[idx];
        const Tensor& g = grads[idx];
        switch (n.op) {
        case Op::Constant:
            break;
        case Op::Param: {
            Tensor& dst = n.params->entry(n.param_index).grad;
            for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i];
            break;
        }
        case Op::MatMul: {
            Tensor& ga = ensure(n.a);
            Tensor& gb = ensure(n.b);
            const Tensor da = ulrn::matmul(g, transpose(val(n.b)));
            const Tensor db = ulrn::matmul(transpose(val(n.a)), g);
            for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += da[i];
            for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += db[i];
            break;
        }
        case Op::Add: {
            Tensor& ga = ensure(n.a);
            Tensor& gb = ensure(n.b);
            for (std::size_t i = 0; i < g.size(); ++i) {
                ga[i] += g[i];
                gb[i] += g[i];
            }
            break;
        }
        case Op::AddBias: {
            Tensor& ga = ensure(n.a);
            Tensor& gb = ensure(n.b);
            const std::size_t m = val(n.a).rows();
            const std::size_t c = val(n.a).cols();
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < c; ++j) {
                    ga[i * c + j] += g[i * c + j];
                    gb[j] += g[i * c + j];
                }
            }
            break;
        }
        case Op::Sub: {
            Tensor& ga = ensure(n.a);
            Tensor& gb = ensure(n.b);
            for (std::size_t i = 0; i < g.size(); ++i) {
                ga[i] += g[i];
                gb[i] -= g[i];
            }
            break;
        }
        case Op::Mul: {
            Tensor& ga = ensure(n.a);
            Tensor& gb = ensure(n.b);
            const Tensor& va = val(n.a);
            const Tensor& vb = val(n.b);
            for (std::size_t i = 0; i < g.size(); ++i) {
                ga[i] += g[i] * vb[i];
                gb[i] += g[i] * va[i];
            }
            break;
        }
        case Op::Affine: {
            Tensor& ga = ensure(n.a);
            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * n.scale;
            break;
        }
        case Op::Relu: {
            Tensor& ga = ensure(n.a);
            const Tensor& va = val(n.a);
            // gradient at exactly 0 is 0
            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += va[i] > 0.0 ? g[i] : 0.0;
            break;
        }
        case Op::Tanh: {
            Tensor& ga = ensure(n.a);
            const Tensor& y = n.value;
            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
            break;
        }
        case Op::Exp: {
            Tensor& ga = ensure(n.a);
            const Tensor& y = n.value;
            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i];
            break;
        }
        case Op::Log: {
            Tensor& ga = ensure(n.a);
            const Tensor& va = val(n.a);
            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] / va[i];
            break;
        }
        case Op::XLogX: {
            Tensor& ga = ensure(n.a);
            const Tensor& va = val(n.a);
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (va[i] != 0.0) ga[i] += g[i] * (std::log(va[i]) + 1.0);
            }
            break;
        }
        case Op::LogSoftmax: {
            Tensor& ga = ensure(n.a);
            const Tensor& y = n.value;
            const std::size_t m = y.rows(), k = y.cols();
            for (std::size_t i = 0; i < m; ++i) {
                double gsum = 0.0;
                for (std::size_t j = 0; j < k; ++j) gsum += g[i * k + j];
                for (std::size_t j = 0; j < k; ++j) {
                    ga[i * k + j] += g[i * k + j] - std::exp(y[i * k + j]) * gsum;
                }
            }
            break;
        }
        case Op::Sum: {
            Tensor& ga = ensure(n.a);
            const double gv = g[0];
            for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += gv;
            break;
        }
        case Op::MeanRows: {
            Tensor& ga = ensure(n.a);
            const std::size_t m = val(n.a).rows();
            const std::size_t c = val(n.a).cols();
            const double inv = 1.0 / static_cast<double>(m);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < c; ++j) ga[i * c + j] += g[j] * inv;
            break;
        }
        }
    }
}

} // namespace ulrn
