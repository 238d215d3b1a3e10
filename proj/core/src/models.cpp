// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#include "ulrn/models.hpp"

#include <cmath>
#include <string>

#include "ulrn/error.hpp"

namespace ulrn {

namespace {

std::vector<std::size_t> layer_dims(std::size_t in, const std::vector<std::size_t>& hidden,
                                    std::size_t out) {
    std::vector<std::size_t> dims;
    dims.push_back(in);
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(out);
    return dims;
}

ParameterSet init_mlp(const std::vector<std::size_t>& dims, Rng& rng) {
    ParameterSet ps;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const std::size_t fan_in = dims[l];
        const std::size_t fan_out = dims[l + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        Tensor w({fan_in, fan_out});
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = rng.next_uniform(-bound, bound);
        ps.add("w" + std::to_string(l), std::move(w));
        ps.add("b" + std::to_string(l), Tensor({1, fan_out}));
    }
    return ps;
}

std::size_t mlp_layer_count(const ParameterSet& ps) { return ps.size() / 2; }

// trainable == nullptr inserts the weights as constants (frozen network).
NodeId mlp_forward(Graph& g, const ParameterSet& params, ParameterSet* trainable, NodeId x) {
    const std::size_t layers = mlp_layer_count(params);
    NodeId h = x;
    for (std::size_t l = 0; l < layers; ++l) {
        const std::string li = std::to_string(l);
        auto leaf = [&](const std::string& name) {
            return trainable ? g.param(*trainable, name) : g.constant(params.at(name).value);
        };
        h = g.add(g.matmul(h, leaf("w" + li)), leaf("b" + li));
        if (l + 1 < layers) h = g.relu(h);
    }
    return h;
}

} // namespace

void ClassifierSpec::validate() const {
    if (num_classes < 2) throw ConfigError("classifier needs at least 2 classes");
    if (input_dim < 1) throw ConfigError("classifier input_dim must be at least 1");
    for (std::size_t h : hidden) {
        if (h < 1) throw ConfigError("classifier hidden dims must be at least 1");
    }
}

void GeneratorSpec::validate() const {
    if (noise_dim < 1) throw ConfigError("generator noise_dim must be at least 1");
    if (output_dim < 1) throw ConfigError("generator output_dim must be at least 1");
    if (!(lo < hi)) throw ConfigError("generator output range needs lo < hi");
    for (std::size_t h : hidden) {
        if (h < 1) throw ConfigError("generator hidden dims must be at least 1");
    }
}

ParameterSet init_classifier(const ClassifierSpec& spec, Rng& rng) {
    spec.validate();
    return init_mlp(layer_dims(spec.input_dim, spec.hidden, spec.num_classes), rng);
}

ParameterSet init_generator(const GeneratorSpec& spec, Rng& rng) {
    spec.validate();
    return init_mlp(layer_dims(spec.noise_dim, spec.hidden, spec.output_dim), rng);
}

NodeId classifier_logits(Graph& g, ParameterSet& params, const ClassifierSpec& spec, NodeId x,
                         bool trainable) {
    if (g.value(x).cols() != spec.input_dim) {
        throw DimensionError("classifier input has " + std::to_string(g.value(x).cols()) +
                             " features, spec expects " + std::to_string(spec.input_dim));
    }
    return mlp_forward(g, params, trainable ? &params : nullptr, x);
}

NodeId classifier_logits(Graph& g, const ParameterSet& params, const ClassifierSpec& spec,
                         NodeId x) {
    if (g.value(x).cols() != spec.input_dim) {
        throw DimensionError("classifier input has " + std::to_string(g.value(x).cols()) +
                             " features, spec expects " + std::to_string(spec.input_dim));
    }
    return mlp_forward(g, params, nullptr, x);
}

NodeId generate(Graph& g, ParameterSet& params, const GeneratorSpec& spec, NodeId z,
                bool trainable) {
    if (g.value(z).cols() != spec.noise_dim) {
        throw DimensionError("generator noise has " + std::to_string(g.value(z).cols()) +
                             " dims, spec expects " + std::to_string(spec.noise_dim));
    }
    NodeId a = mlp_forward(g, params, trainable ? &params : nullptr, z);
    // lo + (hi - lo) * (tanh(a) + 1) / 2
    const double half_span = 0.5 * (spec.hi - spec.lo);
    const double mid = 0.5 * (spec.hi + spec.lo);
    return g.affine(g.tanh(a), half_span, mid);
}

Tensor classifier_logits(const ParameterSet& params, const ClassifierSpec& spec, const Tensor& x) {
    if (x.cols() != spec.input_dim) {
        throw DimensionError("classifier input has " + std::to_string(x.cols()) +
                             " features, spec expects " + std::to_string(spec.input_dim));
    }
    Graph g;
    return g.value(mlp_forward(g, params, nullptr, g.constant(x)));
}

Tensor generate(const ParameterSet& params, const GeneratorSpec& spec, const Tensor& z) {
    if (z.cols() != spec.noise_dim) {
        throw DimensionError("generator noise has " + std::to_string(z.cols()) +
                             " dims, spec expects " + std::to_string(spec.noise_dim));
    }
    Graph g;
    NodeId a = mlp_forward(g, params, nullptr, g.constant(z));
    return g.value(g.affine(g.tanh(a), 0.5 * (spec.hi - spec.lo), 0.5 * (spec.hi + spec.lo)));
}

Tensor sample_noise(Rng& rng, std::size_t m, std::size_t noise_dim) {
    if (m < 1) throw ContractError("sample_noise: batch must be at least 1");
    Tensor z({m, noise_dim});
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = rng.next_normal();
    return z;
}

ClassifierSpec infer_classifier_spec(const ParameterSet& params) {
    const std::size_t layers = mlp_layer_count(params);
    if (layers == 0 || params.size() != 2 * layers) {
        throw FormatError("parameter set is not an MLP checkpoint (expects w0,b0,w1,b1,...)");
    }
    ClassifierSpec spec;
    spec.input_dim = params.at("w0").value.rows();
    for (std::size_t l = 0; l + 1 < layers; ++l) {
        spec.hidden.push_back(params.at("w" + std::to_string(l)).value.cols());
    }
    spec.num_classes = params.at("w" + std::to_string(layers - 1)).value.cols();
    return spec;
}

} // namespace ulrn
