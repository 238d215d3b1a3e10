// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "ulrn/graph.hpp"
#include "ulrn/rng.hpp"

namespace ulrn {

/// MLP classifier: input -> hidden (relu) ... -> num_classes raw logits.
struct ClassifierSpec {
    std::size_t input_dim = 0;
    std::vector<std::size_t> hidden;
    std::size_t num_classes = 0;

    void validate() const;
};

/// MLP generator: noise -> hidden (relu) ... -> output_dim, final tanh
/// rescaled so every output lands in [lo, hi].
struct GeneratorSpec {
    std::size_t noise_dim = 0;
    std::vector<std::size_t> hidden;
    std::size_t output_dim = 0;
    double lo = -1.0;
    double hi = 1.0;

    void validate() const;
};

/// Glorot-uniform weights, zero biases; parameter names are w0,b0,w1,b1,...
/// in layer order, which fixes the checkpoint serialization order.
ParameterSet init_classifier(const ClassifierSpec& spec, Rng& rng);
ParameterSet init_generator(const GeneratorSpec& spec, Rng& rng);

/// Forward pass on the tape. `trainable` decides whether the network's
/// parameters enter the graph as gradient-receiving leaves or as constants;
/// frozen teachers and the student during generator updates use false.
NodeId classifier_logits(Graph& g, ParameterSet& params, const ClassifierSpec& spec, NodeId x,
                         bool trainable);
NodeId generate(Graph& g, ParameterSet& params, const GeneratorSpec& spec, NodeId z,
                bool trainable);

/// Frozen forward pass on the tape: the weights enter as constants, so the
/// gradient flows through the input only. This is how a fixed network still
/// steers the generator.
NodeId classifier_logits(Graph& g, const ParameterSet& params, const ClassifierSpec& spec,
                         NodeId x);

/// Plain value-mode forward passes for inference paths.
Tensor classifier_logits(const ParameterSet& params, const ClassifierSpec& spec, const Tensor& x);
Tensor generate(const ParameterSet& params, const GeneratorSpec& spec, const Tensor& z);

/// m x d_z batch of i.i.d. standard normal noise.
Tensor sample_noise(Rng& rng, std::size_t m, std::size_t noise_dim);

/// Recovers the classifier architecture from a w0,b0,... parameter set,
/// used when loading checkpoints that carry no separate descriptor.
ClassifierSpec infer_classifier_spec(const ParameterSet& params);

} // namespace ulrn
