// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ulrn {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tensor shape mismatch; the message names both shapes.
struct DimensionError : Error {
    using Error::Error;
};

/// Violated call contract (non-scalar loss, unnormalized probabilities, ...).
struct ContractError : Error {
    using Error::Error;
};

/// Invalid configuration value or unknown config key.
struct ConfigError : Error {
    using Error::Error;
};

/// Malformed binary or text input; the message names the offending offset or line.
struct FormatError : Error {
    using Error::Error;
};

/// A metric is undefined on the given inputs (empty class subset, A_f = 0, ...).
struct MetricError : Error {
    using Error::Error;
};

/// Training diverged (NaN loss); the message carries the step index.
struct TrainingError : Error {
    using Error::Error;
};

/// Filesystem-level failure with path context.
struct IoError : Error {
    using Error::Error;
};

} // namespace ulrn
