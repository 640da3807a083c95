#pragma once

#include <stdexcept>
#include <string>

namespace ogp {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument values: empty inputs, mismatched lengths, invalid ratios.
struct ArgumentError : Error {
  using Error::Error;
};

// Vector/matrix dimension mismatch.
struct ShapeError : Error {
  using Error::Error;
};

// Non-finite values or probabilities outside [0,1].
struct NumericError : Error {
  using Error::Error;
};

// Non-finite coordinate passed to a grid mapping.
struct InvalidCoordinateError : Error {
  using Error::Error;
};

// Grid index outside the geometry.
struct IndexError : Error {
  using Error::Error;
};

// Occupancy maps with incompatible geometries cannot be fused.
struct FusionError : Error {
  using Error::Error;
};

// Occupancy map with zero in-grid mass cannot be renormalized.
struct DegenerateMapError : Error {
  using Error::Error;
};

// Tape/parameter mismatch in the backward pass.
struct StateError : Error {
  using Error::Error;
};

// Kalman covariance lost positive definiteness.
struct FilterDivergenceError : Error {
  using Error::Error;
};

// Invalid scenario or training configuration.
struct ConfigError : Error {
  using Error::Error;
};

// Malformed input line; message carries the line number.
struct ParseError : Error {
  using Error::Error;
};

// Structurally valid line with a missing or mistyped field.
struct SchemaError : Error {
  using Error::Error;
};

// Checkpoint load failures, one subclass per failure mode.
struct CheckpointError : Error {
  using Error::Error;
};
struct CheckpointVersionError : CheckpointError {
  using CheckpointError::CheckpointError;
};
struct CheckpointShapeError : CheckpointError {
  using CheckpointError::CheckpointError;
};
struct CheckpointTruncatedError : CheckpointError {
  using CheckpointError::CheckpointError;
};
struct CheckpointChecksumError : CheckpointError {
  using CheckpointError::CheckpointError;
};

// Command-line misuse; maps to exit code 2.
struct UsageError : Error {
  using Error::Error;
};

}  // namespace ogp
