#pragma once

#include <stdexcept>
#include <string>

namespace asrnn {

// Bad shapes, bad op arguments, malformed requests against the graph.
struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// Domain violations of a pointwise op (log of a nonpositive value, tau <= 0).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Misuse of an API contract (backward on a non-scalar, empty dataset).
struct UsageError : std::logic_error {
  explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

// Invalid run configuration, detected before any training step.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable or malformed data files.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite losses or gradients during optimization.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace asrnn
