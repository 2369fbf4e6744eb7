// include/s2sae/errors.hpp
//
// Error taxonomy shared by the library and the CLI. Each class maps to a
// distinct process exit code (see tools/s2sae_main.cpp).

#ifndef S2SAE_ERRORS_HPP
#define S2SAE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace s2sae {

// Bad sizes, out-of-range settings, shape mismatches.
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& msg) : std::invalid_argument(msg) {}
};

class ShapeMismatch : public InvalidArgument {
 public:
  explicit ShapeMismatch(const std::string& msg) : InvalidArgument(msg) {}
};

// Signal shorter than one analysis window.
class TooShortSignal : public std::runtime_error {
 public:
  explicit TooShortSignal(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite samples, corrupt containers, values outside their domain.
class InvalidInput : public std::runtime_error {
 public:
  explicit InvalidInput(const std::string& msg) : std::runtime_error(msg) {}
};

// Missing or unreadable/unwritable files.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Manifest rows that do not parse or violate manifest invariants.
class ManifestError : public std::runtime_error {
 public:
  explicit ManifestError(const std::string& msg) : std::runtime_error(msg) {}
};

// Artifacts that do not fit together (checkpoint vs spectrogram, tap vs
// architecture, table id sequences, ...).
class ConfigMismatch : public std::runtime_error {
 public:
  explicit ConfigMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

// NaN loss or NaN gradients during optimisation.
class TrainingDiverged : public std::runtime_error {
 public:
  explicit TrainingDiverged(const std::string& msg) : std::runtime_error(msg) {}
};

// Spearman's rho on a constant vector.
class UndefinedCorrelation : public std::runtime_error {
 public:
  explicit UndefinedCorrelation(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace s2sae

#endif  // S2SAE_ERRORS_HPP
