#pragma once

#include <stdexcept>
#include <string>

namespace swmac {

/// Invalid mesh or domain description.
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The time integration hit an unrecoverable state (negative height, NaN, ...).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace swmac
