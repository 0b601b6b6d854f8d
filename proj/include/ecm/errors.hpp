/// \file errors.hpp
/// \brief Exception types used across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace ecm {

/// Input violates a documented precondition or type invariant.
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mesh is unusable for slicing (non-watertight, empty, out-of-range plane).
class mesh_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fourier fit cannot be performed (rank deficiency, grid too small).
class fit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sample functions do not share a common grid.
class grid_mismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scenario or analysis configuration is unusable as stated.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A required input file does not exist or cannot be opened.
class missing_file : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ecm
