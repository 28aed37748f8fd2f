#pragma once

#include <stdexcept>

namespace chw {

// Dense constructions refuse levels above the capacity cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A structural precondition failed: no row bijection, ambiguous rows, input
// outside an exact-arithmetic domain.
class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Signal or schedule file contents could not be parsed or failed validation.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem-level read/write failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Worker pool could not be brought up.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chw
