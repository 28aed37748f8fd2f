#pragma once

#include <cstdint>

namespace chw {

// Running operation counts.  Additions and subtractions both count as one
// addition; scaling multiplications are tracked separately.  Transforms take
// an optional tally pointer; passing nullptr disables counting entirely, so a
// benchmark pass costs nothing.  A tally is owned by one call chain at a time;
// parallel tasks each use their own and totals are summed after joining.
struct OpTally {
  std::uint64_t additions = 0;
  std::uint64_t multiplications = 0;

  void reset() {
    additions = 0;
    multiplications = 0;
  }

  friend bool operator==(const OpTally&, const OpTally&) = default;
};

}  // namespace chw
