#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "andrews3d/export.hpp"

namespace andrews3d {

struct ValidationOptions {
  std::string suite = "all";  // all | andrews | bishop | gauss
  std::vector<int> d_list;    // empty selects per-suite defaults
  std::uint64_t seed = 7;
  unsigned threads = 1;
};

inline constexpr std::uint64_t kDefaultSeed = 7;

/// Runs the named property suites. Output is a pure function of the options.
std::vector<CheckOutcome> run_validation(const ValidationOptions& options);

/// One "PASS name detail" / "FAIL name detail" line per check plus a summary.
std::string format_validation_table(const std::vector<CheckOutcome>& checks);

}  // namespace andrews3d
