#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace carnot {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
  /// Wall-clock budget; exceeding it fails the criterion.
  double budget = 0;
};

/// Runs criteria 1-10 with all randomness derived from `seed`. The callback
/// (if any) sees each result as soon as it is available.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// One line per criterion; timings included only on request so that the
/// report is byte-reproducible.
std::string format_result(const CriterionResult& r, bool with_timing);

}  // namespace carnot
