#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "conekit/measures.hpp"

namespace conekit::detail {

struct OuterSample {
  std::vector<double> values;
  std::uint64_t inner_discarded = 0;
  std::uint64_t redraws = 0;
  bool violation = false;
};

struct OuterStats {
  std::vector<double> mean;
  std::vector<double> std_error;  // outer sd / sqrt(n)
  std::uint64_t inner_discarded = 0;
  std::uint64_t redraws = 0;
  std::uint64_t violations = 0;
};

/// Evaluates fn for r = 0..n-1, each on rs.substream(r), and reduces in
/// index order so the result does not depend on the worker count.
OuterStats over_draws(std::uint64_t n, std::size_t width, const RandomStream& rs, unsigned workers,
                      const std::function<OuterSample(RandomStream&)>& fn);

Estimate outer_estimate(const OuterStats& s, std::size_t j, std::uint64_t n, const RandomStream& rs);

}  // namespace conekit::detail
