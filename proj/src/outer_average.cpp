#include "conekit/detail/outer_average.hpp"

#include <cmath>

#include "conekit/errors.hpp"
#include "conekit/parallel.hpp"

namespace conekit::detail {

OuterStats over_draws(std::uint64_t n, std::size_t width, const RandomStream& rs, unsigned workers,
                      const std::function<OuterSample(RandomStream&)>& fn) {
  if (n < 1) throw InvalidArgument("outer sample count must be >= 1");
  // Each draw owns its substream, so the chunking only affects scheduling.
  constexpr std::uint64_t kChunk = 64;
  std::vector<OuterSample> samples(n);
  parallel_for((n + kChunk - 1) / kChunk, workers, [&](std::uint64_t b) {
    const std::uint64_t end = std::min(n, (b + 1) * kChunk);
    for (std::uint64_t r = b * kChunk; r < end; ++r) {
      RandomStream sub = rs.substream(r);
      samples[r] = fn(sub);
    }
  });
  OuterStats s;
  s.mean.assign(width, 0.0);
  std::vector<double> m2(width, 0.0);
  std::uint64_t count = 0;
  for (const auto& smp : samples) {
    ++count;
    for (std::size_t j = 0; j < width; ++j) {
      const double delta = smp.values[j] - s.mean[j];
      s.mean[j] += delta / static_cast<double>(count);
      m2[j] += delta * (smp.values[j] - s.mean[j]);
    }
    s.inner_discarded += smp.inner_discarded;
    s.redraws += smp.redraws;
    if (smp.violation) ++s.violations;
  }
  s.std_error.assign(width, 0.0);
  if (n > 1)
    for (std::size_t j = 0; j < width; ++j)
      s.std_error[j] = std::sqrt(m2[j] / static_cast<double>(n - 1) / static_cast<double>(n));
  return s;
}

Estimate outer_estimate(const OuterStats& s, std::size_t j, std::uint64_t n, const RandomStream& rs) {
  Estimate e;
  e.value = s.mean[j];
  e.std_error = s.std_error[j];
  e.n_samples = n;
  e.seed = rs.seed();
  e.stream = rs.stream();
  return e;
}

}  // namespace conekit::detail
