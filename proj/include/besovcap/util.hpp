#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace besovcap {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  int n = 0;
};

/// Least-squares line through (x_i, y_i); rms_residual is the RMS of the fit residuals.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Deterministic draw of `count` distinct indices from {0,...,n-1}.
/// Uses its own arithmetic so results are identical across platforms.
std::vector<int> sample_indices(int n, int count, std::uint64_t seed);

/// Small xorshift-based generator for reproducible sampling.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next();
  /// uniform in [0,1)
  double next_double();
  /// uniform in {0,...,bound-1}
  std::uint64_t next_below(std::uint64_t bound);
};

/// Bounds the number of threads used by parallel_for (0 = hardware default).
void set_worker_count(int n);
int worker_count();

/// Chunked parallel loop over [begin,end). The body must only write to
/// per-index slots; chunking is fixed so results do not depend on the
/// worker count.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace besovcap
