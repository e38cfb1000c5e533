#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <span>
#include <vector>

namespace ffpage {

/// Sets the number of worker threads used by every parallel loop in the
/// library. 0 selects the OpenMP default (one per hardware thread).
void set_thread_count(int threads);
[[nodiscard]] int thread_count();

/// Runs body(i) for i in [0, count) across the worker threads. Iterations must
/// write only to their own output slot; the first exception thrown by any
/// iteration is rethrown on the calling thread after the loop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) summation. The association order depends only on the
/// length of the input, so the result is bit-stable for a fixed input.
[[nodiscard]] double pairwise_sum(std::span<const double> values);

struct SampleSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased (n - 1) estimator; 0 for a single sample
  double stderr_mean = 0.0;
  /// Standard error of `variance`, from the fourth central moment.
  double stderr_variance = 0.0;
};

/// Two-pass mean/variance using pairwise sums.
[[nodiscard]] SampleSummary summarize(std::span<const double> values);

}  // namespace ffpage
