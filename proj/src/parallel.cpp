#include "ffpage/parallel.hpp"

#include <omp.h>

#include <cmath>
#include <mutex>

#include "ffpage/error.hpp"

namespace ffpage {
namespace {

int g_threads = 0;

double pairwise_sum_impl(const double* data, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, n - half);
}

}  // namespace

void set_thread_count(int threads) {
  detail::require(threads >= 0, "thread count must be >= 0");
  g_threads = threads;
}

int thread_count() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
  for (long long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_impl(values.data(), values.size());
}

SampleSummary summarize(std::span<const double> values) {
  SampleSummary out;
  out.count = values.size();
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = pairwise_sum(values) / n;
  if (values.size() < 2) return out;

  std::vector<double> sq(values.size());
  std::vector<double> quart(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - out.mean;
    sq[i] = d * d;
    quart[i] = sq[i] * sq[i];
  }
  const double m2 = pairwise_sum(sq) / n;
  const double m4 = pairwise_sum(quart) / n;
  out.variance = m2 * n / (n - 1.0);
  out.stderr_mean = std::sqrt(out.variance / n);
  // Var(s^2) ~ (mu4 - mu2^2 (n-3)/(n-1)) / n
  const double var_of_var = (m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n;
  out.stderr_variance = std::sqrt(std::max(var_of_var, 0.0));
  return out;
}

}  // namespace ffpage
