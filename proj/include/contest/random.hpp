#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace contest {

/// Counter-addressed random stream.
///
/// A stream is keyed by (seed, stream id, index); two streams with the same key
/// produce identical sequences. The key is hashed with splitmix64 into the state of a
/// xoshiro256** generator, so opening a stream per replication is cheap. Simulations give every replication its own key so
/// results do not depend on evaluation order or worker count, and so that paired
/// comparisons reuse the same draws (common random numbers).
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t seed, std::uint64_t stream_id = 0, std::uint64_t index = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  // xoshiro256** step.
  result_type operator()() {
    const result_type out = rotl(s_[1] * 5, 7) * 9;
    const result_type t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return out;
  }

  // Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound).
  std::size_t below(std::size_t bound);

  // Standard Gumbel variate.
  double gumbel();

 private:
  static constexpr result_type rotl(result_type x, int k) { return (x << k) | (x >> (64 - k)); }
  result_type s_[4];
};

/// Replication plan for Monte Carlo estimators.
struct SimulationPlan {
  std::size_t reps = 10000;
  std::uint64_t seed = 1;
  std::uint64_t stream_id = 0;

  Stream stream_for(std::size_t rep) const { return Stream(seed, stream_id, rep); }
  SimulationPlan with_stream(std::uint64_t id) const { return {reps, seed, id}; }
};

/// Mean with its Monte Carlo standard error.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Worker count for replication fan-out; CONTEST_WORKERS overrides the hardware default.
std::size_t worker_count();

// Summation by recursive halving: the result depends only on the order of `values`.
double pairwise_sum(std::span<const double> values);

Estimate summarize(std::span<const double> values);

/// Runs fn(i) for i in [0, count), split into contiguous chunks across workers.
/// Callers write results into per-index slots, so outputs are scheduling-independent.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(1, count / 256));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
}

}  // namespace contest
