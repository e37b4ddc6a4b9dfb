#include "contest/random.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace contest {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t index) {
  // Chain the key components through splitmix64 so nearby keys give unrelated states.
  std::uint64_t x = seed;
  x = splitmix64(x) ^ stream_id;
  x = splitmix64(x) ^ index;
  for (auto& word : s_) word = splitmix64(x);
}

std::size_t Stream::below(std::size_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t b = bound;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % b;
  std::uint64_t x = (*this)();
  while (x >= limit) x = (*this)();
  return static_cast<std::size_t>(x % b);
}

double Stream::gumbel() {
  double u = uniform();
  while (u <= 0.0) u = uniform();
  return -std::log(-std::log(u));
}

std::size_t worker_count() {
  if (const char* env = std::getenv("CONTEST_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : std::min<std::size_t>(hw, 16);
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Estimate summarize(std::span<const double> values) {
  if (values.empty()) return {};
  const double n = static_cast<double>(values.size());
  const double mean = pairwise_sum(values) / n;
  if (values.size() < 2) return {mean, 0.0};
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

}  // namespace contest
