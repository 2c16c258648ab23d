#pragma once

// Seeded samplers and Monte Carlo density estimation with Wilson intervals.
// Samples are drawn in fixed-size batches; batch b uses its own generator
// seeded with mix(master_seed, b), so results never depend on threading.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "randeq/abelian_eq.hpp"
#include "randeq/equation_space.hpp"
#include "randeq/parallel.hpp"

namespace randeq::harness {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kBatchSize = 1024;
inline constexpr double kZ95 = 1.959963984540054;

/// splitmix64 finalizer applied to master + (index + 1) * golden gamma.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline Int uniform_int(Rng& rng, Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng); }

/// Uniform over the ball: infinite coordinates on [-r, r], finite order w
/// on {0..min(w-1, r)}.
inline pc::NilpotentEquation sample_equation(const pc::EquationSpace& space, Int r, Rng& rng) {
  if (r < 0) throw PreconditionError("sample_equation: r must be >= 0");
  pc::NilpotentEquation eq = space.trivial_equation();
  for (auto& g : eq.gamma) g = uniform_int(rng, -r, r);
  for (std::size_t s = 0; s < eq.delta.size(); ++s) {
    const auto& t = space.tail()[s];
    eq.delta[s] = t.infinite() ? uniform_int(rng, -r, r) : uniform_int(rng, 0, std::min<Int>(t.order - 1, r));
  }
  return eq;
}

inline abelian::Equation sample_abelian_equation(unsigned k, unsigned m, Int r, Rng& rng) {
  if (r < 0) throw PreconditionError("sample_abelian_equation: r must be >= 0");
  abelian::Equation eq{std::vector<Int>(k), std::vector<Int>(m)};
  for (auto& g : eq.gamma) g = uniform_int(rng, -r, r);
  for (auto& a : eq.alpha) a = uniform_int(rng, -r, r);
  return eq;
}

struct DensityEstimate {
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  double point = 0;
  double ci_low = 0;
  double ci_high = 0;
  std::uint64_t seed = 0;
  Int r = 0;

  double sigma() const { return total == 0 ? 0.0 : std::sqrt(point * (1 - point) / static_cast<double>(total)); }
  bool contains(double x) const { return ci_low <= x && x <= ci_high; }
};

inline DensityEstimate wilson(std::uint64_t hits, std::uint64_t total, double z = kZ95) {
  if (total == 0) throw PreconditionError("wilson: total must be >= 1");
  if (hits > total) throw PreconditionError("wilson: hits exceed total");
  DensityEstimate e;
  e.hits = hits;
  e.total = total;
  const double n = static_cast<double>(total);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  e.point = p;
  e.ci_low = std::min(p, std::max(0.0, center - half));
  e.ci_high = std::max(p, std::min(1.0, center + half));
  return e;
}

/// Counts, for each of N predicates, how many of n_samples draws satisfy it.
/// fn(rng) -> std::array<bool, N>.
template <std::size_t N, typename Fn>
std::array<std::uint64_t, N> mc_counts(std::uint64_t n_samples, std::uint64_t seed, unsigned threads, Fn&& fn) {
  if (n_samples < 1) throw PreconditionError("mc: n_samples must be >= 1");
  const std::uint64_t n_batches = (n_samples + kBatchSize - 1) / kBatchSize;
  std::vector<std::array<std::uint64_t, N>> partial(n_batches);
  parallel_tasks(n_batches, threads, [&](std::size_t b) {
    Rng rng(mix_seed(seed, b));
    const std::uint64_t begin = b * kBatchSize;
    const std::uint64_t end = std::min(n_samples, begin + kBatchSize);
    std::array<std::uint64_t, N> acc{};
    for (std::uint64_t i = begin; i < end; ++i) {
      const auto hit = fn(rng);
      for (std::size_t q = 0; q < N; ++q) acc[q] += hit[q] ? 1 : 0;
    }
    partial[b] = acc;
  });
  std::array<std::uint64_t, N> total{};
  for (const auto& a : partial)
    for (std::size_t q = 0; q < N; ++q) total[q] += a[q];
  return total;
}

/// Estimates P(predicate) with predicate(rng) -> bool.
template <typename Fn>
DensityEstimate mc_density(std::uint64_t n_samples, std::uint64_t seed, Int r, unsigned threads, Fn&& predicate) {
  const auto c = mc_counts<1>(n_samples, seed, threads, [&](Rng& rng) { return std::array<bool, 1>{predicate(rng)}; });
  auto e = wilson(c[0], n_samples);
  e.seed = seed;
  e.r = r;
  return e;
}

/// Density of a predicate on equations of a space, sampled from B_r.
template <typename Pred>
DensityEstimate mc_density(const pc::EquationSpace& space, Int r, std::uint64_t n_samples, std::uint64_t seed,
                           Pred&& predicate, unsigned threads = 1) {
  return mc_density(n_samples, seed, r, threads, [&](Rng& rng) { return predicate(sample_equation(space, r, rng)); });
}

}  // namespace randeq::harness
