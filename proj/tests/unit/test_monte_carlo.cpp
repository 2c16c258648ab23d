#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "randeq/abelian_eq.hpp"
#include "randeq/harness/monte_carlo.hpp"
#include "randeq/pcgroup_builders.hpp"
#include "randeq/presentation_io.hpp"
#include "test_support.hpp"

using namespace randeq;
using namespace randeq::harness;
using testing_support::data_file;

namespace {

// Upper chi-square quantile at p = 0.001 (Wilson-Hilferty approximation).
double chi2_critical_001(double df) {
  const double z = 3.090232306167813;
  const double a = 2.0 / (9.0 * df);
  return df * std::pow(1 - a + z * std::sqrt(a), 3);
}

}  // namespace

TEST(Wilson, Invariants) {
  for (std::uint64_t n : {1u, 2u, 10u, 1000u, 123457u})
    for (std::uint64_t h : {std::uint64_t{0}, std::uint64_t{1}, n / 3, n / 2, n - 1, n}) {
      if (h > n) continue;
      const auto e = wilson(h, n);
      EXPECT_LE(0.0, e.ci_low);
      EXPECT_LE(e.ci_low, e.point);
      EXPECT_LE(e.point, e.ci_high);
      EXPECT_LE(e.ci_high, 1.0);
      EXPECT_DOUBLE_EQ(e.point, static_cast<double>(h) / static_cast<double>(n));
    }
  EXPECT_THROW(wilson(0, 0), PreconditionError);
  EXPECT_THROW(wilson(3, 2), PreconditionError);
}

TEST(Wilson, ReferenceInterval) {
  // 40 of 100, reference values from an independent Wilson implementation
  const auto e = wilson(40, 100);
  EXPECT_NEAR(e.ci_low, 0.30940128643245896, 1e-12);
  EXPECT_NEAR(e.ci_high, 0.49799741320893826, 1e-12);
}

TEST(McDensity, AlwaysTrue) {
  const auto e = mc_density(5000, 3, 0, 1, [](Rng&) { return true; });
  EXPECT_EQ(e.point, 1.0);
  EXPECT_EQ(e.ci_high, 1.0);
  EXPECT_LT(e.ci_low, 1.0);
  EXPECT_EQ(e.seed, 3u);
}

TEST(McDensity, ContainsExactAbelianDensity) {
  const double exact = abelian::density_sat(2, 1, 1000);
  const auto e = mc_density(100000, 2024, 1000, 4,
                            [](Rng& rng) { return abelian::decide(sample_abelian_equation(2, 1, 1000, rng)).sat(); });
  EXPECT_TRUE(e.contains(exact)) << e.ci_low << " " << e.ci_high << " " << exact;
}

TEST(McDensity, CoverageOverSeeds) {
  const double exact = abelian::density_sat(2, 1, 50);
  int covered = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto e = mc_density(20000, seed, 50, 2,
                              [](Rng& rng) { return abelian::decide(sample_abelian_equation(2, 1, 50, rng)).sat(); });
    covered += e.contains(exact);
  }
  EXPECT_GE(covered, 36);
}

TEST(McDensity, IndependentOfThreads) {
  auto pred = [](Rng& rng) { return abelian::decide(sample_abelian_equation(3, 1, 20, rng)).sat(); };
  const auto a = mc_density(30001, 9, 20, 1, pred);
  const auto b = mc_density(30001, 9, 20, 8, pred);
  const auto c = mc_density(30001, 9, 20, 3, pred);
  EXPECT_EQ(a.hits, b.hits);
  EXPECT_EQ(a.hits, c.hits);
  const auto d = mc_density(30001, 10, 20, 1, pred);
  EXPECT_NE(a.hits, d.hits);
}

TEST(Sampling, ZeroRadiusIsTrivial) {
  const auto s = pc::build_equation_space(pc::make_heisenberg(), 2);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_equation(s, 0, rng), s.trivial_equation());
}

TEST(Sampling, SameSeedSameSequence) {
  const auto s = pc::build_equation_space(pc::make_heisenberg(), 3);
  Rng a(mix_seed(42, 0)), b(mix_seed(42, 0)), c(mix_seed(42, 1));
  bool differs = false;
  for (int i = 0; i < 500; ++i) {
    const auto x = sample_equation(s, 10, a);
    EXPECT_EQ(x, sample_equation(s, 10, b));
    differs = differs || !(x == sample_equation(s, 10, c));
  }
  EXPECT_TRUE(differs);
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
}

TEST(Sampling, MarginalsAreUniform) {
  const auto s = pc::build_equation_space(pc::load_presentation(data_file("heisenberg_z4.pc")), 2);
  const Int r = 5;
  const int n = 100000;
  const std::size_t dims = s.k() + s.tail_size();
  std::vector<std::map<Int, int>> hist(dims);
  Rng rng(77);
  for (int i = 0; i < n; ++i) {
    const auto eq = sample_equation(s, r, rng);
    for (std::size_t j = 0; j < s.k(); ++j) ++hist[j][eq.gamma[j]];
    for (std::size_t j = 0; j < s.tail_size(); ++j) ++hist[s.k() + j][eq.delta[j]];
  }
  for (std::size_t d = 0; d < dims; ++d) {
    Int lo = -r, hi = r;
    if (d >= s.k() && !s.tail()[d - s.k()].infinite()) {
      lo = 0;
      hi = std::min<Int>(s.tail()[d - s.k()].order - 1, r);
    }
    const double bins = static_cast<double>(hi - lo + 1);
    ASSERT_EQ(hist[d].size(), static_cast<std::size_t>(bins)) << d;
    EXPECT_EQ(hist[d].begin()->first, lo);
    EXPECT_EQ(hist[d].rbegin()->first, hi);
    double chi2 = 0;
    const double expect = n / bins;
    for (const auto& [v, c] : hist[d]) chi2 += (c - expect) * (c - expect) / expect;
    EXPECT_LT(chi2, chi2_critical_001(bins - 1)) << "coordinate " << d;
  }
}
