#pragma once

// Experiment drivers: exact abelian convergence tables, the one-variable
// model, Monte Carlo estimates and the nilpotent density bracket.

#include <cstdint>
#include <vector>

#include "randeq/abelian_eq.hpp"
#include "randeq/equation_space.hpp"
#include "randeq/harness/monte_carlo.hpp"
#include "randeq/harness/table.hpp"
#include "randeq/numtheory.hpp"
#include "randeq/sat_tests.hpp"

namespace randeq::harness {

inline Table run_abelian_convergence(unsigned k, unsigned m, const std::vector<std::uint64_t>& r_grid,
                                     unsigned threads = 1) {
  if (k < 1 || m < 1) throw PreconditionError("run_abelian_convergence: k, m must be >= 1");
  Table t{{"r", "count", "density", "limit", "residual"}, {}};
  std::uint64_t r_max = 0;
  for (auto r : r_grid) r_max = std::max(r_max, r);
  const auto table = k >= 2 ? numtheory::mobius_sieve(r_max) : numtheory::MobiusTable{};
  const double limit = abelian::limit_density(k, m);
  for (auto r : r_grid) {
    const Count c = abelian::count_sat_ball(k, m, r, table, threads);
    const double d = ratio(c, numtheory::ball_size(r, k + m));
    t.add({fmt_int(r), fmt_int(c), fmt_real(d), fmt_real(limit), fmt_real(d - limit)});
  }
  return t;
}

inline Table run_abelian_bruteforce(unsigned k, unsigned m, const std::vector<std::uint64_t>& r_grid,
                                    Count budget, unsigned threads = 1) {
  Table t{{"r", "count", "brute_force", "match"}, {}};
  for (auto r : r_grid) {
    const Count exact = abelian::count_sat_ball(k, m, r, threads);
    const Count brute = abelian::brute_force_count(k, m, r, budget, threads);
    t.add({fmt_int(r), fmt_int(exact), fmt_int(brute), exact == brute ? "1" : "0"});
  }
  return t;
}

inline Table run_one_var(unsigned m, const std::vector<std::uint64_t>& r_grid) {
  Table t{{"r", "density", "model", "residual", "scale"}, {}};
  for (auto r : r_grid) {
    const auto o = abelian::one_var_residual(m, r);
    t.add({fmt_int(r), fmt_real(o.density), fmt_real(o.model), fmt_real(o.residual), fmt_real(o.scale)});
  }
  return t;
}

struct AbelianMcReport {
  DensityEstimate sat;
  double exact = 0;
  double limit = 0;
};

inline AbelianMcReport run_abelian_mc(unsigned k, unsigned m, Int r, std::uint64_t n_samples, std::uint64_t seed,
                                      unsigned threads = 1) {
  AbelianMcReport out;
  out.sat = mc_density(n_samples, seed, r, threads, [&](Rng& rng) {
    return abelian::decide(sample_abelian_equation(k, m, r, rng)).sat();
  });
  out.exact = abelian::density_sat(k, m, static_cast<std::uint64_t>(r));
  out.limit = abelian::limit_density(k, m);
  return out;
}

inline Table abelian_mc_table(const std::vector<AbelianMcReport>& reports) {
  Table t{{"r", "samples", "sat_lo", "sat_pt", "sat_hi", "exact", "limit"}, {}};
  for (const auto& a : reports)
    t.add({fmt_int(a.sat.r), fmt_int(a.sat.total), fmt_real(a.sat.ci_low), fmt_real(a.sat.point),
           fmt_real(a.sat.ci_high), fmt_real(a.exact), fmt_real(a.limit)});
  return t;
}

struct BracketReport {
  Int r = 0;
  std::uint64_t samples = 0;
  DensityEstimate sat_certified_fraction;
  DensityEstimate abelian_solvable_fraction;
  double unknown_fraction = 0;
  double lower_limit = 0;
  double upper_limit = 0;
};

struct BracketLimits {
  double lower = 0;
  double upper = 0;
};

/// (1/t) zeta(k+h)/zeta(k) and zeta(k+m)/zeta(k); both 0 for k = 1.
inline BracketLimits bracket_limits(const pc::GroupSummary& s, std::size_t k) {
  if (k < 2) return {};
  const double zk = numtheory::zeta(static_cast<int>(k));
  return {numtheory::zeta(static_cast<int>(k) + s.hirsch) / zk / static_cast<double>(s.torsion_order),
          numtheory::zeta(static_cast<int>(k) + s.abelian_rank) / zk};
}

inline BracketReport run_nilpotent_bracket(const pc::EquationSpace& space, Int r, std::uint64_t n_samples,
                                           std::uint64_t seed, const sat::ClassifyOptions& opt = {},
                                           unsigned threads = 1) {
  sat::ClassifyOptions inner = opt;
  inner.threads = 1;  // parallelism is over samples
  const auto c = mc_counts<3>(n_samples, seed, threads, [&](Rng& rng) {
    const auto eq = sample_equation(space, r, rng);
    const auto v = sat::classify(space, eq, inner);
    const bool ab = !sat::test_abelianization(space, eq).unsat;
    return std::array<bool, 3>{v.sat(), ab, v.unknown()};
  });
  BracketReport rep;
  rep.r = r;
  rep.samples = n_samples;
  rep.sat_certified_fraction = wilson(c[0], n_samples);
  rep.abelian_solvable_fraction = wilson(c[1], n_samples);
  for (auto* e : {&rep.sat_certified_fraction, &rep.abelian_solvable_fraction}) {
    e->seed = seed;
    e->r = r;
  }
  rep.unknown_fraction = static_cast<double>(c[2]) / static_cast<double>(n_samples);
  const auto lim = bracket_limits(space.group_summary(), space.k());
  rep.lower_limit = lim.lower;
  rep.upper_limit = lim.upper;
  return rep;
}

inline Table bracket_table(const std::vector<BracketReport>& reports) {
  Table t{{"r", "samples", "sat_lo", "sat_pt", "sat_hi", "ab_lo", "ab_pt", "ab_hi", "unknown", "lower_limit",
           "upper_limit"},
          {}};
  for (const auto& b : reports) {
    const auto& s = b.sat_certified_fraction;
    const auto& a = b.abelian_solvable_fraction;
    t.add({fmt_int(b.r), fmt_int(b.samples), fmt_real(s.ci_low), fmt_real(s.point), fmt_real(s.ci_high),
           fmt_real(a.ci_low), fmt_real(a.point), fmt_real(a.ci_high), fmt_real(b.unknown_fraction),
           fmt_real(b.lower_limit), fmt_real(b.upper_limit)});
  }
  return t;
}

inline Table zeta_table(const std::vector<int>& s_values, double eps) {
  Table t{{"s", "value", "partial", "tail_bound", "error_bound", "cutoff"}, {}};
  for (int s : s_values) {
    const auto z = numtheory::zeta_detailed(s, eps);
    t.add({fmt_int(s), fmt_real(z.value), fmt_real(z.partial), fmt_real(z.tail_bound), fmt_real(z.error_bound), fmt_int(z.cutoff)});
  }
  return t;
}

}  // namespace randeq::harness
