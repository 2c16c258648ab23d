#pragma once

// Quick numerical bound checks, small enough to run interactively.

#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "randeq/abelian_eq.hpp"
#include "randeq/harness/monte_carlo.hpp"
#include "randeq/harness/table.hpp"
#include "randeq/numtheory.hpp"
#include "randeq/pcgroup_builders.hpp"
#include "randeq/sat_tests.hpp"

namespace randeq::harness {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline std::vector<CheckResult> run_selfcheck(unsigned threads = 1) {
  std::vector<CheckResult> out;
  auto check = [&](std::string name, const std::function<std::string(bool&)>& fn) {
    CheckResult c{std::move(name), false, {}};
    try {
      c.detail = fn(c.pass);
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(c));
  };

  check("zeta_constants", [](bool& ok) {
    const double pi = std::acos(-1.0);
    const double e2 = std::abs(numtheory::zeta(2) - pi * pi / 6);
    const double e4 = std::abs(numtheory::zeta(4) - std::pow(pi, 4) / 90);
    ok = e2 <= 1e-12 && e4 <= 1e-12;
    return "err2=" + fmt_real(e2) + " err4=" + fmt_real(e4);
  });

  check("exact_count_vs_enumeration", [threads](bool& ok) {
    ok = true;
    for (auto [k, m, r] : {std::tuple{1u, 1u, 5u}, {2u, 1u, 3u}, {1u, 2u, 3u}, {2u, 2u, 2u}})
      ok = ok && abelian::count_sat_ball(k, m, r) == abelian::brute_force_count(k, m, r, Count{1} << 24, threads);
    return std::string(ok ? "all match" : "mismatch");
  });

  check("multiples_rate_bound", [](bool& ok) {
    std::size_t bad = 0;
    for (unsigned k = 1; k <= 4; ++k)
      for (std::uint64_t r = 1; r <= 60; ++r)
        for (std::uint64_t g = 1; g <= r; ++g) bad += numtheory::rate_check_multiples(r, g, k).within_bound ? 0 : 1;
    ok = bad == 0;
    return std::to_string(bad) + " violations";
  });

  check("heisenberg_witness_soundness", [threads](bool& ok) {
    const auto space = pc::build_equation_space(pc::make_heisenberg(), 2);
    const auto c = mc_counts<2>(2000, 7, threads, [&](Rng& rng) {
      const auto eq = sample_equation(space, 30, rng);
      const auto v = sat::classify(space, eq);
      const bool good = !v.sat() || (v.witness && sat::verify(space, eq, *v.witness));
      return std::array<bool, 2>{v.sat(), !good};
    });
    ok = c[1] == 0 && c[0] > 0;
    return std::to_string(c[0]) + " SAT verdicts, " + std::to_string(c[1]) + " failed";
  });

  check("abelian_degeneration", [](bool& ok) {
    const auto space = pc::build_equation_space(pc::make_free_abelian(1), 2);
    std::size_t bad = 0;
    const Int r = 2;
    for (Int g1 = -r; g1 <= r; ++g1)
      for (Int g2 = -r; g2 <= r; ++g2)
        for (Int a = -r; a <= r; ++a) {
          const pc::NilpotentEquation eq{{g1, g2}, {a}};
          const auto v = sat::classify(space, eq);
          const auto d = abelian::decide({{g1, g2}, {a}});
          bad += v.status == d.status ? 0 : 1;
        }
    ok = bad == 0;
    return std::to_string(bad) + " disagreements";
  });
  return out;
}

inline bool print_selfcheck(const std::vector<CheckResult>& results, std::ostream& os) {
  bool all = true;
  for (const auto& c : results) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    all = all && c.pass;
  }
  return all;
}

}  // namespace randeq::harness
