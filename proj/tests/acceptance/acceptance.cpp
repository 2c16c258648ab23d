// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <CLI11.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "randeq/abelian_eq.hpp"
#include "randeq/harness/cli.hpp"
#include "randeq/harness/experiments.hpp"
#include "randeq/harness/group_spec.hpp"
#include "randeq/harness/monte_carlo.hpp"
#include "randeq/numtheory.hpp"
#include "randeq/pcgroup.hpp"
#include "randeq/pcgroup_builders.hpp"
#include "randeq/presentation_io.hpp"
#include "randeq/sat_tests.hpp"

using namespace randeq;
using harness::fmt_real;

namespace {

// Pinned tolerances.
constexpr double kLimitTol = 2e-3;            // criterion 2
constexpr double kDecadeShrink = 2.0;         // criterion 2
constexpr double kFullRangeSeconds = 10.0;    // criterion 2, r = 10^6
constexpr double kBruteSeconds = 60.0;        // criterion 1
constexpr double kUniformShrink = 5.0;        // criterion 4
constexpr double kLogWindowLo = 0.9, kLogWindowHi = 1.5;      // criterion 5, m = 1
constexpr double kScaledWindowLo = 1.5, kScaledWindowHi = 1.8;  // criterion 5, m = 2
constexpr double kSatWindowLo = 0.61, kSatWindowHi = 0.66;    // criterion 9
constexpr double kAbWindowLo = 0.645, kAbWindowHi = 0.672;    // criterion 9
constexpr double kSigmas = 3.0;               // criteria 9 and 10

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string data_file(const std::string& name) { return std::string(RANDEQ_DATA_DIR) + "/presentations/" + name; }

Outcome exact_vs_bruteforce(unsigned threads) {
  const auto t0 = Clock::now();
  std::ostringstream d;
  bool ok = true;
  for (auto [k, m, r] : {std::tuple{1u, 1u, 6u}, {2u, 1u, 4u}, {1u, 2u, 4u}, {2u, 2u, 2u}}) {
    const Count exact = abelian::count_sat_ball(k, m, r, threads);
    const Count brute = abelian::brute_force_count(k, m, r, Count{1} << 30, threads);
    ok = ok && exact == brute;
    d << "(" << k << "," << m << "," << r << ")=" << to_string(exact) << (exact == brute ? "" : "!=" + to_string(brute))
      << ' ';
  }
  const double secs = seconds_since(t0);
  d << "in " << fmt_real(secs) << "s";
  return {ok && secs < kBruteSeconds, d.str()};
}

Outcome abelian_limit(unsigned threads) {
  std::ostringstream d;
  bool ok = true;
  const auto table = numtheory::mobius_sieve(100000);
  for (auto [k, m] : {std::pair{2u, 1u}, {2u, 2u}, {3u, 1u}}) {
    const double lim = abelian::limit_density(k, m);
    std::vector<double> res;
    for (std::uint64_t r : {100u, 1000u, 10000u, 100000u}) res.push_back(abelian::density_sat(k, m, r, table) - lim);
    const bool near = std::abs(res.back()) <= kLimitTol;
    bool shrink = true;
    for (std::size_t i = 1; i < res.size(); ++i) shrink = shrink && std::abs(res[i]) * kDecadeShrink <= std::abs(res[i - 1]);
    ok = ok && near && shrink;
    d << "(" << k << "," << m << ") res=";
    for (std::size_t i = 0; i < res.size(); ++i) d << (i ? "," : "") << fmt_real(res[i]);
    d << (near ? "" : " [limit miss]") << (shrink ? "" : " [no 2x decade shrink]") << "; ";
  }
  const auto t0 = Clock::now();
  const Count big = abelian::count_sat_ball(2, 1, 1000000, threads);
  const double secs = seconds_since(t0);
  ok = ok && secs <= kFullRangeSeconds;
  d << "r=1e6 count " << to_string(big) << " in " << fmt_real(secs) << "s";
  return {ok, d.str()};
}

Outcome multiples_rate() {
  std::size_t bad = 0, checked = 0;
  for (unsigned k = 1; k <= 4; ++k)
    for (std::uint64_t r = 1; r <= 300; ++r)
      for (std::uint64_t g = 1; g <= r; ++g, ++checked) bad += numtheory::rate_check_multiples(r, g, k).within_bound ? 0 : 1;
  return {bad == 0, std::to_string(checked) + " cases, " + std::to_string(bad) + " violations"};
}

Outcome uniform_trend() {
  const auto table = numtheory::mobius_sieve(10000);
  std::ostringstream d;
  bool ok = true;
  for (unsigned k : {2u, 3u}) {
    const double lo = numtheory::max_primitive_deviation(100, k, k - 1, table);
    const double hi = numtheory::max_primitive_deviation(10000, k, k - 1, table);
    ok = ok && hi * kUniformShrink <= lo;
    d << "k=" << k << ": " << fmt_real(lo) << " -> " << fmt_real(hi) << " (ratio " << fmt_real(lo / hi) << ") ";
  }
  return {ok, d.str()};
}

Outcome one_variable() {
  constexpr std::uint64_t kMax = 100000;
  const numtheory::MobiusTable none;
  std::ostringstream d;
  bool ok = true;
  for (unsigned m = 1; m <= 3; ++m) {
    // Z_r(m) and Z_r(m-1) accumulated in r.
    long double zm = 0, zm1 = 0;
    double c = 0, worst = 0;
    std::uint64_t worst_r = 0;
    std::size_t bad = 0;
    for (std::uint64_t r = 1; r <= kMax; ++r) {
      const long double rl = static_cast<long double>(r);
      zm += 1.0L / std::pow(rl, static_cast<long double>(m));
      zm1 += 1.0L / std::pow(rl, static_cast<long double>(m - 1));
      if (r < 100) continue;
      const double rho = abelian::density_sat(1, m, r, none);
      const double res = std::abs(rho - static_cast<double>(zm / rl));
      const double scale = static_cast<double>(zm1 / (rl * rl));
      if (r == 100) c = res / (2 * scale);
      const double ratio = res / (2 * c * scale);
      if (ratio > worst) worst = ratio, worst_r = r;
      bad += ratio <= 1 ? 0 : 1;
    }
    ok = ok && bad == 0;
    d << "m=" << m << " C=" << fmt_real(c) << " violations=" << bad << " worst=" << fmt_real(worst) << "@r=" << worst_r
      << "; ";
  }
  d << "m=1 rho*r/ln r:";
  for (std::uint64_t r : {1000u, 10000u, 100000u, 1000000u}) {
    const double q = abelian::density_sat(1, 1, r, none) * static_cast<double>(r) / std::log(static_cast<double>(r));
    ok = ok && q >= kLogWindowLo && q <= kLogWindowHi;
    d << ' ' << fmt_real(q);
  }
  const double s2 = abelian::density_sat(1, 2, 100000, none) * 1e5;
  ok = ok && s2 >= kScaledWindowLo && s2 <= kScaledWindowHi;
  d << "; m=2 rho*r at 1e5: " << fmt_real(s2);
  return {ok, d.str()};
}

Outcome witness_soundness() {
  constexpr std::size_t kWanted = 10000;
  std::ostringstream d;
  bool ok = true;

  // Abelian verdicts across shapes and radii up to 10^6.
  {
    std::mt19937_64 rng(61);
    const std::vector<std::tuple<unsigned, unsigned, Int>> shapes{
        {1, 1, 10}, {2, 1, 1000}, {2, 2, 1000000}, {3, 2, 1000000}, {2, 3, 100}, {4, 1, 1000000}};
    std::size_t sat = 0, failed = 0, draws = 0;
    while (sat < kWanted) {
      const auto [k, m, r] = shapes[draws++ % shapes.size()];
      const auto eq = harness::sample_abelian_equation(k, m, r, rng);
      const auto v = abelian::decide(eq);
      if (!v.sat()) continue;
      ++sat;
      failed += v.witness && abelian::verify(eq, *v.witness) ? 0 : 1;
    }
    ok = ok && failed == 0;
    d << "abelian " << sat << " SAT, " << failed << " failed; ";
  }

  for (const std::string group : {"heisenberg", "free-nilpotent:3"})
    for (std::size_t k : {2u, 3u}) {
      const auto space = harness::make_space(group, k);
      std::mt19937_64 rng(62 + k);
      std::size_t sat = 0, failed = 0;
      while (sat < kWanted) {
        const auto eq = harness::sample_equation(space, 30, rng);
        const auto v = sat::classify(space, eq);
        if (!v.sat()) continue;
        ++sat;
        failed += v.witness && sat::verify(space, eq, *v.witness) ? 0 : 1;
      }
      ok = ok && failed == 0;
      d << group << " k=" << k << " " << sat << " SAT, " << failed << " failed; ";
    }
  return {ok, d.str()};
}

// Upper unitriangular [[1, x, z], [0, 1, y], [0, 0, 1]].
struct Unitri {
  SignedWide x = 0, y = 0, z = 0;
  Unitri operator*(const Unitri& o) const { return {x + o.x, y + o.y, z + o.z + x * o.y}; }
  bool operator==(const Unitri&) const = default;
};

// a1 -> I + E23, a2 -> I + E12, c = [a2, a1] -> I + E13.
Unitri to_matrix(const pc::Element& g) { return {g[1], g[0], g[2]}; }

pc::Element random_element(const pc::PcGroup& g, std::mt19937_64& rng, Int bound) {
  pc::Element e(g.rank());
  for (std::size_t i = 0; i < g.rank(); ++i) {
    const Int w = g.gen(i).order;
    e[i] = w == pc::kInfinite ? std::uniform_int_distribution<Int>(-bound, bound)(rng)
                              : std::uniform_int_distribution<Int>(0, w - 1)(rng);
  }
  return e;
}

Outcome collection() {
  std::ostringstream d;
  bool ok = true;
  {
    const pc::PcGroup h(pc::make_heisenberg());
    std::mt19937_64 rng(71);
    std::size_t bad = 0;
    for (int it = 0; it < 100000; ++it) {
      const auto a = random_element(h, rng, 100), b = random_element(h, rng, 100);
      bad += to_matrix(h.multiply(a, b)) == to_matrix(a) * to_matrix(b) ? 0 : 1;
    }
    ok = ok && bad == 0;
    d << "matrix oracle 100000 pairs, " << bad << " mismatches; associativity:";
  }
  std::vector<std::pair<std::string, pc::PcPresentation>> groups{
      {"abelian:3", pc::make_free_abelian(3)},
      {"cyclic:6", pc::make_cyclic(6)},
      {"heisenberg", pc::make_heisenberg()},
      {"free-nilpotent:3", pc::make_free_nilpotent_class2(3)},
      {"free-nilpotent:4", pc::make_free_nilpotent_class2(4)},
      {"heisenberg x cyclic:6", pc::direct_product(pc::make_heisenberg(), pc::make_cyclic(6))},
  };
  for (const char* f : {"heisenberg_z4.pc", "free_nilpotent_2_3.pc", "equation_space_z_class3.pc"})
    groups.emplace_back(std::string("file:") + f, pc::load_presentation(data_file(f)));
  for (const auto& [name, p] : groups) {
    const pc::PcGroup g(p);
    std::mt19937_64 rng(72);
    std::size_t bad = 0;
    for (int it = 0; it < 10000; ++it) {
      const auto a = random_element(g, rng, 100), b = random_element(g, rng, 100), c = random_element(g, rng, 100);
      bad += g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c)) ? 0 : 1;
    }
    ok = ok && bad == 0;
    d << ' ' << name << '=' << bad;
  }
  return {ok, d.str()};
}

Outcome abelian_degeneration() {
  const auto space = pc::build_equation_space(pc::make_free_abelian(1), 2);
  std::size_t bad = 0, total = 0;
  constexpr Int r = 3;
  for (Int g1 = -r; g1 <= r; ++g1)
    for (Int g2 = -r; g2 <= r; ++g2)
      for (Int a = -r; a <= r; ++a, ++total) {
        const auto v = sat::classify(space, {{g1, g2}, {a}});
        bad += v.status == abelian::decide({{g1, g2}, {a}}).status ? 0 : 1;
      }
  return {bad == 0, std::to_string(total) + " equations, " + std::to_string(bad) + " disagreements"};
}

Outcome nilpotent_bracket(unsigned threads) {
  const auto space = harness::make_space("heisenberg", 2);
  constexpr std::uint64_t kSeed = 1;
  std::ostringstream d;
  const auto rep = harness::run_nilpotent_bracket(space, 200, 100000, kSeed, {}, threads);
  const auto& s = rep.sat_certified_fraction;
  const auto& a = rep.abelian_solvable_fraction;
  const bool windows = s.point >= kSatWindowLo && s.point <= kSatWindowHi && a.point >= kAbWindowLo &&
                       a.point <= kAbWindowHi;
  d << "sat=" << fmt_real(s.point) << " ab=" << fmt_real(a.point) << " limits " << fmt_real(rep.lower_limit) << ","
    << fmt_real(rep.upper_limit) << (windows ? "" : " [outside windows]");

  bool fallback = windows;
  if (!windows) {
    // Both fractions must approach their limits along the radius grid.
    fallback = true;
    double prev_s = 1e9, prev_a = 1e9;
    for (Int r : {20, 60, 200}) {
      const auto q = harness::run_nilpotent_bracket(space, r, 100000, kSeed, {}, threads);
      const double ds = std::abs(q.sat_certified_fraction.point - q.lower_limit);
      const double da = std::abs(q.abelian_solvable_fraction.point - q.upper_limit);
      fallback = fallback && ds <= prev_s + kSigmas * q.sat_certified_fraction.sigma() &&
                 da <= prev_a + kSigmas * q.abelian_solvable_fraction.sigma();
      prev_s = ds, prev_a = da;
    }
    d << (fallback ? " [monotone fallback holds]" : " [monotone fallback fails]");
  }

  bool invariant = true;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto c = harness::mc_counts<2>(20000, seed, threads, [&](harness::Rng& rng) {
      const auto eq = harness::sample_equation(space, 200, rng);
      const bool certified = sat::classify(space, eq).sat();
      const bool ab = !sat::test_abelianization(space, eq).unsat;
      return std::array<bool, 2>{certified && !ab, certified};
    });
    invariant = invariant && c[0] == 0;
  }
  d << (invariant ? "; sat<=ab on 8 seeds" : "; sat<=ab VIOLATED");
  return {fallback && invariant, d.str()};
}

Outcome one_variable_nilpotent(unsigned threads) {
  const auto space = harness::make_space("heisenberg", 1);
  std::ostringstream d;
  bool ok = true;
  double prev = 2;
  for (Int r : {100, 1000, 10000}) {
    const auto c = harness::mc_counts<1>(200000, 101, threads, [&](harness::Rng& rng) {
      return std::array<bool, 1>{!sat::test_abelianization(space, harness::sample_equation(space, r, rng)).unsat};
    });
    const auto e = harness::wilson(c[0], 200000);
    const double bound = 4.0 / static_cast<double>(r) + kSigmas * e.sigma();
    ok = ok && e.point <= bound && e.point < prev;
    prev = e.point;
    d << "r=" << r << ": " << fmt_real(e.point) << " <= " << fmt_real(bound) << "; ";
  }
  return {ok, d.str()};
}

Outcome determinism() {
  const std::string z4 = "file:" + data_file("heisenberg_z4.pc");
  const std::vector<std::vector<std::string>> runs{
      {"abelian-exact", "--k", "2", "--m", "1", "--r-grid", "10,100,1000"},
      {"abelian-bruteforce", "--k", "2", "--m", "1", "--r-grid", "2,4"},
      {"abelian-mc", "--k", "2", "--m", "1", "--r-grid", "10,100", "--samples", "20000", "--seed", "7"},
      {"one-var", "--m", "2", "--r-grid", "100,1000"},
      {"nilpotent-mc", "--group", "heisenberg", "--k", "2", "--r-grid", "20,60", "--samples", "20000", "--seed", "3"},
      {"nilpotent-mc", "--group", z4, "--k", "2", "--r", "30", "--samples", "5000", "--seed", "3",
       "--brute-force-radius", "1"},
      {"zeta", "--s", "2,3,5", "--eps", "1e-10"},
      {"classify", "x1^2 x2^4 a1^4 a2^6 c12^3", "--group", "heisenberg", "--brute-force-radius", "2"},
      {"selfcheck"},
  };
  auto run = [](std::vector<std::string> args, const char* threads) {
    args.insert(args.begin(), "randeq");
    args.push_back("--threads");
    args.push_back(threads);
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = harness::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return std::to_string(code) + "\n" + out.str() + err.str();
  };
  std::size_t differ = 0;
  std::string which;
  for (const auto& args : runs)
    if (run(args, "1") != run(args, "8")) {
      ++differ;
      which += ' ' + args[0];
    }
  return {differ == 0, std::to_string(runs.size()) + " invocations, " + std::to_string(differ) + " differ" + which};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact count equals enumeration", [&] { return exact_vs_bruteforce(threads); }},
      {"abelian SAT density limit", [&] { return abelian_limit(threads); }},
      {"multiples rate bound", multiples_rate},
      {"uniform primitive trend", uniform_trend},
      {"one-variable density", one_variable},
      {"witness soundness", witness_soundness},
      {"collection correctness", collection},
      {"abelian degeneration", abelian_degeneration},
      {"nilpotent bracket", [&] { return nilpotent_bracket(threads); }},
      {"one-variable nilpotent decay", [&] { return one_variable_nilpotent(threads); }},
      {"thread-count determinism", determinism},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first
              << ", " << fmt_real(seconds_since(t0)) << "s): " << o.detail << std::endl;
  }
  std::cout << (all ? "all criteria pass" : "some criteria fail") << std::endl;
  return all ? 0 : 1;
}
