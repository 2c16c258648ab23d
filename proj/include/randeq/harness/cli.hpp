#pragma once

// Command-line front end. Exit codes: 0 success, 1 failed selfcheck or
// resource limit, 2 usage error, 3 validation error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "randeq/errors.hpp"
#include "randeq/harness/experiments.hpp"
#include "randeq/harness/group_spec.hpp"
#include "randeq/harness/selfcheck.hpp"
#include "randeq/harness/table.hpp"

namespace randeq::harness {

struct CliOptions {
  unsigned k = 2;
  unsigned m = 1;
  bool k_given = false;
  std::int64_t r = 100;
  std::vector<std::uint64_t> r_grid;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
  std::string group = "heisenberg";
  std::string out_path;
  std::string format = "csv";
  std::optional<std::int64_t> brute_force_radius;
  unsigned threads = 1;
  std::vector<int> s_values{2, 3, 4};
  double eps = 1e-12;
  std::string equation;
};

namespace detail {

inline std::vector<std::uint64_t> grid_or_r(const CliOptions& o) {
  if (!o.r_grid.empty()) return o.r_grid;
  if (o.r < 0) throw UsageError("--r must be >= 0");
  return {static_cast<std::uint64_t>(o.r)};
}

// Largest variable index x<i> mentioned in an equation text; 1 if none.
inline std::size_t infer_k(const std::string& text) {
  std::size_t k = 1;
  static const std::regex var(R"((?:^|\s)x(\d+)(?:\^|\s|$))");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), var); it != std::sregex_iterator(); ++it)
    k = std::max<std::size_t>(k, std::stoul((*it)[1]));
  return k;
}

inline void emit(const Table& t, const CliOptions& o, std::ostream& out) {
  const auto fmt = parse_format(o.format);
  if (o.out_path.empty()) {
    t.write(out, fmt);
    return;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + o.out_path + "'");
  t.write(f, fmt);
}

inline int run_classify(const CliOptions& o, std::ostream& out) {
  if (o.equation.empty()) throw UsageError("classify needs an equation, e.g. \"x1^1 a1^5\"");
  const bool gx_file = o.group.starts_with("file:") && [&] {
    for (const auto& g : pc::load_presentation(o.group.substr(5)).gens)
      if (!g.in_group) return true;
    return false;
  }();
  std::optional<std::size_t> k;
  if (o.k_given) k = o.k;
  else if (!gx_file) k = infer_k(o.equation);
  const auto space = make_space(o.group, k);
  const auto eq = space.parse_equation(o.equation);
  sat::ClassifyOptions opt;
  opt.brute_force_radius = o.brute_force_radius;
  opt.threads = o.threads;
  const auto v = sat::classify(space, eq, opt);
  std::ostringstream ss;
  ss << "group: " << o.group << '\n';
  ss << "equation: " << space.format_equation(eq) << '\n';
  ss << "exponent: " << pc::EquationSpace::exponent(eq) << '\n';
  ss << "verdict: " << to_string(v.status) << '\n';
  ss << "certificate: " << v.certificate << '\n';
  if (v.witness)
    for (std::size_t i = 0; i < space.k(); ++i)
      ss << space.gx().gen(space.variables()[i]).name << " = " << space.format_element(v.witness->assignments[i])
         << '\n';
  if (o.out_path.empty()) {
    out << ss.str();
  } else {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + o.out_path + "'");
    f << ss.str();
  }
  return 0;
}

}  // namespace detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Random equations over abelian and nilpotent groups: exact counts, densities, classifiers"};
  app.require_subcommand(1);
  CliOptions o;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--out", o.out_path, "Write output to this file instead of stdout");
    s->add_option("--format", o.format, "csv or tsv")->check(CLI::IsMember({"csv", "tsv"}));
    s->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  };
  auto add_km = [&](CLI::App* s) {
    s->add_option("--k", o.k, "Number of variables")->check(CLI::Range(1u, 16u));
    s->add_option("--m", o.m, "Rank of the coefficient group")->check(CLI::Range(1u, 16u));
  };
  auto add_r = [&](CLI::App* s) {
    s->add_option("--r", o.r, "Ball radius")->check(CLI::NonNegativeNumber);
    s->add_option("--r-grid", o.r_grid, "Comma-separated radii")->delimiter(',');
  };
  auto add_mc = [&](CLI::App* s) {
    s->add_option("--samples", o.samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
    s->add_option("--seed", o.seed, "Master seed");
  };

  auto* exact = app.add_subcommand("abelian-exact", "Exact SAT counts in norm balls over Z^m");
  add_km(exact), add_r(exact), add_common(exact);
  auto* brute = app.add_subcommand("abelian-bruteforce", "Exact counts checked by enumeration");
  add_km(brute), add_r(brute), add_common(brute);
  auto* amc = app.add_subcommand("abelian-mc", "Monte Carlo SAT density over Z^m");
  add_km(amc), add_r(amc), add_mc(amc), add_common(amc);
  auto* one = app.add_subcommand("one-var", "One-variable density against the Z_r(m)/r model");
  one->add_option("--m", o.m, "Rank of the coefficient group")->check(CLI::Range(1u, 16u));
  add_r(one), add_common(one);
  auto* nmc = app.add_subcommand("nilpotent-mc", "Certified and abelian-solvable fractions over a nilpotent group");
  nmc->add_option("--group", o.group, "abelian:<m> | heisenberg | free-nilpotent:<m> | file:<path>");
  nmc->add_option("--k", o.k, "Number of variables")->check(CLI::Range(1u, 16u));
  nmc->add_option("--brute-force-radius", o.brute_force_radius, "Enable exhaustive search up to this radius");
  add_r(nmc), add_mc(nmc), add_common(nmc);
  auto* zeta = app.add_subcommand("zeta", "Riemann zeta at integers with certified tail");
  zeta->add_option("--s", o.s_values, "Comma-separated integer arguments >= 2")->delimiter(',');
  zeta->add_option("--eps", o.eps, "Absolute error target")->check(CLI::PositiveNumber);
  add_common(zeta);
  auto* cls = app.add_subcommand("classify", "Classify one equation");
  cls->add_option("equation", o.equation, "Equation text, e.g. \"x1^2 a1^4 c12^1\"")->required();
  cls->add_option("--group", o.group, "abelian:<m> | heisenberg | free-nilpotent:<m> | file:<path>");
  cls->add_option("--k", o.k, "Number of variables (default: inferred from the equation)")->check(CLI::Range(1u, 16u));
  cls->add_option("--brute-force-radius", o.brute_force_radius, "Enable exhaustive search up to this radius");
  add_common(cls);
  auto* self = app.add_subcommand("selfcheck", "Run quick numerical bound checks");
  self->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 1024u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  for (auto* s : {nmc, cls})
    if (s->parsed() && s->count("--k")) o.k_given = true;

  try {
    if (exact->parsed()) {
      detail::emit(run_abelian_convergence(o.k, o.m, detail::grid_or_r(o), o.threads), o, out);
    } else if (brute->parsed()) {
      detail::emit(run_abelian_bruteforce(o.k, o.m, detail::grid_or_r(o), Count{1} << 28, o.threads), o, out);
    } else if (amc->parsed()) {
      std::vector<AbelianMcReport> reps;
      for (auto r : detail::grid_or_r(o))
        reps.push_back(run_abelian_mc(o.k, o.m, static_cast<Int>(r), o.samples, o.seed, o.threads));
      detail::emit(abelian_mc_table(reps), o, out);
    } else if (one->parsed()) {
      detail::emit(run_one_var(o.m, detail::grid_or_r(o)), o, out);
    } else if (nmc->parsed()) {
      const auto space = make_space(o.group, o.k);
      sat::ClassifyOptions opt;
      opt.brute_force_radius = o.brute_force_radius;
      std::vector<BracketReport> reps;
      for (auto r : detail::grid_or_r(o))
        reps.push_back(run_nilpotent_bracket(space, static_cast<Int>(r), o.samples, o.seed, opt, o.threads));
      detail::emit(bracket_table(reps), o, out);
    } else if (zeta->parsed()) {
      detail::emit(zeta_table(o.s_values, o.eps), o, out);
    } else if (cls->parsed()) {
      return detail::run_classify(o, out);
    } else if (self->parsed()) {
      return print_selfcheck(run_selfcheck(o.threads), out) ? 0 : 1;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return 3;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace randeq::harness
