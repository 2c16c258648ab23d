#pragma once

// Equations over a free abelian group A = Z^m in k variables. An equation
// is the normal form x_1^g_1 ... x_k^g_k a_1^al_1 ... a_m^al_m; it is
// solvable iff exp = gcd(g) divides gcd(al) (or exp = 0 and al = 0).

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "randeq/errors.hpp"
#include "randeq/numtheory.hpp"
#include "randeq/parallel.hpp"
#include "randeq/wide_int.hpp"

namespace randeq {

enum class SatStatus { Sat, Unsat, Unknown };

inline const char* to_string(SatStatus s) {
  switch (s) {
    case SatStatus::Sat: return "SAT";
    case SatStatus::Unsat: return "UNSAT";
    case SatStatus::Unknown: return "UNKNOWN";
  }
  return "?";
}

/// Three-valued verdict. SAT always carries a verified witness; UNKNOWN
/// never does.
template <typename Witness>
struct SatVerdict {
  SatStatus status = SatStatus::Unknown;
  std::optional<Witness> witness;
  std::string certificate;

  bool sat() const { return status == SatStatus::Sat; }
  bool unsat() const { return status == SatStatus::Unsat; }
  bool unknown() const { return status == SatStatus::Unknown; }
};

namespace abelian {

struct Equation {
  std::vector<Int> gamma;  // variable exponents, size k
  std::vector<Int> alpha;  // coefficient exponents, size m

  std::size_t k() const { return gamma.size(); }
  std::size_t m() const { return alpha.size(); }
  bool operator==(const Equation&) const = default;
};

/// One vector of Z^m per variable.
struct Witness {
  std::vector<std::vector<Int>> assignments;
};

using Verdict = SatVerdict<Witness>;

inline void validate(const Equation& eq) {
  if (eq.k() < 1) throw ValidationError("abelian equation needs k >= 1 variables");
  if (eq.m() < 1) throw ValidationError("abelian equation needs m >= 1 coefficients");
}

inline Int exponent(const Equation& eq) { return numtheory::gcd_abs(eq.gamma); }

inline Int norm(const Equation& eq) {
  Int n = 0;
  for (Int v : eq.gamma) n = std::max(n, v < 0 ? -v : v);
  for (Int v : eq.alpha) n = std::max(n, v < 0 ? -v : v);
  return n;
}

/// Substitutes the witness: sum_i gamma_i * x_i + alpha == 0, in 128-bit.
inline bool verify(const Equation& eq, const Witness& w) {
  if (w.assignments.size() != eq.k()) return false;
  for (const auto& a : w.assignments)
    if (a.size() != eq.m()) return false;
  for (std::size_t j = 0; j < eq.m(); ++j) {
    SignedWide acc = eq.alpha[j];
    for (std::size_t i = 0; i < eq.k(); ++i)
      acc += static_cast<SignedWide>(eq.gamma[i]) * static_cast<SignedWide>(w.assignments[i][j]);
    if (acc != 0) return false;
  }
  return true;
}

/// Decision procedure with witness: x_i = -xi_i * b where b = alpha / exp
/// and xi is a Bezout certificate for gamma.
inline Verdict decide(const Equation& eq) {
  validate(eq);
  Verdict v;
  const auto cert = numtheory::ext_gcd(eq.gamma);
  const Int g = cert.g;
  if (g == 0) {
    for (Int a : eq.alpha) {
      if (a != 0) {
        v.status = SatStatus::Unsat;
        v.certificate = "nonzero constant, zero exponent";
        return v;
      }
    }
    v.status = SatStatus::Sat;
    v.witness = Witness{std::vector<std::vector<Int>>(eq.k(), std::vector<Int>(eq.m(), 0))};
    return v;
  }
  const Int a = numtheory::gcd_abs(eq.alpha);
  if (a % g != 0) {
    v.status = SatStatus::Unsat;
    v.certificate = "exp=" + std::to_string(g) + " does not divide gcd(alpha)=" + std::to_string(a);
    return v;
  }
  Witness w;
  w.assignments.assign(eq.k(), std::vector<Int>(eq.m(), 0));
  for (std::size_t j = 0; j < eq.m(); ++j) {
    const Int b = eq.alpha[j] / g;
    for (std::size_t i = 0; i < eq.k(); ++i)
      w.assignments[i][j] = detail::narrow(-static_cast<SignedWide>(cert.xi[i]) * b);
  }
  if (!verify(eq, w)) throw std::logic_error("abelian::decide produced a witness that fails substitution");
  v.status = SatStatus::Sat;
  v.witness = std::move(w);
  return v;
}

/// |SAT intersect B_r| in the (k+m)-dimensional equation ball.
///   k = 1:  1 + 2 sum_{g=1..r} (2 floor(r/g) + 1)^m
///   k >= 2: 1 + sum_{g=1..r} |P_{k,g} cap B_r| (2 floor(r/g) + 1)^m
/// Quotient blocks of equal floor(r/g) are summed together and may be
/// spread over threads; the reduction is exact and order-fixed.
inline Count count_sat_ball(unsigned k, unsigned m, std::uint64_t r, const numtheory::MobiusTable& table,
                            unsigned threads = 1) {
  if (k < 1 || m < 1) throw PreconditionError("count_sat_ball: k, m must be >= 1");
  (void)numtheory::ball_size(r, k + m);  // range check: the total must be representable
  if (r == 0) return 1;
  if (k >= 2 && table.n_max() < r) throw PreconditionError("count_sat_ball: Moebius table must cover r");

  struct Block {
    std::uint64_t first, last, t;
  };
  std::vector<Block> blocks;
  for (std::uint64_t g = 1; g <= r;) {
    const std::uint64_t t = r / g;
    const std::uint64_t last = r / t;
    blocks.push_back({g, last, t});
    g = last + 1;
  }
  const std::size_t n_tasks = std::min<std::size_t>(blocks.size(), std::max(1u, threads) * 4u);
  std::vector<Count> partial(n_tasks, 0);
  parallel_tasks(n_tasks, threads, [&](std::size_t task) {
    Count acc = 0;
    for (std::size_t b = task; b < blocks.size(); b += n_tasks) {
      const auto& blk = blocks[b];
      const Count width = blk.last - blk.first + 1;
      const Count coeff = numtheory::ball_size(blk.t, m);
      const Count vars = k == 1 ? Count{2} : numtheory::count_primitive(blk.t, k, table);
      acc = detail::checked_add(acc, detail::checked_mul(detail::checked_mul(width, vars), coeff));
    }
    partial[task] = acc;
  });
  Count total = 1;
  for (Count c : partial) total = detail::checked_add(total, c);
  return total;
}

inline Count count_sat_ball(unsigned k, unsigned m, std::uint64_t r, unsigned threads = 1) {
  if (k >= 2 && r > 0) return count_sat_ball(k, m, r, numtheory::mobius_sieve(r), threads);
  return count_sat_ball(k, m, r, numtheory::MobiusTable{}, threads);
}

inline double density_sat(unsigned k, unsigned m, std::uint64_t r, const numtheory::MobiusTable& table) {
  return ratio(count_sat_ball(k, m, r, table), numtheory::ball_size(r, k + m));
}

inline double density_sat(unsigned k, unsigned m, std::uint64_t r) {
  return ratio(count_sat_ball(k, m, r), numtheory::ball_size(r, k + m));
}

/// zeta(k+m)/zeta(k) for k >= 2; 0 for k = 1 (one-variable equations are negligible).
inline double limit_density(unsigned k, unsigned m) {
  if (k < 1 || m < 1) throw PreconditionError("limit_density: k, m must be >= 1");
  if (k == 1) return 0.0;
  return numtheory::zeta(static_cast<int>(k + m)) / numtheory::zeta(static_cast<int>(k));
}

struct OneVarResidual {
  double density = 0;
  double model = 0;     // Z_r(m) / r
  double residual = 0;  // |density - model|
  double scale = 0;     // Z_r(m-1) / r^2
};

inline OneVarResidual one_var_residual(unsigned m, std::uint64_t r) {
  if (m < 1 || r < 1) throw PreconditionError("one_var_residual: m, r must be >= 1");
  OneVarResidual out;
  out.density = density_sat(1, m, r);
  const double rd = static_cast<double>(r);
  out.model = numtheory::partial_zeta(r, m) / rd;
  out.residual = std::abs(out.density - out.model);
  out.scale = numtheory::partial_zeta(r, m - 1) / (rd * rd);
  return out;
}

/// Enumerates every equation of B_r and runs decide on each.
inline Count brute_force_count(unsigned k, unsigned m, std::uint64_t r, Count budget, unsigned threads = 1) {
  if (k < 1 || m < 1) throw PreconditionError("brute_force_count: k, m must be >= 1");
  const Count volume = numtheory::ball_size(r, k + m);
  if (volume > budget) throw ResourceError("brute_force_count: ball volume exceeds budget");
  const Int ri = static_cast<Int>(r);
  const std::size_t width = 2 * r + 1;
  const unsigned dim = k + m;
  // Task = fixed value of the first coordinate.
  std::vector<Count> partial(width, 0);
  parallel_tasks(width, threads, [&](std::size_t task) {
    Equation eq{std::vector<Int>(k, -ri), std::vector<Int>(m, -ri)};
    auto coord = [&](unsigned i) -> Int& { return i < k ? eq.gamma[i] : eq.alpha[i - k]; };
    coord(0) = static_cast<Int>(task) - ri;
    Count hits = 0;
    while (true) {
      if (decide(eq).sat()) ++hits;
      unsigned i = 1;
      for (; i < dim; ++i) {
        if (coord(i) < ri) {
          ++coord(i);
          break;
        }
        coord(i) = -ri;
      }
      if (i == dim) break;
    }
    partial[task] = hits;
  });
  Count total = 0;
  for (Count c : partial) total += c;
  return total;
}

/// Parses `x1^2 x2^-3 a1^4`. Repeated factors add up; omitted ones are 0.
inline Equation parse_equation(std::string_view text, std::size_t k, std::size_t m) {
  Equation eq{std::vector<Int>(k, 0), std::vector<Int>(m, 0)};
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    const auto caret = tok.find('^');
    const std::string name = tok.substr(0, caret);
    Int e = 1;
    if (caret != std::string::npos) {
      try {
        std::size_t used = 0;
        e = std::stoll(tok.substr(caret + 1), &used);
        if (used != tok.size() - caret - 1) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ValidationError("bad exponent in factor '" + tok + "'");
      }
    }
    if (name.size() < 2 || (name[0] != 'x' && name[0] != 'a'))
      throw ValidationError("unknown generator '" + name + "'");
    std::size_t idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoul(name.substr(1), &used);
      if (used != name.size() - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError("unknown generator '" + name + "'");
    }
    auto& target = name[0] == 'x' ? eq.gamma : eq.alpha;
    if (idx < 1 || idx > target.size()) throw ValidationError("generator index out of range in '" + tok + "'");
    target[idx - 1] = detail::checked_add(target[idx - 1], e);
  }
  return eq;
}

inline std::string format_equation(const Equation& eq) {
  std::string out;
  auto emit = [&](char c, std::size_t i, Int e) {
    if (e == 0) return;
    if (!out.empty()) out += ' ';
    out += c + std::to_string(i + 1) + "^" + std::to_string(e);
  };
  for (std::size_t i = 0; i < eq.k(); ++i) emit('x', i, eq.gamma[i]);
  for (std::size_t j = 0; j < eq.m(); ++j) emit('a', j, eq.alpha[j]);
  return out.empty() ? "1" : out;
}

}  // namespace abelian
}  // namespace randeq
