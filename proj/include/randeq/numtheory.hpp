#pragma once

// Integer and analytic number theory kernel: Bezout certificates, the
// Moebius sieve, zeta evaluation, and exact counts of multiple and
// gamma-primitive lattice vectors in max-norm balls.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "randeq/errors.hpp"
#include "randeq/wide_int.hpp"

namespace randeq::numtheory {

struct GcdCertificate {
  Int g = 0;               // gcd of absolute values, 0 iff all inputs are 0
  std::vector<Int> xi;     // sum xi[i] * values[i] == g
};

namespace detail {

inline SignedWide abs_wide(SignedWide v) { return v < 0 ? -v : v; }

// Rounds a/b to the nearest integer (b > 0).
inline SignedWide round_div(SignedWide a, SignedWide b) {
  SignedWide q = a / b;
  SignedWide rem = a - q * b;
  if (2 * abs_wide(rem) > b) q += (a < 0 ? -1 : 1);
  return q;
}

}  // namespace detail

/// Extended gcd over a tuple. Every non-pivot coefficient is reduced modulo
/// |v_pivot|/g, which keeps it at most max|v_i|/2; the pivot coefficient is
/// then at most n*max|v_i|.
inline GcdCertificate ext_gcd(std::span<const Int> values) {
  const std::size_t n = values.size();
  if (n == 0) throw PreconditionError("ext_gcd: empty value list");

  std::vector<SignedWide> xi(n, 0);
  SignedWide g = 0;
  std::size_t pivot = n;  // index of the smallest nonzero |v| seen so far

  for (std::size_t i = 0; i < n; ++i) {
    const SignedWide v = values[i];
    if (v == 0) continue;
    if (pivot == n) {
      g = detail::abs_wide(v);
      xi[i] = v < 0 ? -1 : 1;
      pivot = i;
      continue;
    }
    // Euclid on (g, |v|): s*g + t*|v| = g'.
    SignedWide a = g, b = detail::abs_wide(v);
    SignedWide s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (b != 0) {
      const SignedWide q = a / b;
      SignedWide tmp = a - q * b;
      a = b;
      b = tmp;
      tmp = s0 - q * s1;
      s0 = s1;
      s1 = tmp;
      tmp = t0 - q * t1;
      t0 = t1;
      t1 = tmp;
    }
    for (std::size_t j = 0; j < i; ++j) xi[j] *= s0;
    xi[i] = v < 0 ? -t0 : t0;
    g = a;
    if (detail::abs_wide(v) < detail::abs_wide(static_cast<SignedWide>(values[pivot]))) pivot = i;

    // Reduce every non-pivot coefficient along the kernel vectors
    // (v_j/g) e_p - (v_p/g) e_j, then recover xi_p from the identity.
    const SignedWide vp = values[pivot];
    const SignedWide step = detail::abs_wide(vp) / g;
    SignedWide rest = 0;
    for (std::size_t j = 0; j <= i; ++j) {
      if (j == pivot) continue;
      if (values[j] == 0) {
        xi[j] = 0;
      } else {
        xi[j] -= detail::round_div(xi[j], step) * step;
      }
      rest += xi[j] * static_cast<SignedWide>(values[j]);
    }
    xi[pivot] = (g - rest) / vp;
  }

  GcdCertificate out;
  out.g = randeq::detail::narrow(g);
  out.xi.reserve(n);
  for (SignedWide c : xi) out.xi.push_back(randeq::detail::narrow(c));
  return out;
}

inline GcdCertificate ext_gcd(std::initializer_list<Int> values) {
  const std::vector<Int> v(values);
  return ext_gcd(std::span<const Int>(v));
}

/// gcd of absolute values; 0 for the all-zero tuple.
inline Int gcd_abs(std::span<const Int> values) {
  Int g = 0;
  for (Int v : values) g = std::gcd(g, v < 0 ? -v : v);
  return g;
}

/// Default ceiling on sieve entries (about 1.3 GB of tables at the limit).
inline constexpr std::size_t kDefaultSieveBudget = std::size_t{1} << 28;

/// mu(1..n_max) with Mertens prefix sums for block summation.
class MobiusTable {
 public:
  MobiusTable() = default;

  std::size_t n_max() const { return mu_.empty() ? 0 : mu_.size() - 1; }

  int mu(std::size_t n) const {
    if (n == 0 || n > n_max()) throw PreconditionError("MobiusTable: index out of range");
    return mu_[n];
  }

  /// sum_{d <= n} mu(d); mertens(0) == 0.
  std::int64_t mertens(std::size_t n) const {
    if (n > n_max()) throw PreconditionError("MobiusTable: index out of range");
    return mertens_[n];
  }

  std::span<const std::int8_t> values() const { return {mu_.data() + 1, n_max()}; }

 private:
  friend MobiusTable mobius_sieve(std::size_t, std::size_t);
  std::vector<std::int8_t> mu_;
  std::vector<std::int32_t> mertens_;
};

/// Linear sieve for the Moebius function.
inline MobiusTable mobius_sieve(std::size_t n_max, std::size_t budget = kDefaultSieveBudget) {
  if (n_max < 1) throw PreconditionError("mobius_sieve: n_max must be >= 1");
  if (n_max > budget) throw ResourceError("mobius_sieve: n_max exceeds the configured memory budget");

  MobiusTable t;
  t.mu_.assign(n_max + 1, 0);
  t.mertens_.assign(n_max + 1, 0);
  std::vector<std::uint32_t> primes;
  std::vector<bool> composite(n_max + 1, false);
  t.mu_[1] = 1;
  for (std::size_t i = 2; i <= n_max; ++i) {
    if (!composite[i]) {
      primes.push_back(static_cast<std::uint32_t>(i));
      t.mu_[i] = -1;
    }
    for (std::uint32_t p : primes) {
      const std::size_t ip = i * p;
      if (ip > n_max) break;
      composite[ip] = true;
      if (i % p == 0) {
        t.mu_[ip] = 0;
        break;
      }
      t.mu_[ip] = static_cast<std::int8_t>(-t.mu_[i]);
    }
  }
  for (std::size_t i = 1; i <= n_max; ++i) t.mertens_[i] = t.mertens_[i - 1] + t.mu_[i];
  return t;
}

/// zeta(s) for integer s >= 2. The tail sum_{n > N} n^{-s} lies in
/// [(N+1)^{1-s}, N^{1-s}] / (s-1); N is the smallest cutoff whose bracket
/// half-width is <= eps/2, and the bracket midpoint is added to the
/// descending partial sum. The result stays inside
/// [partial, partial + N^{1-s}/(s-1)].
struct ZetaEvaluation {
  double value = 0;
  double partial = 0;
  double tail_bound = 0;   // N^{1-s}/(s-1)
  double error_bound = 0;  // half-width of the tail bracket
  std::uint64_t cutoff = 0;
};

inline ZetaEvaluation zeta_detailed(int s, double eps) {
  if (s < 2) throw DomainError("zeta: s must be an integer >= 2");
  if (!(eps > 0)) throw DomainError("zeta: eps must be positive");
  const double sm1 = s - 1;
  auto upper = [&](double n) { return std::pow(n, 1.0 - s) / sm1; };
  auto half_width = [&](std::uint64_t n) {
    return 0.5 * (upper(static_cast<double>(n)) - upper(static_cast<double>(n + 1)));
  };
  std::uint64_t hi = 1;
  while (half_width(hi) > eps / 2) hi *= 2;
  std::uint64_t lo = hi > 1 ? hi / 2 : 1;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (half_width(mid) <= eps / 2) hi = mid; else lo = mid + 1;
  }
  const std::uint64_t n = hi;

  double partial = 0;
  for (std::uint64_t i = n; i >= 1; --i) partial += std::pow(static_cast<double>(i), -s);

  ZetaEvaluation z;
  z.cutoff = n;
  z.partial = partial;
  z.tail_bound = upper(static_cast<double>(n));
  const double tail_lo = upper(static_cast<double>(n + 1));
  z.value = partial + 0.5 * (tail_lo + z.tail_bound);
  z.error_bound = half_width(n);
  return z;
}

inline double zeta(int s, double eps = 1e-12) { return zeta_detailed(s, eps).value; }

/// Z_n(m) = sum_{g=1..n} g^{-m}.
inline double partial_zeta(std::uint64_t n, unsigned m) {
  if (n < 1) throw PreconditionError("partial_zeta: n must be >= 1");
  double s = 0;
  for (std::uint64_t g = n; g >= 1; --g) s += std::pow(static_cast<double>(g), -static_cast<double>(m));
  return s;
}

/// |B_r| in Z^dim, i.e. (2r+1)^dim.
inline Count ball_size(std::uint64_t r, unsigned dim) { return ipow(2 * static_cast<Count>(r) + 1, dim); }

/// |gamma Z^k intersect B_r| = (2 floor(r/gamma) + 1)^k.
inline Count count_ball_multiples(std::uint64_t r, std::uint64_t gamma, unsigned k) {
  if (gamma < 1) throw PreconditionError("count_ball_multiples: gamma must be >= 1");
  if (k < 1) throw PreconditionError("count_ball_multiples: k must be >= 1");
  return ball_size(r / gamma, k);
}

/// Number of primitive (gcd 1) vectors in the radius-t ball of Z^k:
/// sum_{d<=t} mu(d) ((2 floor(t/d) + 1)^k - 1), evaluated over blocks of
/// equal quotient with Mertens prefix sums.
inline Count count_primitive(std::uint64_t t, unsigned k, const MobiusTable& table) {
  if (t == 0) return 0;
  if (t > table.n_max()) throw PreconditionError("count_primitive: Moebius table too small");
  SignedWide sum = 0;
  for (std::uint64_t d = 1; d <= t;) {
    const std::uint64_t q = t / d;
    const std::uint64_t last = t / q;
    const SignedWide mu_block = table.mertens(last) - table.mertens(d - 1);
    if (mu_block != 0) {
      const SignedWide shell = ipow_signed(2 * static_cast<SignedWide>(q) + 1, k) - 1;
      sum = randeq::detail::checked_add(sum, randeq::detail::checked_mul(mu_block, shell));
    }
    d = last + 1;
  }
  return static_cast<Count>(sum);
}

/// |P_{k,gamma} intersect B_r|: nonzero tuples in [-r, r]^k whose gcd of
/// absolute values is exactly gamma. Equals the primitive count at radius
/// floor(r / gamma).
inline Count count_gamma_primitive(std::uint64_t r, std::uint64_t gamma, unsigned k, const MobiusTable& table) {
  if (gamma < 1) throw PreconditionError("count_gamma_primitive: gamma must be >= 1");
  if (k < 1) throw PreconditionError("count_gamma_primitive: k must be >= 1");
  const std::uint64_t t = r / gamma;
  if (t > table.n_max()) throw PreconditionError("count_gamma_primitive: table must cover floor(r/gamma)");
  return count_primitive(t, k, table);
}

inline double density_multiples(std::uint64_t r, std::uint64_t gamma, unsigned k) {
  return ratio(count_ball_multiples(r, gamma, k), ball_size(r, k));
}

inline double density_primitive(std::uint64_t r, std::uint64_t gamma, unsigned k, const MobiusTable& table) {
  return ratio(count_gamma_primitive(r, gamma, k, table), ball_size(r, k));
}

/// Frequency of gamma Z^k in B_r against its limit gamma^{-k} and the
/// explicit rate bound 2^{k+1} k / (r gamma^{k-1}).
struct RateReport {
  std::uint64_t r = 0;
  std::uint64_t gamma = 0;
  unsigned k = 0;
  double empirical = 0;
  double limit = 0;
  double residual = 0;
  double bound = 0;
  bool within_bound = false;  // decided in exact integer arithmetic
};

inline RateReport rate_check_multiples(std::uint64_t r, std::uint64_t gamma, unsigned k) {
  if (gamma < 1 || r < gamma) throw PreconditionError("rate_check_multiples: requires r >= gamma >= 1");
  if (k < 1) throw PreconditionError("rate_check_multiples: k must be >= 1");
  RateReport rep;
  rep.r = r;
  rep.gamma = gamma;
  rep.k = k;

  const Count hits = count_ball_multiples(r, gamma, k);
  const Count ball = ball_size(r, k);
  const Count gk = ipow(gamma, k);
  rep.empirical = ratio(hits, ball);
  rep.limit = 1.0 / static_cast<double>(static_cast<long double>(gk));
  // |hits/ball - 1/g^k| computed over the common denominator ball * g^k.
  const Count lhs_a = hits * gk;
  const Count diff = lhs_a > ball ? lhs_a - ball : ball - lhs_a;
  rep.residual = static_cast<double>(static_cast<long double>(diff) /
                                     (static_cast<long double>(ball) * static_cast<long double>(gk)));
  rep.bound = std::ldexp(static_cast<double>(k), static_cast<int>(k) + 1) /
              (static_cast<double>(r) * std::pow(static_cast<double>(gamma), static_cast<double>(k) - 1));
  // residual <= bound  <=>  diff * r <= 2^{k+1} k gamma ball
  const Count lhs = randeq::detail::checked_mul(diff, static_cast<Count>(r));
  const Count rhs = randeq::detail::checked_mul(
      randeq::detail::checked_mul(static_cast<Count>(k) << (k + 1), static_cast<Count>(gamma)), ball);
  rep.within_bound = lhs <= rhs;
  return rep;
}

/// max over gamma <= r of gamma^{scale_power} * |rho_r(P_{k,gamma}) - 1/(gamma^k zeta(k))|.
/// scale_power = 0 gives the plain uniform deviation, k-1 the scaled one.
inline double max_primitive_deviation(std::uint64_t r, unsigned k, unsigned scale_power, const MobiusTable& table) {
  if (k < 2) throw PreconditionError("max_primitive_deviation: k must be >= 2");
  const double zk = zeta(static_cast<int>(k));
  const Count ball = ball_size(r, k);
  double worst = 0;
  for (std::uint64_t g = 1; g <= r;) {
    const std::uint64_t t = r / g;
    const std::uint64_t last = r / t;
    const double freq = ratio(count_primitive(t, k, table), ball);
    for (std::uint64_t h = g; h <= last; ++h) {
      const double gd = static_cast<double>(h);
      const double lim = 1.0 / (std::pow(gd, k) * zk);
      worst = std::max(worst, std::pow(gd, scale_power) * std::abs(freq - lim));
    }
    g = last + 1;
  }
  return worst;
}

}  // namespace randeq::numtheory
