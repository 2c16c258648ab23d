#pragma once

// Polycyclic presentations of finitely generated nilpotent groups and
// normal-form arithmetic by collection from the left.
//
// Every element has a unique normal form g_1^e_1 ... g_n^e_n with e_i in Z
// for infinite relative order and e_i in {0..w_i-1} otherwise. Relations:
//   g_i^{w_i}   = power word over g_{i+1..n}           (finite w_i only)
//   [g_j, g_i]  = commutator word over g_{j+1..n}      (j > i)
// with [a, b] = a^-1 b^-1 a b, so g_j g_i = g_i g_j [g_j, g_i].

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "randeq/errors.hpp"
#include "randeq/wide_int.hpp"

namespace randeq::pc {

/// Relative order 0 encodes "infinite".
inline constexpr Int kInfinite = 0;

struct Generator {
  std::string name;
  Int order = kInfinite;
  int weight = 1;
  bool in_group = true;  // false for equation variables and their commutators

  bool infinite() const { return order == kInfinite; }
};

/// (generator index, exponent) syllables.
using Word = std::vector<std::pair<std::size_t, Int>>;

struct Element {
  std::vector<Int> coords;

  Element() = default;
  explicit Element(std::size_t n) : coords(n, 0) {}
  explicit Element(std::vector<Int> c) : coords(std::move(c)) {}

  std::size_t size() const { return coords.size(); }
  Int operator[](std::size_t i) const { return coords[i]; }
  Int& operator[](std::size_t i) { return coords[i]; }
  bool is_identity() const {
    return std::all_of(coords.begin(), coords.end(), [](Int c) { return c == 0; });
  }
  bool operator==(const Element&) const = default;
};

/// Raw presentation data, before validation.
struct PcPresentation {
  std::vector<Generator> gens;
  int nilpotency_class = 1;
  std::map<std::size_t, Word> powers;                         // i -> g_i^{w_i}
  std::map<std::pair<std::size_t, std::size_t>, Word> comms;  // (j, i), j > i -> [g_j, g_i]
  bool lower_central = false;                                 // base declared to be a lower central base
  std::vector<std::size_t> tail_order;                        // optional explicit equation-space tail

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (gens[i].name == name) return i;
    return std::nullopt;
  }
};

/// h(G), t(G) and the torsion-free rank of G/G_2.
struct GroupSummary {
  int hirsch = 0;
  Int torsion_order = 1;
  int abelian_rank = 0;
  bool operator==(const GroupSummary&) const = default;
};

enum class CollectionStrategy {
  Automatic,  // closed-form class-2 update when the presentation admits it
  Generic,    // conjugation by automorphism powers, any class
};

/// Validated presentation with collection arithmetic. Immutable after
/// construction; all operations are const and thread-safe.
class PcGroup {
 public:
  explicit PcGroup(PcPresentation pres, CollectionStrategy strategy = CollectionStrategy::Automatic)
      : pres_(std::move(pres)) {
    validate_presentation();
    build_tables(strategy);
  }

  const PcPresentation& presentation() const { return pres_; }
  std::size_t rank() const { return pres_.gens.size(); }
  const Generator& gen(std::size_t i) const { return pres_.gens[i]; }
  int nilpotency_class() const { return pres_.nilpotency_class; }
  bool class2_fast_path() const { return fast_; }

  Element identity() const { return Element(rank()); }

  Element generator(std::size_t i, Int e = 1) const {
    Element g = identity();
    mul_gen_pow(g, i, e);
    return g;
  }

  bool is_valid(const Element& g) const {
    if (g.size() != rank()) return false;
    for (std::size_t i = 0; i < rank(); ++i) {
      const Int w = pres_.gens[i].order;
      if (w != kInfinite && (g[i] < 0 || g[i] >= w)) return false;
    }
    return true;
  }

  void validate_element(const Element& g) const {
    if (g.size() != rank())
      throw ValidationError("element has " + std::to_string(g.size()) + " coordinates, expected " +
                            std::to_string(rank()));
    for (std::size_t i = 0; i < rank(); ++i) {
      const Int w = pres_.gens[i].order;
      if (w != kInfinite && (g[i] < 0 || g[i] >= w))
        throw ValidationError("coordinate of " + pres_.gens[i].name + " out of range [0, " +
                              std::to_string(w) + ")");
    }
  }

  Element multiply(const Element& a, const Element& b) const {
    validate_element(a);
    validate_element(b);
    Element out = a;
    for (std::size_t i = 0; i < rank(); ++i)
      if (b[i] != 0) mul_gen_pow(out, i, b[i]);
    return out;
  }

  Element inverse(const Element& g) const {
    validate_element(g);
    Element out = identity();
    for (std::size_t i = rank(); i-- > 0;)
      if (g[i] != 0) mul_gen_pow(out, i, detail::checked_sub(Int{0}, g[i]));
    return out;
  }

  /// Repeated squaring; negative powers go through the inverse.
  Element power(const Element& g, Int n) const {
    validate_element(g);
    if (n == 0 || g.is_identity()) return identity();
    Element base = n < 0 ? inverse(g) : g;
    std::uint64_t e = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
    Element out = identity();
    while (true) {
      if (e & 1) out = multiply(out, base);
      e >>= 1;
      if (e == 0) break;
      base = multiply(base, base);
    }
    return out;
  }

  /// [a, b] = a^-1 b^-1 a b.
  Element commutator(const Element& a, const Element& b) const {
    return multiply(inverse(multiply(b, a)), multiply(a, b));
  }

  /// b^-1 a b.
  Element conjugate(const Element& a, const Element& b) const { return multiply(inverse(b), multiply(a, b)); }

  /// Collects an arbitrary word into normal form.
  Element from_word(const Word& w) const {
    Element out = identity();
    for (auto [i, e] : w) {
      if (i >= rank()) throw ValidationError("word mentions generator index out of range");
      if (e != 0) mul_gen_pow(out, i, e);
    }
    return out;
  }

  /// Normal word of an element (syllables with nonzero exponent).
  static Word to_word(const Element& g) {
    Word w;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g[i] != 0) w.emplace_back(i, g[i]);
    return w;
  }

  GroupSummary summary() const {
    if (!pres_.lower_central) throw PreconditionError("summary: presentation is not declared lower central");
    GroupSummary s;
    for (const auto& g : pres_.gens) {
      if (g.infinite()) {
        ++s.hirsch;
        if (g.weight == 1 && g.in_group) ++s.abelian_rank;
      } else {
        s.torsion_order = detail::checked_mul(s.torsion_order, g.order);
      }
    }
    return s;
  }

  /// Stored relation values as elements (identity when absent).
  const Element& commutator_relation(std::size_t j, std::size_t i) const { return comm_[j * rank() + i]; }
  const Element& power_relation(std::size_t i) const { return pow_[i]; }

 private:
  PcPresentation pres_;
  bool fast_ = false;
  std::vector<Element> pow_;        // g_i^{w_i} as element (identity for infinite)
  std::vector<Element> comm_;       // [g_j, g_i] as element, row-major (j, i)
  std::vector<Element> conj_inv_;   // g_j^{g_i^{-1}}, row-major (j, i), generic path
  std::vector<bool> trivial_conj_;  // g_i commutes with every later generator
  std::vector<bool> central_;

  void ensure(bool ok, const std::string& msg) const {
    if (!ok) throw ValidationError(msg);
  }

  void validate_presentation() const {
    const std::size_t n = rank();
    const int c = pres_.nilpotency_class;
    ensure(c >= 1, "nilpotency class must be >= 1");
    for (std::size_t i = 0; i < n; ++i) {
      const auto& g = pres_.gens[i];
      ensure(!g.name.empty(), "generator with empty name");
      ensure(g.order == kInfinite || g.order >= 2, "generator " + g.name + ": finite order must be >= 2");
      ensure(g.weight >= 1 && g.weight <= c, "generator " + g.name + ": weight outside 1..class");
      for (std::size_t j = 0; j < i; ++j) ensure(pres_.gens[j].name != g.name, "duplicate generator " + g.name);
    }
    auto check_word = [&](const Word& w, std::size_t min_index, int min_weight, const std::string& what) {
      for (auto [idx, e] : w) {
        ensure(idx < n, what + ": generator index out of range");
        ensure(idx >= min_index, what + ": mentions " + pres_.gens[idx].name + ", which is not a later generator");
        ensure(pres_.gens[idx].weight >= min_weight,
               what + ": generator " + pres_.gens[idx].name + " has weight below the relation weight");
        (void)e;
      }
    };
    for (const auto& [i, w] : pres_.powers) {
      ensure(i < n, "power relation for unknown generator");
      ensure(!pres_.gens[i].infinite(), "power relation given for infinite-order generator " + pres_.gens[i].name);
      // In a lower central base the power of a weight-w generator lies in G_{w+1}.
      const int min_w = pres_.gens[i].weight + (pres_.lower_central ? 1 : 0);
      check_word(w, i + 1, min_w, "power relation of " + pres_.gens[i].name);
    }
    for (const auto& [ji, w] : pres_.comms) {
      const auto [j, i] = ji;
      ensure(j < n && i < n && j > i, "commutator relation must be [g_j, g_i] with j later than i");
      const int wsum = pres_.gens[j].weight + pres_.gens[i].weight;
      const std::string what = "commutator [" + pres_.gens[j].name + "," + pres_.gens[i].name + "]";
      if (wsum > c) ensure(w.empty() || std::all_of(w.begin(), w.end(), [](auto p) { return p.second == 0; }),
                           what + ": must be trivial above the nilpotency class");
      check_word(w, j + 1, wsum, what);
    }
    if (pres_.lower_central)
      for (std::size_t i = 1; i < n; ++i)
        ensure(pres_.gens[i - 1].weight <= pres_.gens[i].weight, "lower central base must be ordered by weight");
    for (std::size_t t : pres_.tail_order) ensure(t < n, "tail mentions unknown generator");
  }

  static bool word_support_in(const Element& e, const std::vector<bool>& mask) {
    for (std::size_t l = 0; l < e.size(); ++l)
      if (e[l] != 0 && !mask[l]) return false;
    return true;
  }

  // Relations are converted level by level from the last generator down:
  // converting a word over g_{l+1..n} only needs arithmetic that touches
  // indices > l, which is complete by then.
  void build_tables(CollectionStrategy strategy) {
    const std::size_t n = rank();
    pow_.assign(n, identity());
    comm_.assign(n * n, identity());
    conj_inv_.assign(n * n, identity());
    trivial_conj_.assign(n, true);
    central_.assign(n, true);
    fast_ = false;  // generic collection while the tables are populated

    for (std::size_t l = n; l-- > 0;) {
      if (auto it = pres_.powers.find(l); it != pres_.powers.end()) pow_[l] = from_word(it->second);
      for (std::size_t j = l + 1; j < n; ++j) {
        auto it = pres_.comms.find({j, l});
        if (it == pres_.comms.end()) continue;
        comm_[j * n + l] = from_word(it->second);
        if (!comm_[j * n + l].is_identity()) trivial_conj_[l] = false;
      }
      // g_j^{g_l^{-1}} = g_j * (phi^{-1}([g_j, g_l]))^{-1}, descending j so
      // phi^{-1} is known on every generator the relation mentions.
      for (std::size_t j = n; j-- > l + 1;) {
        const Element& c = comm_[j * n + l];
        Element img = identity();
        img[j] = 1;
        if (!c.is_identity()) {
          Element pre = identity();
          for (std::size_t q = j + 1; q < n; ++q)
            if (c[q] != 0) pre = multiply(pre, power(conj_inv_[q * n + l], c[q]));
          img = multiply(img, inverse(pre));
        }
        conj_inv_[j * n + l] = std::move(img);
      }
    }

    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i)
        if (!comm_[j * n + i].is_identity()) central_[j] = central_[i] = false;
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j)
      for (std::size_t i = 0; i < j && ok; ++i) ok = word_support_in(comm_[j * n + i], central_);
    for (std::size_t l = 0; l < n && ok; ++l)
      if (central_[l]) ok = word_support_in(pow_[l], central_);
    fast_ = ok && strategy == CollectionStrategy::Automatic;
  }

  // Adds a central vector to e and carries finite central coordinates.
  void add_central(Element& e, const std::vector<SignedWide>& z, std::size_t from) const {
    const std::size_t n = rank();
    for (std::size_t l = from; l < n; ++l) {
      if (z[l] != 0) e[l] = detail::narrow(static_cast<SignedWide>(e[l]) + z[l]);
    }
    for (std::size_t l = from; l < n; ++l) {
      const Int w = pres_.gens[l].order;
      if (!central_[l] || w == kInfinite || (e[l] >= 0 && e[l] < w)) continue;
      const Int q = floor_div(e[l], w);
      e[l] -= q * w;
      const Element& p = pow_[l];
      for (std::size_t s = l + 1; s < n; ++s)
        if (p[s] != 0) e[s] = detail::narrow(static_cast<SignedWide>(e[s]) + static_cast<SignedWide>(p[s]) * q);
    }
  }

  // T^{g_i^n} for T supported on indices > i.
  Element conj_tail(const Element& tail, std::size_t i, Int n) const {
    if (trivial_conj_[i] || tail.is_identity()) return tail;
    const std::size_t r = rank();
    if (fast_) {
      // Class 2: T^{g^n} = T * prod_j [g_j, g_i]^{n T_j}, a central correction.
      std::vector<SignedWide> z(r, 0);
      for (std::size_t j = i + 1; j < r; ++j) {
        if (tail[j] == 0) continue;
        const Element& c = comm_[j * r + i];
        if (c.is_identity()) continue;
        const SignedWide f = static_cast<SignedWide>(n) * tail[j];
        for (std::size_t l = j + 1; l < r; ++l)
          if (c[l] != 0) z[l] = detail::checked_add(z[l], detail::checked_mul(f, static_cast<SignedWide>(c[l])));
      }
      Element out = tail;
      add_central(out, z, i + 1);
      return out;
    }
    // Generic: images of g_{i+1..} under phi^n by repeated squaring, where
    // phi(g_j) = g_j [g_j, g_i] and phi^{-1} was tabulated.
    std::vector<Element> base(r), acc(r);
    for (std::size_t j = i + 1; j < r; ++j) {
      acc[j] = identity();
      acc[j][j] = 1;
      if (n > 0) {
        base[j] = comm_[j * r + i];
        base[j][j] = 1;
      } else {
        base[j] = conj_inv_[j * r + i];
      }
    }
    auto apply = [&](const std::vector<Element>& images, const Element& x) {
      Element out = identity();
      for (std::size_t j = i + 1; j < r; ++j)
        if (x[j] != 0) out = multiply(out, power(images[j], x[j]));
      return out;
    };
    std::uint64_t e = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
    bool acc_is_id = true;
    while (true) {
      if (e & 1) {
        if (acc_is_id) {
          acc = base;
          acc_is_id = false;
        } else {
          std::vector<Element> next(r);
          for (std::size_t j = i + 1; j < r; ++j) next[j] = apply(base, acc[j]);
          acc = std::move(next);
        }
      }
      e >>= 1;
      if (e == 0) break;
      std::vector<Element> sq(r);
      for (std::size_t j = i + 1; j < r; ++j) sq[j] = apply(base, base[j]);
      base = std::move(sq);
    }
    return apply(acc, tail);
  }

  // e <- e * g_i^n, in place.
  void mul_gen_pow(Element& e, std::size_t i, Int n) const {
    if (n == 0) return;
    const std::size_t r = rank();
    Element tail = identity();
    bool has_tail = false;
    for (std::size_t j = i + 1; j < r; ++j) {
      if (e[j] != 0) {
        tail[j] = e[j];
        e[j] = 0;
        has_tail = true;
      }
    }
    Int value = detail::checked_add(e[i], n);
    if (has_tail) tail = conj_tail(tail, i, n);
    const Int w = pres_.gens[i].order;
    if (w != kInfinite && (value < 0 || value >= w)) {
      const Int q = floor_div(value, w);
      value -= q * w;
      if (!pow_[i].is_identity()) {
        const Element carry = power(pow_[i], q);
        tail = has_tail ? multiply(carry, tail) : carry;
        has_tail = true;
      }
    }
    e[i] = value;
    if (has_tail)
      for (std::size_t j = i + 1; j < r; ++j) e[j] = tail[j];
  }
};

}  // namespace randeq::pc
