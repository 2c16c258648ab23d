#pragma once

// The space G_X of k-variable equations over a nilpotent group G: the free
// product of G and the free nilpotent group on x_1..x_k inside the variety
// of class-c nilpotent groups. An equation is the normal form
//   x_1^g_1 ... x_k^g_k f_1^d_1 ... f_p^d_p
// where f_1..f_p (the tail) are the non-variable generators of G_X.

#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "randeq/abelian_eq.hpp"
#include "randeq/numtheory.hpp"
#include "randeq/pcgroup.hpp"

namespace randeq::pc {

inline constexpr std::size_t kNotInGroup = static_cast<std::size_t>(-1);

struct TailEntry {
  std::size_t gx_index = 0;
  std::string name;
  bool in_group = false;
  Int order = kInfinite;
  int weight = 1;
  std::size_t g_index = kNotInGroup;  // index in G's base when in_group

  bool infinite() const { return order == kInfinite; }
};

struct NilpotentEquation {
  std::vector<Int> gamma;  // exponents of x_1..x_k
  std::vector<Int> delta;  // tail coordinates, in tail order
  bool operator==(const NilpotentEquation&) const = default;
};

/// One element of G per variable.
struct NilpotentWitness {
  std::vector<Element> assignments;
};

class EquationSpace {
 public:
  /// Wraps a full presentation of G_X. Variables are the weight-1
  /// generators with in_group = 0; G is the subgroup on the in_group
  /// generators; every other generator must be defined by a commutator
  /// relation [g, h] = f^{+-1} w with f its first syllable.
  static EquationSpace from_gx(PcPresentation gx_pres) {
    return EquationSpace(std::move(gx_pres));
  }

  const PcGroup& gx() const { return gx_; }
  const PcGroup& group() const { return g_; }
  std::size_t k() const { return variables_.size(); }
  std::size_t tail_size() const { return tail_.size(); }
  const std::vector<TailEntry>& tail() const { return tail_; }
  const std::vector<std::size_t>& variables() const { return variables_; }
  std::size_t abelian_rank() const { return abelian_tail_.size(); }
  GroupSummary group_summary() const { return g_.summary(); }

  NilpotentEquation trivial_equation() const {
    return {std::vector<Int>(k(), 0), std::vector<Int>(tail_size(), 0)};
  }

  void validate(const NilpotentEquation& eq) const {
    if (eq.gamma.size() != k())
      throw ValidationError("equation has " + std::to_string(eq.gamma.size()) + " variable exponents, expected " +
                            std::to_string(k()));
    if (eq.delta.size() != tail_size())
      throw ValidationError("equation has " + std::to_string(eq.delta.size()) + " tail coordinates, expected " +
                            std::to_string(tail_size()));
    for (std::size_t s = 0; s < tail_size(); ++s) {
      const auto& t = tail_[s];
      if (!t.infinite() && (eq.delta[s] < 0 || eq.delta[s] >= t.order))
        throw ValidationError("tail coordinate " + t.name + " outside [0, " + std::to_string(t.order) + ")");
    }
  }

  Int norm(const NilpotentEquation& eq) const {
    Int n = 0;
    for (Int v : eq.gamma) n = std::max(n, v < 0 ? -v : v);
    for (Int v : eq.delta) n = std::max(n, v < 0 ? -v : v);
    return n;
  }

  static Int exponent(const NilpotentEquation& eq) { return numtheory::gcd_abs(eq.gamma); }

  /// Images of every G_X generator under x_i -> y_i, fixing G.
  std::vector<Element> generator_images(std::span<const Element> y) const {
    if (y.size() != k()) throw ValidationError("assignment has wrong number of variables");
    for (const auto& e : y) g_.validate_element(e);
    std::vector<Element> img(gx_.rank());
    for (std::size_t i = 0; i < k(); ++i) img[variables_[i]] = y[i];
    for (std::size_t l = 0; l < gx_.rank(); ++l)
      if (to_g_[l] != kNotInGroup) img[l] = g_.generator(to_g_[l]);
    for (const auto& rc : recipes_) {
      // f^{sign} rest = [g_left, g_right]  =>  f = ([.,.] rest^{-1})^{sign}
      Element rest = g_.identity();
      for (auto [q, e] : rc.rest) rest = g_.multiply(rest, g_.power(img[q], e));
      Element v = g_.multiply(g_.commutator(img[rc.left], img[rc.right]), g_.inverse(rest));
      img[rc.gen] = rc.sign > 0 ? std::move(v) : g_.inverse(v);
    }
    return img;
  }

  /// Image in G of the equation under the assignment.
  Element evaluate(const NilpotentEquation& eq, std::span<const Element> y) const {
    validate(eq);
    const auto img = generator_images(y);
    Element out = g_.identity();
    for (std::size_t i = 0; i < k(); ++i)
      if (eq.gamma[i] != 0) out = g_.multiply(out, g_.power(y[i], eq.gamma[i]));
    for (std::size_t s = 0; s < tail_size(); ++s)
      if (eq.delta[s] != 0) out = g_.multiply(out, g_.power(img[tail_[s].gx_index], eq.delta[s]));
    return out;
  }

  /// Image in the maximal free abelian quotient of G: gamma is kept and
  /// alpha collects the infinite-order weight-1 coordinates of G.
  abelian::Equation abelianization_image(const NilpotentEquation& eq) const {
    validate(eq);
    abelian::Equation a;
    a.gamma = eq.gamma;
    for (std::size_t s : abelian_tail_) a.alpha.push_back(eq.delta[s]);
    return a;
  }

  /// The equation as an element of G_X (product in tail order).
  Element to_gx_element(const NilpotentEquation& eq) const {
    validate(eq);
    Element out = gx_.identity();
    for (std::size_t i = 0; i < k(); ++i)
      if (eq.gamma[i] != 0) out = gx_.multiply(out, gx_.generator(variables_[i], eq.gamma[i]));
    for (std::size_t s = 0; s < tail_size(); ++s)
      if (eq.delta[s] != 0) out = gx_.multiply(out, gx_.generator(tail_[s].gx_index, eq.delta[s]));
    return out;
  }

  /// Reads an element of G_X as an equation. Requires the variables to
  /// precede the tail in the base and the tail to follow base order.
  NilpotentEquation from_gx_element(const Element& u) const {
    gx_.validate_element(u);
    if (!base_ordered_) throw PreconditionError("from_gx_element: tail is not in base order");
    NilpotentEquation eq = trivial_equation();
    for (std::size_t i = 0; i < k(); ++i) eq.gamma[i] = u[variables_[i]];
    for (std::size_t s = 0; s < tail_size(); ++s) eq.delta[s] = u[tail_[s].gx_index];
    return eq;
  }

  /// Text form: whitespace-separated `name^exp` over variable and tail names.
  NilpotentEquation parse_equation(std::string_view text) const {
    NilpotentEquation eq = trivial_equation();
    std::vector<bool> seen(gx_.rank(), false);
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
      const auto caret = tok.rfind('^');
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
      const auto idx = gx_.presentation().find(name);
      if (!idx) throw ValidationError("unknown generator '" + name + "'");
      if (seen[*idx]) throw ValidationError("generator '" + name + "' appears twice");
      seen[*idx] = true;
      if (slot_[*idx].is_variable) eq.gamma[slot_[*idx].pos] = e;
      else eq.delta[slot_[*idx].pos] = e;
    }
    validate(eq);
    return eq;
  }

  std::string format_equation(const NilpotentEquation& eq) const {
    std::string out;
    auto emit = [&](const std::string& name, Int e) {
      if (e == 0) return;
      if (!out.empty()) out += ' ';
      out += name + "^" + std::to_string(e);
    };
    for (std::size_t i = 0; i < k(); ++i) emit(gx_.gen(variables_[i]).name, eq.gamma[i]);
    for (std::size_t s = 0; s < tail_size(); ++s) emit(tail_[s].name, eq.delta[s]);
    return out.empty() ? "1" : out;
  }

  std::string format_element(const Element& g) const {
    std::string out;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] == 0) continue;
      if (!out.empty()) out += ' ';
      out += g_.gen(i).name + "^" + std::to_string(g[i]);
    }
    return out.empty() ? "1" : out;
  }

 private:
  struct Recipe {
    std::size_t gen = 0;    // defined generator
    std::size_t left = 0;   // [left, right] = gen^sign * rest
    std::size_t right = 0;
    int sign = 1;
    Word rest;
  };
  struct Slot {
    bool is_variable = false;
    std::size_t pos = 0;
  };

  std::vector<std::size_t> to_g_;  // filled while g_ is built, so declared first
  PcGroup gx_;
  PcGroup g_;
  std::vector<std::size_t> variables_;
  std::vector<TailEntry> tail_;
  std::vector<Recipe> recipes_;  // in dependency order
  std::vector<std::size_t> abelian_tail_;
  std::vector<Slot> slot_;
  bool base_ordered_ = true;

  static PcGroup extract_group(const PcPresentation& gx, std::vector<std::size_t>& to_g) {
    PcPresentation g;
    g.nilpotency_class = gx.nilpotency_class;
    g.lower_central = gx.lower_central;
    to_g.assign(gx.gens.size(), kNotInGroup);
    for (std::size_t l = 0; l < gx.gens.size(); ++l) {
      if (!gx.gens[l].in_group) continue;
      to_g[l] = g.gens.size();
      g.gens.push_back(gx.gens[l]);
    }
    if (g.gens.empty()) throw ValidationError("equation space has no coefficient-group generators");
    auto remap = [&](const Word& w, const std::string& what) {
      Word r;
      for (auto [q, e] : w) {
        if (to_g[q] == kNotInGroup)
          throw ValidationError(what + " of a group generator mentions non-group generator " + gx.gens[q].name);
        r.emplace_back(to_g[q], e);
      }
      return r;
    };
    for (const auto& [i, w] : gx.powers)
      if (to_g[i] != kNotInGroup) g.powers[to_g[i]] = remap(w, "power relation");
    for (const auto& [ji, w] : gx.comms)
      if (to_g[ji.first] != kNotInGroup && to_g[ji.second] != kNotInGroup)
        g.comms[{to_g[ji.first], to_g[ji.second]}] = remap(w, "commutator relation");
    return PcGroup(std::move(g));
  }

  explicit EquationSpace(PcPresentation pres)
      : to_g_(), gx_(pres), g_(extract_group(pres, to_g_)) {
    const std::size_t n = gx_.rank();
    slot_.assign(n, Slot{});
    std::vector<bool> is_var(n, false);
    for (std::size_t l = 0; l < n; ++l) {
      const auto& g = gx_.gen(l);
      if (!g.in_group && g.weight == 1) {
        if (!g.infinite()) throw ValidationError("variable " + g.name + " must have infinite order");
        is_var[l] = true;
        slot_[l] = {true, variables_.size()};
        variables_.push_back(l);
      }
    }
    if (variables_.empty()) throw ValidationError("equation space has no variables (weight-1 generators with ing 0)");

    std::vector<std::size_t> order;
    if (!pres.tail_order.empty()) {
      std::vector<bool> hit(n, false);
      for (std::size_t t : pres.tail_order) {
        if (is_var[t]) throw ValidationError("tail must not list variable " + gx_.gen(t).name);
        if (hit[t]) throw ValidationError("tail lists " + gx_.gen(t).name + " twice");
        hit[t] = true;
        order.push_back(t);
      }
      for (std::size_t l = 0; l < n; ++l)
        if (!is_var[l] && !hit[l]) throw ValidationError("tail omits generator " + gx_.gen(l).name);
    } else {
      for (std::size_t l = 0; l < n; ++l)
        if (!is_var[l]) order.push_back(l);
    }
    for (std::size_t l = 0; l + 1 < variables_.size(); ++l)
      if (variables_[l + 1] != variables_[l] + 1) base_ordered_ = false;
    if (!variables_.empty() && variables_.front() != 0) base_ordered_ = false;
    for (std::size_t s = 0; s + 1 < order.size(); ++s)
      if (order[s + 1] < order[s]) base_ordered_ = false;

    for (std::size_t t : order) {
      const auto& g = gx_.gen(t);
      slot_[t] = {false, tail_.size()};
      if (g.in_group && g.weight == 1 && g.infinite()) abelian_tail_.push_back(tail_.size());
      tail_.push_back({t, g.name, g.in_group, g.order, g.weight, to_g_[t]});
    }
    build_recipes(is_var);
  }

  void build_recipes(const std::vector<bool>& is_var) {
    const std::size_t n = gx_.rank();
    std::vector<std::optional<Recipe>> def(n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        const Element& c = gx_.commutator_relation(j, i);
        std::size_t l = 0;
        while (l < n && c[l] == 0) ++l;
        if (l == n || is_var[l] || gx_.gen(l).in_group || def[l]) continue;
        const Int w = gx_.gen(l).order;
        int sign = 0;
        if (c[l] == 1) sign = 1;
        else if (w == kInfinite && c[l] == -1) sign = -1;
        else if (w != kInfinite && c[l] == w - 1 && gx_.power_relation(l).is_identity()) sign = -1;
        if (sign == 0) continue;
        Recipe rc;
        rc.gen = l;
        rc.left = j;
        rc.right = i;
        rc.sign = sign;
        for (std::size_t q = l + 1; q < n; ++q)
          if (c[q] != 0) rc.rest.emplace_back(q, c[q]);
        def[l] = std::move(rc);
      }
    }
    for (std::size_t l = 0; l < n; ++l)
      if (!is_var[l] && !gx_.gen(l).in_group && !def[l])
        throw ValidationError("generator " + gx_.gen(l).name +
                              " has no defining commutator relation [g, h] = " + gx_.gen(l).name + "^(+-1) ...");

    // Depth-first ordering; a generator's recipe runs after everything it reads.
    std::vector<int> state(n, 0);  // 0 new, 1 active, 2 done
    std::function<void(std::size_t)> visit = [&](std::size_t l) {
      if (!def[l] || state[l] == 2) return;
      if (state[l] == 1) throw ValidationError("cyclic commutator definitions involving " + gx_.gen(l).name);
      state[l] = 1;
      visit(def[l]->left);
      visit(def[l]->right);
      for (auto [q, e] : def[l]->rest) visit(q);
      state[l] = 2;
      recipes_.push_back(*def[l]);
    };
    for (std::size_t l = 0; l < n; ++l) visit(l);
  }
};

/// Builds G_X for a lower-central presentation of class <= 2. The base is
///   x_1..x_k | weight-1 base of G | [x_i,x_j] (i<j), [x_i,a_s] | weight-2 base of G
/// with [x_i, a_s] of order w(a_s). variety_class = 0 means the class of G;
/// passing 2 for an abelian G gives the class-2 equation space.
inline EquationSpace build_equation_space(const PcPresentation& g, std::size_t k, int variety_class = 0) {
  if (k < 1) throw PreconditionError("build_equation_space: k must be >= 1");
  if (!g.lower_central) throw PreconditionError("build_equation_space: G needs a lower central base");
  const int c = variety_class == 0 ? g.nilpotency_class : variety_class;
  if (g.nilpotency_class > 2 || c > 2)
    throw UnsupportedError("equation spaces of class >= 3 are not synthesized; load a G_X presentation file");
  if (c < g.nilpotency_class) throw PreconditionError("build_equation_space: variety class below class of G");
  for (const auto& gen : g.gens)
    if (gen.weight > c) throw ValidationError("generator weight exceeds class");

  PcPresentation gx;
  gx.nilpotency_class = c;
  gx.lower_central = true;
  std::vector<std::size_t> map(g.gens.size());
  std::vector<std::size_t> d1;
  for (std::size_t i = 0; i < k; ++i) gx.gens.push_back({"x" + std::to_string(i + 1), kInfinite, 1, false});
  for (std::size_t s = 0; s < g.gens.size(); ++s)
    if (g.gens[s].weight == 1) {
      map[s] = gx.gens.size();
      d1.push_back(s);
      gx.gens.push_back(g.gens[s]);
      gx.gens.back().in_group = true;
    }
  if (d1.empty()) throw ValidationError("G has no weight-1 generators");
  if (c == 2) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        const std::size_t idx = gx.gens.size();
        gx.gens.push_back({"[x" + std::to_string(i + 1) + ",x" + std::to_string(j + 1) + "]", kInfinite, 2, false});
        gx.comms[{j, i}] = Word{{idx, -1}};
      }
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t s : d1) {
        const std::size_t idx = gx.gens.size();
        gx.gens.push_back({"[x" + std::to_string(i + 1) + "," + g.gens[s].name + "]", g.gens[s].order, 2, false});
        gx.comms[{map[s], i}] = Word{{idx, -1}};
      }
  }
  for (std::size_t s = 0; s < g.gens.size(); ++s)
    if (g.gens[s].weight == 2) {
      map[s] = gx.gens.size();
      gx.gens.push_back(g.gens[s]);
      gx.gens.back().in_group = true;
    }
  for (std::size_t a = 0; a < gx.gens.size(); ++a)
    for (std::size_t b = 0; b < a; ++b)
      if (gx.gens[a].name == gx.gens[b].name) throw ValidationError("generator name clash: " + gx.gens[a].name);

  auto remap = [&](const Word& w) {
    Word r;
    for (auto [q, e] : w) r.emplace_back(map[q], e);
    return r;
  };
  for (const auto& [i, w] : g.powers) gx.powers[map[i]] = remap(w);
  for (const auto& [ji, w] : g.comms) {
    std::size_t a = map[ji.first], b = map[ji.second];
    if (a < b) throw ValidationError("G's base is not ordered by weight");
    gx.comms[{a, b}] = remap(w);
  }
  return EquationSpace::from_gx(std::move(gx));
}

}  // namespace randeq::pc
