#pragma once

// Built-in presentations. All of them use lower central bases.

#include <algorithm>
#include <string>
#include <vector>

#include "randeq/pcgroup.hpp"

namespace randeq::pc {

/// Z^m on generators a1..am.
inline PcPresentation make_free_abelian(std::size_t m) {
  if (m < 1) throw PreconditionError("make_free_abelian: m must be >= 1");
  PcPresentation p;
  p.nilpotency_class = 1;
  p.lower_central = true;
  for (std::size_t i = 0; i < m; ++i) p.gens.push_back({"a" + std::to_string(i + 1), kInfinite, 1, true});
  return p;
}

/// Z/n on a single generator.
inline PcPresentation make_cyclic(Int n, std::string name = "z") {
  if (n < 2) throw PreconditionError("make_cyclic: order must be >= 2");
  PcPresentation p;
  p.nilpotency_class = 1;
  p.lower_central = true;
  p.gens.push_back({std::move(name), n, 1, true});
  return p;
}

/// Free nilpotent group of class 2 and rank m: a1..am and c_ij = [a_j, a_i]
/// for i < j, central.
inline PcPresentation make_free_nilpotent_class2(std::size_t m) {
  if (m < 1) throw PreconditionError("make_free_nilpotent_class2: m must be >= 1");
  if (m == 1) return make_free_abelian(1);
  PcPresentation p;
  p.nilpotency_class = 2;
  p.lower_central = true;
  for (std::size_t i = 0; i < m; ++i) p.gens.push_back({"a" + std::to_string(i + 1), kInfinite, 1, true});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const std::size_t idx = p.gens.size();
      p.gens.push_back({"c" + std::to_string(i + 1) + std::to_string(j + 1), kInfinite, 2, true});
      p.comms[{j, i}] = Word{{idx, 1}};
    }
  return p;
}

/// Heisenberg group: a1, a2, c12 = [a2, a1].
inline PcPresentation make_heisenberg() { return make_free_nilpotent_class2(2); }

/// P1 x P2; bases are merged stably by weight so the result is again a
/// lower central base. Cross commutators are trivial.
inline PcPresentation direct_product(const PcPresentation& p1, const PcPresentation& p2) {
  PcPresentation out;
  out.nilpotency_class = std::max(p1.nilpotency_class, p2.nilpotency_class);
  out.lower_central = p1.lower_central && p2.lower_central;

  struct Src {
    int part;
    std::size_t idx;
  };
  const PcPresentation* parts[2] = {&p1, &p2};
  std::vector<Src> order;
  for (std::size_t i = 0; i < p1.gens.size(); ++i) order.push_back({0, i});
  for (std::size_t i = 0; i < p2.gens.size(); ++i) order.push_back({1, i});
  // Interleave by weight only when both bases are weight-ordered already.
  if (out.lower_central)
    std::stable_sort(order.begin(), order.end(), [&](const Src& a, const Src& b) {
      return parts[a.part]->gens[a.idx].weight < parts[b.part]->gens[b.idx].weight;
    });

  std::vector<std::size_t> map1(p1.gens.size()), map2(p2.gens.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto& s = order[pos];
    (s.part == 0 ? map1 : map2)[s.idx] = pos;
    Generator g = parts[s.part]->gens[s.idx];
    auto taken = [&](const std::string& n) {
      return std::any_of(out.gens.begin(), out.gens.end(), [&](const Generator& h) { return h.name == n; }) ||
             std::any_of(p1.gens.begin(), p1.gens.end(), [&](const Generator& h) { return s.part == 1 && h.name == n; });
    };
    while (taken(g.name)) g.name += "'";
    out.gens.push_back(g);
  }
  auto remap = [](const Word& w, const std::vector<std::size_t>& m) {
    Word r;
    for (auto [i, e] : w) r.emplace_back(m[i], e);
    return r;
  };
  auto absorb = [&](const PcPresentation& p, const std::vector<std::size_t>& m) {
    for (const auto& [i, w] : p.powers) out.powers[m[i]] = remap(w, m);
    for (const auto& [ji, w] : p.comms) out.comms[{m[ji.first], m[ji.second]}] = remap(w, m);
  };
  absorb(p1, map1);
  absorb(p2, map2);
  return out;
}

}  // namespace randeq::pc
