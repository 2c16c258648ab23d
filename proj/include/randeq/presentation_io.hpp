#pragma once

// Line-oriented text format for polycyclic presentations.
//
//   # comment
//   class <c>
//   lower-central
//   gen <name> order <n|inf> weight <w> ing <0|1>
//   pow <g> = <word>
//   comm <g> <h> = <word>        ([g, h] with g later in the base than h)
//   tail <name> <name> ...
//
// A word is space-separated `name^exp` (or bare `name`); an empty word is
// the identity.

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "randeq/errors.hpp"
#include "randeq/pcgroup.hpp"

namespace randeq::pc {

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline Int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("bad integer for " + what + ": '" + s + "'");
  }
}

}  // namespace detail

inline PcPresentation parse_presentation(std::string_view text) {
  PcPresentation p;
  bool have_class = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw ValidationError("line " + std::to_string(lineno) + ": " + msg);
  };
  auto lookup = [&](const std::string& name) {
    auto idx = p.find(name);
    if (!idx) fail("unknown generator '" + name + "'");
    return *idx;
  };
  auto parse_word = [&](const std::vector<std::string>& toks, std::size_t from, std::size_t after,
                        const std::string& what) {
    Word w;
    for (std::size_t t = from; t < toks.size(); ++t) {
      const auto& tok = toks[t];
      const auto caret = tok.rfind('^');
      const std::size_t idx = lookup(tok.substr(0, caret));
      Int e = 1;
      if (caret != std::string::npos) {
        try {
          e = detail::parse_int(tok.substr(caret + 1), "exponent");
        } catch (const ValidationError& err) {
          fail(err.what());
        }
      }
      if (idx <= after)
        fail(what + " mentions " + p.gens[idx].name + ", which is not a later generator than " + p.gens[after].name);
      w.emplace_back(idx, e);
    }
    return w;
  };

  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto toks = detail::split_ws(raw);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    if (kw == "class") {
      if (toks.size() != 2) fail("expected 'class <c>'");
      if (have_class) fail("class declared twice");
      try {
        p.nilpotency_class = static_cast<int>(detail::parse_int(toks[1], "class"));
      } catch (const ValidationError& err) {
        fail(err.what());
      }
      if (p.nilpotency_class < 1) fail("class must be >= 1");
      have_class = true;
    } else if (kw == "lower-central") {
      if (toks.size() != 1) fail("'lower-central' takes no arguments");
      p.lower_central = true;
    } else if (kw == "gen") {
      if (toks.size() != 8 || toks[2] != "order" || toks[4] != "weight" || toks[6] != "ing")
        fail("expected 'gen <name> order <n|inf> weight <w> ing <0|1>'");
      if (!p.comms.empty() || !p.powers.empty()) fail("generators must be declared before relations");
      if (p.find(toks[1])) fail("duplicate generator '" + toks[1] + "'");
      if (toks[1].find_first_of("^=") != std::string::npos) fail("generator name may not contain '^' or '='");
      Generator g;
      g.name = toks[1];
      try {
        g.order = toks[3] == "inf" ? kInfinite : detail::parse_int(toks[3], "order");
        g.weight = static_cast<int>(detail::parse_int(toks[5], "weight"));
      } catch (const ValidationError& err) {
        fail(err.what());
      }
      if (toks[3] != "inf" && g.order < 2) fail("finite order must be >= 2");
      if (g.weight < 1) fail("weight must be >= 1");
      if (toks[7] != "0" && toks[7] != "1") fail("ing must be 0 or 1");
      g.in_group = toks[7] == "1";
      p.gens.push_back(g);
    } else if (kw == "pow") {
      if (toks.size() < 3 || toks[2] != "=") fail("expected 'pow <g> = <word>'");
      const std::size_t i = lookup(toks[1]);
      if (p.gens[i].infinite()) fail("power relation for infinite-order generator " + toks[1]);
      if (p.powers.count(i)) fail("power relation for " + toks[1] + " given twice");
      p.powers[i] = parse_word(toks, 3, i, "power relation");
    } else if (kw == "comm") {
      if (toks.size() < 4 || toks[3] != "=") fail("expected 'comm <g> <h> = <word>'");
      const std::size_t j = lookup(toks[1]);
      const std::size_t i = lookup(toks[2]);
      if (j <= i) fail("comm " + toks[1] + " " + toks[2] + ": first generator must come later in the base");
      if (p.comms.count({j, i})) fail("commutator [" + toks[1] + "," + toks[2] + "] given twice");
      p.comms[{j, i}] = parse_word(toks, 4, j, "commutator relation");
    } else if (kw == "tail") {
      if (!p.tail_order.empty()) fail("tail declared twice");
      for (std::size_t t = 1; t < toks.size(); ++t) p.tail_order.push_back(lookup(toks[t]));
    } else {
      fail("unknown directive '" + kw + "'");
    }
  }
  if (!have_class) throw ValidationError("presentation lacks a 'class' line");
  if (p.gens.empty()) throw ValidationError("presentation declares no generators");
  for (const auto& g : p.gens)
    if (g.weight > p.nilpotency_class)
      throw ValidationError("generator " + g.name + " has weight above class " + std::to_string(p.nilpotency_class));
  PcGroup check(p);  // full semantic validation
  return p;
}

inline PcPresentation load_presentation(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open presentation file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  try {
    return parse_presentation(ss.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline std::string format_presentation(const PcPresentation& p) {
  std::ostringstream out;
  auto word = [&](const Word& w) {
    for (auto [q, e] : w) out << ' ' << p.gens[q].name << '^' << e;
  };
  out << "class " << p.nilpotency_class << '\n';
  if (p.lower_central) out << "lower-central\n";
  for (const auto& g : p.gens)
    out << "gen " << g.name << " order " << (g.infinite() ? std::string("inf") : std::to_string(g.order))
        << " weight " << g.weight << " ing " << (g.in_group ? 1 : 0) << '\n';
  for (const auto& [i, w] : p.powers) {
    out << "pow " << p.gens[i].name << " =";
    word(w);
    out << '\n';
  }
  for (const auto& [ji, w] : p.comms) {
    out << "comm " << p.gens[ji.first].name << ' ' << p.gens[ji.second].name << " =";
    word(w);
    out << '\n';
  }
  if (!p.tail_order.empty()) {
    out << "tail";
    for (std::size_t t : p.tail_order) out << ' ' << p.gens[t].name;
    out << '\n';
  }
  return out.str();
}

}  // namespace randeq::pc
