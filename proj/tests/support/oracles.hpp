#pragma once

// Independent reference implementations and random generators for the
// property tests. Nothing here calls the library's unifier, matcher or
// substitution code; terms are converted into a plain tree first.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bareprover/calculus.hpp"
#include "bareprover/logic.hpp"
#include "bareprover/tptp.hpp"

namespace oracle {

// Plain term tree. sym >= 0 is a symbol id, sym < 0 is variable -sym-1.
struct T {
  int sym = 0;
  std::vector<T> args;

  bool is_var() const { return sym < 0; }
  int var() const { return -sym - 1; }
  static T v(int i) { return {-i - 1, {}}; }

  friend bool operator==(const T&, const T&) = default;
  friend auto operator<=>(const T&, const T&) = default;
};

inline T from(const bare::Term& t) {
  if (t.is_variable()) return T::v(static_cast<int>(t.var()));
  T out{static_cast<int>(t.head()), {}};
  for (const bare::Term& a : t.args()) out.args.push_back(from(a));
  return out;
}

inline bare::Term to(const T& t) {
  if (t.is_var()) return bare::Term::variable(static_cast<bare::VarIndex>(t.var()));
  std::vector<bare::Term> args;
  for (const T& a : t.args) args.push_back(to(a));
  return bare::Term::apply(static_cast<bare::SymbolId>(t.sym), std::move(args));
}

inline int depth(const T& t) {
  int d = 0;
  for (const T& a : t.args) d = std::max(d, depth(a));
  return d + (t.args.empty() ? 0 : 1);
}

using Binding = std::map<int, T>;

inline T subst(const T& t, const Binding& b) {
  if (t.is_var()) {
    auto it = b.find(t.var());
    return it == b.end() ? t : it->second;
  }
  T out{t.sym, {}};
  for (const T& a : t.args) out.args.push_back(subst(a, b));
  return out;
}

// One-sided: binds variables of `pat` only; target variables are rigid.
inline bool match(const T& pat, const T& tgt, Binding& b) {
  if (pat.is_var()) {
    auto [it, fresh] = b.emplace(pat.var(), tgt);
    return fresh || it->second == tgt;
  }
  if (tgt.is_var() || pat.sym != tgt.sym || pat.args.size() != tgt.args.size()) return false;
  for (std::size_t i = 0; i < pat.args.size(); ++i) {
    if (!match(pat.args[i], tgt.args[i], b)) return false;
  }
  return true;
}

inline void subterms(const T& t, std::vector<T>& out) {
  out.push_back(t);
  for (const T& a : t.args) subterms(a, out);
}

inline Binding from(const bare::Substitution& s) {
  Binding b;
  for (bare::VarIndex v : s.domain()) b.emplace(static_cast<int>(v), from(*s.lookup(v)));
  return b;
}

// Small signature: f/2, g/1, constants a, b.
struct TermSig {
  bare::Signature sig;
  int f, g, a, b;

  TermSig()
      : f(static_cast<int>(sig.intern("f", 2, bare::SymbolKind::function))),
        g(static_cast<int>(sig.intern("g", 1, bare::SymbolKind::function))),
        a(static_cast<int>(sig.intern("a", 0, bare::SymbolKind::function))),
        b(static_cast<int>(sig.intern("b", 0, bare::SymbolKind::function))) {}

  T leaf(std::mt19937_64& rng, int vars) const {
    int k = static_cast<int>(rng() % static_cast<std::uint64_t>(2 + vars));
    if (k == 0) return {a, {}};
    if (k == 1) return {b, {}};
    return T::v(k - 2);
  }

  // Random term of depth <= max_depth using variables 0..vars-1.
  T random(std::mt19937_64& rng, int max_depth, int vars) const {
    if (max_depth == 0 || rng() % 3 == 0) return leaf(rng, vars);
    if (rng() % 2 == 0) return {g, {random(rng, max_depth - 1, vars)}};
    return {f, {random(rng, max_depth - 1, vars), random(rng, max_depth - 1, vars)}};
  }

  // Every term of depth <= d over the signature plus the given variables.
  std::vector<T> universe(int d, const std::vector<int>& vars) const {
    std::vector<T> out{{a, {}}, {b, {}}};
    for (int v : vars) out.push_back(T::v(v));
    for (int level = 1; level <= d; ++level) {
      std::vector<T> next = out;
      std::size_t n = out.size();
      for (std::size_t i = 0; i < n; ++i) {
        if (depth(out[i]) == level - 1) next.push_back({g, {out[i]}});
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (std::max(depth(out[i]), depth(out[j])) == level - 1) next.push_back({f, {out[i], out[j]}});
        }
      }
      out = std::move(next);
    }
    return out;
  }
};

// Literal as (positive, atom) in tree form.
struct L {
  bool positive = true;
  T atom;
  friend bool operator==(const L&, const L&) = default;
};

inline std::vector<L> from(const bare::Clause& c) {
  std::vector<L> out;
  for (const bare::Literal& l : c.literals) out.push_back({l.positive, from(l.atom)});
  return out;
}

inline bare::Clause to_clause(const std::vector<L>& lits) {
  bare::Clause c;
  for (const L& l : lits) c.literals.push_back({l.positive, to(l.atom)});
  bare::normalize(c);
  return c;
}

// Brute force multiset subsumption: every injective literal map and every
// orientation of every equation, under one simultaneous matcher.
inline bool subsumes(const std::vector<L>& g, const std::vector<L>& s) {
  if (g.size() > s.size()) return false;
  std::vector<int> used(s.size(), 0);
  std::function<bool(std::size_t, Binding)> go = [&](std::size_t i, Binding b) {
    if (i == g.size()) return true;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (used[j] || g[i].positive != s[j].positive) continue;
      std::vector<T> forms{g[i].atom};
      if (g[i].atom.sym == static_cast<int>(bare::Signature::equality)) {
        forms.push_back({g[i].atom.sym, {g[i].atom.args[1], g[i].atom.args[0]}});
      }
      for (const T& form : forms) {
        Binding next = b;
        if (!match(form, s[j].atom, next)) continue;
        used[j] = 1;
        bool ok = go(i + 1, std::move(next));
        used[j] = 0;
        if (ok) return true;
      }
    }
    return false;
  };
  return go(0, {});
}

// Clauses with predicates p/1, q/2 and equations over TermSig terms.
struct ClauseGen {
  TermSig ts;
  int p, q;

  ClauseGen()
      : p(static_cast<int>(ts.sig.intern("p", 1, bare::SymbolKind::predicate))),
        q(static_cast<int>(ts.sig.intern("q", 2, bare::SymbolKind::predicate))) {}

  L literal(std::mt19937_64& rng, int vars, int max_depth = 1) const {
    bool pos = rng() % 2 == 0;
    switch (rng() % 3) {
      case 0: return {pos, {p, {ts.random(rng, max_depth, vars)}}};
      case 1: return {pos, {q, {ts.random(rng, max_depth, vars), ts.random(rng, max_depth, vars)}}};
      default:
        return {pos, {static_cast<int>(bare::Signature::equality),
                      {ts.random(rng, max_depth, vars), ts.random(rng, max_depth, vars)}}};
    }
  }

  std::vector<L> clause(std::mt19937_64& rng, int min_size, int max_size, int vars) const {
    int n = min_size + static_cast<int>(rng() % static_cast<std::uint64_t>(max_size - min_size + 1));
    std::vector<L> out;
    for (int i = 0; i < n; ++i) out.push_back(literal(rng, vars));
    return out;
  }

  // A specific clause that the general one often subsumes: an instance with
  // extra literals, shuffled, equations sometimes flipped.
  std::vector<L> instance_of(std::mt19937_64& rng, const std::vector<L>& g) const {
    Binding b;
    for (int v = 0; v < 3; ++v) b.emplace(v, ts.random(rng, 1, 2));
    std::vector<L> out;
    for (const L& l : g) {
      L m{l.positive, subst(l.atom, b)};
      if (m.atom.sym == static_cast<int>(bare::Signature::equality) && rng() % 2) {
        std::swap(m.atom.args[0], m.atom.args[1]);
      }
      out.push_back(std::move(m));
    }
    if (rng() % 4 == 0 && !out.empty()) out.pop_back();
    int extra = static_cast<int>(rng() % 3);
    for (int i = 0; i < extra; ++i) out.push_back(literal(rng, 2));
    std::shuffle(out.begin(), out.end(), rng);
    return out;
  }
};

// Ground Herbrand models over constants a, b and unary predicates p, q
// with equality: either a and b denote distinct elements or the same one,
// and p, q are arbitrary sets of elements.
struct GroundModel {
  bool a_eq_b = false;
  unsigned p_set = 0;  // bit e: element e satisfies p
  unsigned q_set = 0;
};

inline std::vector<GroundModel> ground_models() {
  std::vector<GroundModel> out;
  for (unsigned ps = 0; ps < 4; ++ps) {
    for (unsigned qs = 0; qs < 4; ++qs) out.push_back({false, ps, qs});
  }
  for (unsigned ps = 0; ps < 2; ++ps) {
    for (unsigned qs = 0; qs < 2; ++qs) out.push_back({true, ps, qs});
  }
  return out;
}

struct GroundSig {
  bare::Signature sig;
  int a, b, p, q;

  GroundSig()
      : a(static_cast<int>(sig.intern("a", 0, bare::SymbolKind::function))),
        b(static_cast<int>(sig.intern("b", 0, bare::SymbolKind::function))),
        p(static_cast<int>(sig.intern("p", 1, bare::SymbolKind::predicate))),
        q(static_cast<int>(sig.intern("q", 1, bare::SymbolKind::predicate))) {}

  unsigned element(const bare::Term& t, const GroundModel& m) const {
    if (static_cast<int>(t.head()) == a) return 0;
    return m.a_eq_b ? 0 : 1;
  }

  bool holds(const bare::Literal& l, const GroundModel& m) const {
    bool v;
    if (l.is_equation()) {
      v = element(l.lhs(), m) == element(l.rhs(), m);
    } else {
      unsigned set = static_cast<int>(l.atom.head()) == p ? m.p_set : m.q_set;
      v = (set >> element(l.atom.arg(0), m)) & 1;
    }
    return v == l.positive;
  }

  bool holds(const bare::Clause& c, const GroundModel& m) const {
    return std::any_of(c.literals.begin(), c.literals.end(), [&](const bare::Literal& l) { return holds(l, m); });
  }

  bare::Clause random_clause(std::mt19937_64& rng, int max_size) const {
    auto constant = [&] { return bare::Term::constant(static_cast<bare::SymbolId>(rng() % 2 ? a : b)); };
    bare::Clause c;
    int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_size));
    for (int i = 0; i < n; ++i) {
      bool pos = rng() % 2 == 0;
      if (rng() % 3 == 0) {
        c.literals.push_back(bare::Literal::equation(pos, constant(), constant()));
      } else {
        auto head = static_cast<bare::SymbolId>(rng() % 2 ? p : q);
        c.literals.push_back({pos, bare::Term::apply(head, {constant()})});
      }
    }
    return c;
  }
};

}  // namespace oracle
