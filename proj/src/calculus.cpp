#include "bareprover/calculus.hpp"

#include <algorithm>
#include <stdexcept>

namespace bare {

namespace {

InferenceOutcome make_outcome(std::vector<Literal> literals, const Substitution& s, Rule rule,
                              std::vector<ClauseId> premises, std::vector<int> positions) {
  InferenceOutcome out;
  out.conclusion.literals.reserve(literals.size());
  for (const Literal& l : literals) out.conclusion.literals.push_back(apply(s, l));
  normalize(out.conclusion);
  out.conclusion.role = Role::derived;
  out.conclusion.from.rule = rule;
  out.conclusion.from.parents = premises;
  out.conclusion.from.positions = positions;
  out.rule = rule;
  out.premises = std::move(premises);
  out.positions = std::move(positions);
  return out;
}

void append_except(std::vector<Literal>& out, const Clause& c, std::size_t skip) {
  for (std::size_t k = 0; k < c.literals.size(); ++k) {
    if (k != skip) out.push_back(c.literals[k]);
  }
}

// Preorder enumeration of non-variable subterm positions below an atom.
void collect_positions(const Term& t, std::vector<int>& path, std::vector<std::vector<int>>& out) {
  if (t.is_variable()) return;
  out.push_back(path);
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    path.push_back(static_cast<int>(i));
    collect_positions(t.arg(i), path, out);
    path.pop_back();
  }
}

std::vector<std::vector<int>> atom_positions(const Term& atom) {
  std::vector<std::vector<int>> out;
  std::vector<int> path;
  for (std::size_t i = 0; i < atom.args().size(); ++i) {
    path.assign(1, static_cast<int>(i));
    collect_positions(atom.arg(i), path, out);
  }
  return out;
}

void paramodulations(const Clause& from, const Clause& into, std::vector<InferenceOutcome>& out) {
  for (std::size_t e = 0; e < from.literals.size(); ++e) {
    const Literal& eq = from.literals[e];
    if (!eq.positive || !eq.is_equation()) continue;
    for (std::size_t k = 0; k < into.literals.size(); ++k) {
      auto positions = atom_positions(into.literals[k].atom);
      for (Orientation o : {Orientation::lhs_to_rhs, Orientation::rhs_to_lhs}) {
        const Term& l = o == Orientation::lhs_to_rhs ? eq.lhs() : eq.rhs();
        for (const auto& path : positions) {
          const Term* sub = subterm_at(into.literals[k].atom, path);
          if (!l.is_variable() && sub->head() != l.head()) continue;
          if (auto r = paramodulate(from, e, o, into, k, path)) out.push_back(std::move(*r));
        }
      }
    }
  }
}

bool same_atom_up_to_orientation(const Literal& a, const Literal& b) {
  if (a.atom == b.atom) return true;
  return a.is_equation() && b.is_equation() && a.lhs() == b.rhs() && a.rhs() == b.lhs();
}

// Matcher over raw bindings for subsumption: no reference counting and no
// allocation once the buffers have grown.
struct RawMatcher {
  std::vector<const Term*> bound;
  std::vector<VarIndex> trail;

  void reset(VarIndex vars) {
    bound.assign(vars, nullptr);
    trail.clear();
  }
  void undo_to(std::size_t mark) {
    while (trail.size() > mark) {
      bound[trail.back()] = nullptr;
      trail.pop_back();
    }
  }
  bool term(const Term& p, const Term& t) {
    if (p.is_variable()) {
      const Term*& b = bound[p.var()];
      if (b != nullptr) return b->same_node(t) || *b == t;
      b = &t;
      trail.push_back(p.var());
      return true;
    }
    if (t.is_variable() || p.head() != t.head()) return false;
    if (p.ground()) return p == t;
    if (p.symbol_count() > t.symbol_count()) return false;
    for (std::size_t i = 0; i < p.args().size(); ++i) {
      if (!term(p.arg(i), t.arg(i))) return false;
    }
    return true;
  }
  // a onto b, with a's sides swapped when `flip`; undone on failure.
  bool literal(const Literal& a, const Literal& b, bool flip) {
    const std::size_t mark = trail.size();
    bool ok = flip ? term(a.lhs(), b.rhs()) && term(a.rhs(), b.lhs()) : term(a.atom, b.atom);
    if (!ok) undo_to(mark);
    return ok;
  }
};

struct Candidate {
  std::uint32_t literal;
  bool flip;
};

struct SubsumptionSearch {
  const Clause* g = nullptr;
  const Clause* s = nullptr;
  // Candidates of general literal order[k] are cands[starts[k] .. starts[k+1]).
  std::vector<Candidate> cands;
  std::vector<std::size_t> starts;
  std::vector<std::size_t> order;
  std::vector<char> used;
  RawMatcher m;

  bool run(std::size_t k) {
    if (k == order.size()) return true;
    const Literal& a = g->literals[order[k]];
    for (std::size_t c = starts[k]; c < starts[k + 1]; ++c) {
      const Candidate cand = cands[c];
      if (used[cand.literal]) continue;
      const std::size_t mark = m.trail.size();
      if (!m.literal(a, s->literals[cand.literal], cand.flip)) continue;
      used[cand.literal] = 1;
      if (run(k + 1)) return true;
      used[cand.literal] = 0;
      m.undo_to(mark);
    }
    return false;
  }
};

void count_symbols(const Term& t, SubsumptionFeatures& f) {
  if (t.is_variable()) return;
  auto& slot = f.counts[SubsumptionFeatures::symbol_base + t.head() % SubsumptionFeatures::symbol_buckets];
  if (slot < UINT16_MAX) ++slot;
  for (const Term& a : t.args()) count_symbols(a, f);
}

}  // namespace

std::optional<InferenceOutcome> resolve(const Clause& c1, std::size_t i, const Clause& c2,
                                        std::size_t j) {
  if (i >= c1.size() || j >= c2.size()) return std::nullopt;
  const Literal& a = c1.literals[i];
  const Literal& b = c2.literals[j];
  if (a.positive == b.positive || a.is_equation() || b.is_equation() ||
      a.atom.head() != b.atom.head()) {
    return std::nullopt;
  }
  auto s = unify(a.atom, b.atom);
  if (!s) return std::nullopt;
  std::vector<Literal> lits;
  lits.reserve(c1.size() + c2.size() - 2);
  append_except(lits, c1, i);
  append_except(lits, c2, j);
  return make_outcome(std::move(lits), *s, Rule::resolution, {c1.id, c2.id},
                      {static_cast<int>(i), static_cast<int>(j)});
}

std::optional<InferenceOutcome> factor(const Clause& c, std::size_t i, std::size_t j) {
  if (i == j || i >= c.size() || j >= c.size()) return std::nullopt;
  const Literal& a = c.literals[i];
  const Literal& b = c.literals[j];
  if (a.positive != b.positive || a.atom.head() != b.atom.head()) return std::nullopt;
  auto s = unify(a.atom, b.atom);
  if (!s && a.is_equation()) s = unify(a.flipped().atom, b.atom);
  if (!s) return std::nullopt;
  std::vector<Literal> lits;
  append_except(lits, c, j);
  return make_outcome(std::move(lits), *s, Rule::factoring, {c.id},
                      {static_cast<int>(i), static_cast<int>(j)});
}

std::optional<InferenceOutcome> equality_resolution(const Clause& c, std::size_t i) {
  if (i >= c.size()) return std::nullopt;
  const Literal& l = c.literals[i];
  if (l.positive || !l.is_equation()) return std::nullopt;
  auto s = unify(l.lhs(), l.rhs());
  if (!s) return std::nullopt;
  std::vector<Literal> lits;
  append_except(lits, c, i);
  return make_outcome(std::move(lits), *s, Rule::equality_resolution, {c.id},
                      {static_cast<int>(i)});
}

std::optional<InferenceOutcome> paramodulate(const Clause& from, std::size_t eq_index,
                                             Orientation orientation, const Clause& into,
                                             std::size_t lit_index, std::span<const int> path) {
  if (eq_index >= from.size()) throw std::invalid_argument("paramodulate: equation index out of range");
  const Literal& eq = from.literals[eq_index];
  if (!eq.positive || !eq.is_equation()) {
    throw std::invalid_argument("paramodulate: source literal is not a positive equation");
  }
  if (lit_index >= into.size()) throw std::invalid_argument("paramodulate: target literal out of range");
  if (path.empty()) throw std::invalid_argument("paramodulate: empty position");
  const Literal& target = into.literals[lit_index];
  const Term* sub = subterm_at(target.atom, path);
  if (sub == nullptr) throw std::invalid_argument("paramodulate: invalid position");
  if (sub->is_variable()) throw std::invalid_argument("paramodulate: position is a variable");

  const bool forward = orientation == Orientation::lhs_to_rhs;
  const Term& l = forward ? eq.lhs() : eq.rhs();
  const Term& r = forward ? eq.rhs() : eq.lhs();
  auto s = unify(l, *sub);
  if (!s) return std::nullopt;

  std::vector<Literal> lits;
  lits.reserve(from.size() + into.size() - 1);
  append_except(lits, from, eq_index);
  for (std::size_t k = 0; k < into.literals.size(); ++k) {
    if (k == lit_index) {
      lits.push_back({target.positive, replace_at(target.atom, path, r)});
    } else {
      lits.push_back(into.literals[k]);
    }
  }
  std::vector<int> positions{static_cast<int>(eq_index), static_cast<int>(orientation),
                             static_cast<int>(lit_index)};
  positions.insert(positions.end(), path.begin(), path.end());
  return make_outcome(std::move(lits), *s, Rule::paramodulation, {from.id, into.id},
                      std::move(positions));
}

std::vector<InferenceOutcome> generate(const Clause& given, std::span<const Clause* const> processed) {
  std::vector<const Clause*> partners;
  partners.reserve(processed.size() + 1);
  for (const Clause* p : processed) {
    if (p->id != given.id) partners.push_back(p);
  }
  partners.push_back(&given);
  std::stable_sort(partners.begin(), partners.end(),
                   [](const Clause* a, const Clause* b) { return a->id < b->id; });

  std::vector<InferenceOutcome> out;
  for (const Clause* partner : partners) {
    const bool self = partner->id == given.id;
    const Clause other = rename_apart(given, *partner);
    for (std::size_t i = 0; i < given.size(); ++i) {
      for (std::size_t j = self ? i + 1 : 0; j < other.size(); ++j) {
        if (auto r = resolve(given, i, other, j)) out.push_back(std::move(*r));
      }
    }
    paramodulations(given, other, out);
    if (!self) paramodulations(*partner, rename_apart(*partner, given), out);
  }
  for (std::size_t i = 0; i < given.size(); ++i) {
    for (std::size_t j = i + 1; j < given.size(); ++j) {
      if (auto r = factor(given, i, j)) out.push_back(std::move(*r));
    }
  }
  for (std::size_t i = 0; i < given.size(); ++i) {
    if (auto r = equality_resolution(given, i)) out.push_back(std::move(*r));
  }
  return out;
}

bool is_tautology(const Clause& c) {
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    const Literal& a = c.literals[i];
    if (a.positive && a.is_equation() && a.lhs() == a.rhs()) return true;
    for (std::size_t j = i + 1; j < c.literals.size(); ++j) {
      const Literal& b = c.literals[j];
      if (a.positive != b.positive && a.atom.head() == b.atom.head() &&
          same_atom_up_to_orientation(a, b)) {
        return true;
      }
    }
  }
  return false;
}

bool subsumes(const Clause& general, const Clause& specific) {
  if (general.size() > specific.size()) return false;
  thread_local SubsumptionSearch search;
  thread_local std::vector<Candidate> flat;
  thread_local std::vector<std::size_t> bounds;
  search.g = &general;
  search.s = &specific;
  search.m.reset(std::max(var_bound(general.literals), VarIndex{1}));
  flat.clear();
  bounds.assign(1, 0);
  for (const Literal& a : general.literals) {
    for (std::size_t j = 0; j < specific.size(); ++j) {
      const Literal& b = specific.literals[j];
      if (a.positive != b.positive || a.atom.head() != b.atom.head()) continue;
      for (bool flip : {false, true}) {
        if (flip && !a.is_equation()) break;
        if (search.m.literal(a, b, flip)) {
          flat.push_back({static_cast<std::uint32_t>(j), flip});
          search.m.undo_to(0);
        }
      }
    }
    if (flat.size() == bounds.back()) return false;
    bounds.push_back(flat.size());
  }
  const std::size_t n = general.size();
  search.order.resize(n);
  for (std::size_t i = 0; i < n; ++i) search.order[i] = i;
  std::stable_sort(search.order.begin(), search.order.end(), [&](std::size_t x, std::size_t y) {
    return bounds[x + 1] - bounds[x] < bounds[y + 1] - bounds[y];
  });
  search.cands.clear();
  search.starts.assign(1, 0);
  for (std::size_t i : search.order) {
    search.cands.insert(search.cands.end(), flat.begin() + static_cast<std::ptrdiff_t>(bounds[i]),
                        flat.begin() + static_cast<std::ptrdiff_t>(bounds[i + 1]));
    search.starts.push_back(search.cands.size());
  }
  search.used.assign(specific.size(), 0);
  return search.run(0);
}

SubsumptionFeatures subsumption_features(const Clause& c) {
  SubsumptionFeatures f;
  auto bump = [&](std::size_t k) {
    if (f.counts[k] < UINT16_MAX) ++f.counts[k];
  };
  for (const Literal& l : c.literals) {
    const std::size_t pol = l.positive ? 0 : 1;
    bump(pol);
    bump(SubsumptionFeatures::head_base + pol * SubsumptionFeatures::head_buckets +
         l.atom.head() % SubsumptionFeatures::head_buckets);
    count_symbols(l.atom, f);
  }
  return f;
}

bool SubsumptionFeatures::may_subsume(const SubsumptionFeatures& specific) const noexcept {
  for (std::size_t k = 0; k < size; ++k) {
    if (counts[k] > specific.counts[k]) return false;
  }
  return true;
}

std::optional<Clause> replay(const Provenance& from, std::span<const Clause* const> parents) {
  const auto& pos = from.positions;
  auto idx = [&](std::size_t k) { return static_cast<std::size_t>(pos[k]); };
  if (std::any_of(pos.begin(), pos.end(), [](int p) { return p < 0; })) return std::nullopt;
  std::optional<InferenceOutcome> r;
  switch (from.rule) {
    case Rule::input:
      return std::nullopt;
    case Rule::resolution:
      if (parents.size() != 2 || pos.size() != 2) return std::nullopt;
      r = resolve(*parents[0], idx(0), rename_apart(*parents[0], *parents[1]), idx(1));
      break;
    case Rule::factoring:
      if (parents.size() != 1 || pos.size() != 2) return std::nullopt;
      r = factor(*parents[0], idx(0), idx(1));
      break;
    case Rule::equality_resolution:
      if (parents.size() != 1 || pos.size() != 1) return std::nullopt;
      r = equality_resolution(*parents[0], idx(0));
      break;
    case Rule::paramodulation: {
      if (parents.size() != 2 || pos.size() < 4 || pos[1] > 1) return std::nullopt;
      std::span<const int> path(pos.data() + 3, pos.size() - 3);
      try {
        r = paramodulate(*parents[0], idx(0), static_cast<Orientation>(pos[1]),
                         rename_apart(*parents[0], *parents[1]), idx(2), path);
      } catch (const std::invalid_argument&) {
        return std::nullopt;
      }
      break;
    }
  }
  if (!r) return std::nullopt;
  return std::move(r->conclusion);
}

}  // namespace bare
