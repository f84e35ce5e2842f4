#include "bareprover/logic.hpp"

#include <algorithm>
#include <functional>
#include <utility>

namespace bare {

namespace {

constexpr std::size_t kVarCacheSize = 1024;

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

// ---------------------------------------------------------------------------
// Signature

Signature::Signature() {
  symbols_.push_back({"=", 2, SymbolKind::equality});
  by_name_.emplace("=", equality);
}

SymbolId Signature::intern(std::string_view name, std::uint32_t arity, SymbolKind kind) {
  auto it = by_name_.find(std::string(name));
  if (it != by_name_.end()) {
    const Symbol& s = symbols_[it->second];
    if (s.arity != arity || s.kind != kind) {
      throw ArityMismatch(std::string(name),
                          "symbol '" + std::string(name) + "' used with " + std::to_string(arity) +
                              " argument(s) as a " +
                              (kind == SymbolKind::predicate ? "predicate" : "function") +
                              ", previously " + std::to_string(s.arity) + " argument(s) as a " +
                              (s.kind == SymbolKind::predicate ? "predicate" : "function"));
    }
    return it->second;
  }
  auto id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back({std::string(name), arity, kind});
  by_name_.emplace(std::string(name), id);
  return id;
}

std::optional<SymbolId> Signature::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Term

Term Term::variable(VarIndex index) {
  static const std::vector<std::shared_ptr<const Node>> cache = [] {
    std::vector<std::shared_ptr<const Node>> v;
    v.reserve(kVarCacheSize);
    for (VarIndex i = 0; i < kVarCacheSize; ++i) {
      auto n = std::make_shared<Node>();
      n->is_var = true;
      n->id = i;
      n->vars = 1;
      n->var_bound = i + 1;
      n->hash = mix(0x51ed2701, i);
      v.push_back(std::move(n));
    }
    return v;
  }();
  if (index < kVarCacheSize) return Term(cache[index]);
  auto n = std::make_shared<Node>();
  n->is_var = true;
  n->id = index;
  n->vars = 1;
  n->var_bound = index + 1;
  n->hash = mix(0x51ed2701, index);
  return Term(std::move(n));
}

Term Term::apply(SymbolId head, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->id = head;
  n->symbols = 1;
  std::size_t h = mix(0x2545f491, head);
  std::uint32_t depth = 0;
  for (const Term& a : args) {
    n->symbols += a.symbol_count();
    n->vars += a.var_count();
    depth = std::max(depth, a.depth());
    n->var_bound = std::max(n->var_bound, a.var_bound());
    h = mix(h, a.hash());
  }
  n->depth = depth + 1;
  n->hash = h;
  n->args = std::move(args);
  return Term(std::move(n));
}

bool operator==(const Term& a, const Term& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.is_variable() != b.is_variable() || a.node_->id != b.node_->id) {
    return false;
  }
  if (a.is_variable()) return true;
  const auto& x = a.node_->args;
  const auto& y = b.node_->args;
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] == y[i])) return false;
  }
  return true;
}

const Term* subterm_at(const Term& t, std::span<const int> path) {
  const Term* cur = &t;
  for (int i : path) {
    if (cur->is_variable() || i < 0 || static_cast<std::size_t>(i) >= cur->args().size()) {
      return nullptr;
    }
    cur = &cur->arg(static_cast<std::size_t>(i));
  }
  return cur;
}

Term replace_at(const Term& t, std::span<const int> path, const Term& replacement) {
  if (path.empty()) return replacement;
  std::vector<Term> args(t.args().begin(), t.args().end());
  auto i = static_cast<std::size_t>(path.front());
  args[i] = replace_at(args[i], path.subspan(1), replacement);
  return Term::apply(t.head(), std::move(args));
}

// ---------------------------------------------------------------------------
// Names

std::string_view to_string(Role r) {
  switch (r) {
    case Role::axiom: return "axiom";
    case Role::negated_conjecture: return "negated_conjecture";
    case Role::derived: return "derived";
  }
  return "derived";
}

std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::input: return "input";
    case Rule::resolution: return "resolution";
    case Rule::factoring: return "factoring";
    case Rule::equality_resolution: return "equality_resolution";
    case Rule::paramodulation: return "paramodulation";
  }
  return "input";
}

std::optional<Rule> rule_from_string(std::string_view s) {
  for (Rule r : {Rule::input, Rule::resolution, Rule::factoring, Rule::equality_resolution,
                 Rule::paramodulation}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Renaming

namespace {

Term rename_term(const Term& t, std::vector<int>& map, VarIndex& next) {
  if (t.ground()) return t;
  if (t.is_variable()) {
    if (map.size() <= t.var()) map.resize(t.var() + 1, -1);
    if (map[t.var()] < 0) map[t.var()] = static_cast<int>(next++);
    return Term::variable(static_cast<VarIndex>(map[t.var()]));
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(rename_term(a, map, next));
  return Term::apply(t.head(), std::move(args));
}

Term shift_term(const Term& t, VarIndex offset) {
  if (t.ground() || offset == 0) return t;
  if (t.is_variable()) return Term::variable(t.var() + offset);
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(shift_term(a, offset));
  return Term::apply(t.head(), std::move(args));
}

}  // namespace

void normalize(Clause& c) {
  std::vector<int> map;
  VarIndex next = 0;
  for (Literal& l : c.literals) l.atom = rename_term(l.atom, map, next);
  c.num_vars = next;
}

VarIndex var_bound(std::span<const Literal> literals) {
  VarIndex b = 0;
  for (const Literal& l : literals) b = std::max(b, l.atom.var_bound());
  return b;
}

Clause shift_vars(const Clause& c, VarIndex offset) {
  Clause out = c;
  if (offset == 0) return out;
  for (Literal& l : out.literals) l.atom = shift_term(l.atom, offset);
  out.num_vars = var_bound(out.literals);
  return out;
}

Clause rename_apart(const Clause& c1, const Clause& c2) {
  return shift_vars(c2, var_bound(c1.literals));
}

// ---------------------------------------------------------------------------
// Substitution

void Substitution::bind(VarIndex v, Term t) {
  if (bindings_.size() <= v) bindings_.resize(v + 1);
  bindings_[v] = std::move(t);
}

bool Substitution::empty() const noexcept {
  return std::none_of(bindings_.begin(), bindings_.end(), [](const Term& t) { return t.valid(); });
}

std::size_t Substitution::size() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(bindings_.begin(), bindings_.end(), [](const Term& t) { return t.valid(); }));
}

std::vector<VarIndex> Substitution::domain() const {
  std::vector<VarIndex> d;
  for (VarIndex v = 0; v < bindings_.size(); ++v) {
    if (bindings_[v].valid()) d.push_back(v);
  }
  return d;
}

bool operator==(const Substitution& a, const Substitution& b) noexcept {
  std::size_t n = std::max(a.bindings_.size(), b.bindings_.size());
  for (VarIndex v = 0; v < n; ++v) {
    const Term* x = a.lookup(v);
    const Term* y = b.lookup(v);
    if ((x == nullptr) != (y == nullptr)) return false;
    if (x != nullptr && !(*x == *y)) return false;
  }
  return true;
}

Term apply(const Substitution& s, const Term& t) {
  if (t.ground()) return t;
  if (t.is_variable()) {
    const Term* b = s.lookup(t.var());
    return b != nullptr ? *b : t;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const Term& a : t.args()) {
    args.push_back(apply(s, a));
    changed = changed || !args.back().same_node(a);
  }
  if (!changed) return t;
  return Term::apply(t.head(), std::move(args));
}

Literal apply(const Substitution& s, const Literal& l) { return {l.positive, apply(s, l.atom)}; }

Clause apply(const Substitution& s, const Clause& c) {
  Clause out = c;
  for (Literal& l : out.literals) l.atom = apply(s, l.atom);
  normalize(out);
  return out;
}

// ---------------------------------------------------------------------------
// Unification

namespace {

const Term& deref(const Substitution& s, const Term& t) {
  const Term* cur = &t;
  while (cur->is_variable()) {
    const Term* b = s.lookup(cur->var());
    if (b == nullptr) break;
    cur = b;
  }
  return *cur;
}

bool occurs(const Substitution& s, VarIndex v, const Term& t) {
  const Term& d = deref(s, t);
  if (d.is_variable()) return d.var() == v;
  if (d.ground()) return false;
  for (const Term& a : d.args()) {
    if (occurs(s, v, a)) return true;
  }
  return false;
}

Term chase(const Substitution& s, const Term& t) {
  if (t.ground()) return t;
  if (t.is_variable()) {
    const Term* b = s.lookup(t.var());
    return b != nullptr ? chase(s, *b) : t;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const Term& a : t.args()) {
    args.push_back(chase(s, a));
    changed = changed || !args.back().same_node(a);
  }
  if (!changed) return t;
  return Term::apply(t.head(), std::move(args));
}

}  // namespace

bool unify_into(Substitution& s, const Term& a, const Term& b) {
  std::vector<std::pair<Term, Term>> todo;
  todo.emplace_back(a, b);
  while (!todo.empty()) {
    auto [x0, y0] = std::move(todo.back());
    todo.pop_back();
    const Term x = deref(s, x0);
    const Term y = deref(s, y0);
    if (x.same_node(y)) continue;
    if (x.is_variable()) {
      if (y.is_variable() && y.var() == x.var()) continue;
      if (occurs(s, x.var(), y)) return false;
      s.bind(x.var(), y);
    } else if (y.is_variable()) {
      if (occurs(s, y.var(), x)) return false;
      s.bind(y.var(), x);
    } else {
      if (x.head() != y.head() || x.args().size() != y.args().size()) return false;
      if (x.ground() && y.ground()) {
        if (!(x == y)) return false;
        continue;
      }
      for (std::size_t i = x.args().size(); i-- > 0;) todo.emplace_back(x.arg(i), y.arg(i));
    }
  }
  return true;
}

Substitution resolved(const Substitution& s) {
  Substitution out;
  for (VarIndex v : s.domain()) out.bind(v, chase(s, *s.lookup(v)));
  return out;
}

std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution s;
  if (!unify_into(s, a, b)) return std::nullopt;
  return resolved(s);
}

// ---------------------------------------------------------------------------
// Matching

namespace {

bool match_rec(Substitution& s, const Term& p, const Term& t, std::vector<VarIndex>& trail) {
  if (p.is_variable()) {
    if (const Term* b = s.lookup(p.var())) return *b == t;
    s.bind(p.var(), t);
    trail.push_back(p.var());
    return true;
  }
  if (t.is_variable() || p.head() != t.head() || p.args().size() != t.args().size()) return false;
  if (p.ground()) return p == t;
  if (p.symbol_count() > t.symbol_count()) return false;
  for (std::size_t i = 0; i < p.args().size(); ++i) {
    if (!match_rec(s, p.arg(i), t.arg(i), trail)) return false;
  }
  return true;
}

}  // namespace

bool match_into(Substitution& s, const Term& pattern, const Term& target,
                std::vector<VarIndex>* out_trail) {
  thread_local std::vector<VarIndex> scratch;
  std::vector<VarIndex>& trail = out_trail != nullptr ? *out_trail : scratch;
  const std::size_t mark = trail.size();
  if (match_rec(s, pattern, target, trail)) {
    if (out_trail == nullptr) trail.resize(mark);
    return true;
  }
  for (std::size_t k = trail.size(); k-- > mark;) s.unbind(trail[k]);
  trail.resize(mark);
  return false;
}

std::optional<Substitution> match_onto(const Term& pattern, const Term& target) {
  Substitution s;
  if (!match_into(s, pattern, target)) return std::nullopt;
  return s;
}

std::optional<Substitution> match_onto(const Literal& pattern, const Literal& target) {
  if (pattern.positive != target.positive) return std::nullopt;
  if (auto s = match_onto(pattern.atom, target.atom)) return s;
  if (pattern.is_equation() && target.is_equation()) {
    return match_onto(pattern.flipped().atom, target.atom);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Weight

double clause_weight(const Clause& c, double fweight, double vweight, double pos_mult) {
  double w = 0;
  for (const Literal& l : c.literals) {
    double lw = fweight * l.atom.symbol_count() + vweight * l.atom.var_count();
    w += l.positive ? lw * pos_mult : lw;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Variants

namespace {

struct Renaming {
  std::vector<int> fwd;
  std::vector<int> bwd;
  std::vector<VarIndex> trail;

  Renaming(VarIndex n1, VarIndex n2) : fwd(n1, -1), bwd(n2, -1) {}

  void undo_to(std::size_t mark) {
    while (trail.size() > mark) {
      VarIndex v = trail.back();
      trail.pop_back();
      bwd[static_cast<std::size_t>(fwd[v])] = -1;
      fwd[v] = -1;
    }
  }

  bool terms(const Term& a, const Term& b) {
    if (a.is_variable() != b.is_variable()) return false;
    if (a.is_variable()) {
      int& f = fwd[a.var()];
      int& g = bwd[b.var()];
      if (f < 0 && g < 0) {
        f = static_cast<int>(b.var());
        g = static_cast<int>(a.var());
        trail.push_back(a.var());
        return true;
      }
      return f == static_cast<int>(b.var()) && g == static_cast<int>(a.var());
    }
    if (a.head() != b.head() || a.symbol_count() != b.symbol_count() ||
        a.var_count() != b.var_count()) {
      return false;
    }
    if (a.ground()) return a == b;
    for (std::size_t i = 0; i < a.args().size(); ++i) {
      if (!terms(a.arg(i), b.arg(i))) return false;
    }
    return true;
  }
};

// Literal hashes invariant under variable renaming. A variable contributes
// its first-occurrence rank inside the literal and a colour: first its
// occurrence count in the clause, then, after one refinement round, the
// multiset of (literal hash, rank) pairs over its occurrences.
struct ShapeHasher {
  std::vector<std::size_t> color;
  std::vector<int> local;
  std::vector<VarIndex> touched;
  std::vector<std::vector<std::size_t>> seen;
  int next = 0;

  void count(const Term& t) {
    if (t.is_variable()) {
      ++color[t.var()];
      return;
    }
    if (t.ground()) return;
    for (const Term& a : t.args()) count(a);
  }
  void reset_local() {
    for (VarIndex v : touched) local[v] = -1;
    touched.clear();
    next = 0;
  }
  std::size_t term(const Term& t) {
    if (t.is_variable()) {
      int& l = local[t.var()];
      if (l < 0) {
        l = next++;
        touched.push_back(t.var());
      }
      return mix(mix(0x7f4a7c15, static_cast<std::size_t>(l)), color[t.var()]);
    }
    if (t.ground()) return t.hash();
    std::size_t h = mix(0x2545f491, t.head());
    for (const Term& a : t.args()) h = mix(h, term(a));
    return h;
  }
  // Leaves the ranks of this orientation in `local`.
  std::size_t oriented(const Literal& l, bool flip) {
    reset_local();
    std::size_t h;
    if (l.is_equation()) {
      const Term& a = flip ? l.rhs() : l.lhs();
      const Term& b = flip ? l.lhs() : l.rhs();
      h = term(a);
      h = mix(mix(0x3c6ef372, h), term(b));
    } else {
      h = term(l.atom);
    }
    return mix(h, l.positive ? 1 : 2);
  }
  std::size_t literal(const Literal& l) {
    if (!l.is_equation()) return oriented(l, false);
    return std::min(oriented(l, false), oriented(l, true));
  }
  // Adds (hash, rank) of every variable of l to seen.
  void record(const Literal& l) {
    thread_local std::vector<std::pair<VarIndex, int>> first;
    std::size_t hx = oriented(l, false);
    first.clear();
    for (VarIndex v : touched) first.emplace_back(v, local[v]);
    if (!l.is_equation()) {
      for (auto [v, r] : first) seen[v].push_back(mix(hx, static_cast<std::size_t>(r)));
      return;
    }
    std::size_t hy = oriented(l, true);
    const std::size_t h = std::min(hx, hy);
    for (auto [v, rx] : first) {
      const int ry = local[v];
      const int r = hx < hy ? rx : hy < hx ? ry : std::min(rx, ry);
      seen[v].push_back(mix(h, static_cast<std::size_t>(r)));
    }
  }
};

}  // namespace

namespace {

std::vector<std::size_t> literal_shapes(const Clause& c) {
  thread_local ShapeHasher hasher;
  const VarIndex n = var_bound(c.literals);
  hasher.color.assign(n, 0);
  hasher.local.assign(n, -1);
  hasher.touched.clear();
  for (const Literal& l : c.literals) hasher.count(l.atom);
  if (n > 0 && c.size() > 1) {
    if (hasher.seen.size() < n) hasher.seen.resize(n);
    for (VarIndex v = 0; v < n; ++v) hasher.seen[v].clear();
    for (const Literal& l : c.literals) hasher.record(l);
    for (VarIndex v = 0; v < n; ++v) {
      auto& xs = hasher.seen[v];
      std::sort(xs.begin(), xs.end());
      std::size_t h = mix(0x51ed270b, xs.size());
      for (std::size_t x : xs) h = mix(h, x);
      hasher.color[v] = h;
    }
  }
  std::vector<std::size_t> hs;
  hs.reserve(c.size());
  for (const Literal& l : c.literals) hs.push_back(hasher.literal(l));
  return hs;
}

struct VariantSearch {
  const Clause& c1;
  const Clause& c2;
  const std::vector<std::size_t>& h1;
  const std::vector<std::size_t>& h2;
  std::vector<std::size_t> order;
  std::vector<char> used;
  Renaming r;

  bool run(std::size_t k) {
    if (k == order.size()) return true;
    const Literal& a = c1.literals[order[k]];
    const std::size_t ha = h1[order[k]];
    for (std::size_t j = 0; j < c2.size(); ++j) {
      if (used[j] || h2[j] != ha) continue;
      const Literal& b = c2.literals[j];
      if (a.positive != b.positive || a.atom.head() != b.atom.head()) continue;
      used[j] = 1;
      const std::size_t mark = r.trail.size();
      if (r.terms(a.atom, b.atom) && run(k + 1)) return true;
      r.undo_to(mark);
      if (a.is_equation()) {
        if (r.terms(a.lhs(), b.rhs()) && r.terms(a.rhs(), b.lhs()) && run(k + 1)) return true;
        r.undo_to(mark);
      }
      used[j] = 0;
    }
    return false;
  }
};

}  // namespace

bool is_variant(const Clause& c1, const Clause& c2) {
  if (c1.size() != c2.size()) return false;
  const std::vector<std::size_t> h1 = literal_shapes(c1);
  const std::vector<std::size_t> h2 = literal_shapes(c2);
  std::vector<std::size_t> s1 = h1;
  std::vector<std::size_t> s2 = h2;
  std::sort(s1.begin(), s1.end());
  std::sort(s2.begin(), s2.end());
  if (s1 != s2) return false;
  VariantSearch search{c1, c2, h1, h2, {}, std::vector<char>(c2.size(), 0),
                       Renaming(var_bound(c1.literals), var_bound(c2.literals))};
  // Rarest shapes first.
  auto multiplicity = [&](std::size_t h) {
    auto [lo, hi] = std::equal_range(s1.begin(), s1.end(), h);
    return hi - lo;
  };
  search.order.resize(c1.size());
  for (std::size_t i = 0; i < c1.size(); ++i) search.order[i] = i;
  std::stable_sort(search.order.begin(), search.order.end(),
                   [&](std::size_t x, std::size_t y) { return multiplicity(h1[x]) < multiplicity(h1[y]); });
  return search.run(0);
}

std::size_t variant_hash(const Clause& c) {
  std::vector<std::size_t> hs = literal_shapes(c);
  std::sort(hs.begin(), hs.end());
  std::size_t h = mix(0, hs.size());
  for (std::size_t x : hs) h = mix(h, x);
  return h;
}

}  // namespace bare
