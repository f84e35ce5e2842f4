#pragma once

// Terms, literals, clauses and substitutions for a first-order clause
// language with built-in equality.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bare {

using SymbolId = std::uint32_t;
using VarIndex = std::uint32_t;
using ClauseId = std::uint32_t;

enum class SymbolKind : std::uint8_t { function, predicate, equality };

struct Symbol {
  std::string name;
  std::uint32_t arity = 0;
  SymbolKind kind = SymbolKind::function;
};

class ArityMismatch : public std::runtime_error {
 public:
  ArityMismatch(std::string symbol, std::string message)
      : std::runtime_error(std::move(message)), symbol_(std::move(symbol)) {}
  const std::string& symbol() const noexcept { return symbol_; }

 private:
  std::string symbol_;
};

// Symbol table. Id 0 is always the built-in equality symbol "=".
class Signature {
 public:
  static constexpr SymbolId equality = 0;

  Signature();

  // Returns the id for (name, arity, kind), registering it on first use.
  // Throws ArityMismatch if the name is already known with another arity
  // or kind.
  SymbolId intern(std::string_view name, std::uint32_t arity, SymbolKind kind);
  std::optional<SymbolId> find(std::string_view name) const;

  const Symbol& operator[](SymbolId id) const { return symbols_[id]; }
  std::size_t size() const noexcept { return symbols_.size(); }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }

 private:
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> by_name_;
};

// Immutable, structurally shared first-order term. Copies are cheap.
class Term {
 public:
  Term() = default;

  static Term variable(VarIndex index);
  static Term apply(SymbolId head, std::vector<Term> args);
  static Term constant(SymbolId head) { return apply(head, {}); }

  bool valid() const noexcept { return node_ != nullptr; }
  bool is_variable() const noexcept { return node_->is_var; }
  VarIndex var() const noexcept { return node_->id; }
  SymbolId head() const noexcept { return node_->id; }
  std::span<const Term> args() const noexcept { return node_->args; }
  const Term& arg(std::size_t i) const { return node_->args[i]; }

  // Number of symbol occurrences (function heads) in the term.
  std::uint32_t symbol_count() const noexcept { return node_->symbols; }
  // Number of variable occurrences in the term.
  std::uint32_t var_count() const noexcept { return node_->vars; }
  std::uint32_t depth() const noexcept { return node_->depth; }
  bool ground() const noexcept { return node_->vars == 0; }
  // One past the largest variable index, 0 for ground terms.
  VarIndex var_bound() const noexcept { return node_->var_bound; }
  std::size_t hash() const noexcept { return node_->hash; }

  bool same_node(const Term& other) const noexcept { return node_ == other.node_; }

  friend bool operator==(const Term& a, const Term& b) noexcept;

 private:
  struct Node {
    bool is_var = false;
    std::uint32_t id = 0;
    std::vector<Term> args;
    std::uint32_t symbols = 0;
    std::uint32_t vars = 0;
    std::uint32_t depth = 1;
    VarIndex var_bound = 0;
    std::size_t hash = 0;
  };

  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

// Follows `path` (argument indices) from `t`. Returns nullptr if the path
// leaves the term.
const Term* subterm_at(const Term& t, std::span<const int> path);
Term replace_at(const Term& t, std::span<const int> path, const Term& replacement);

// A literal is a signed atom. Equations use the equality symbol as the atom
// head; their two sides are interchangeable everywhere.
struct Literal {
  bool positive = true;
  Term atom;

  bool is_equation() const noexcept { return atom.head() == Signature::equality; }
  const Term& lhs() const { return atom.arg(0); }
  const Term& rhs() const { return atom.arg(1); }

  static Literal equation(bool positive, Term lhs, Term rhs) {
    return {positive, Term::apply(Signature::equality, {std::move(lhs), std::move(rhs)})};
  }
  // The same equation with its sides swapped.
  Literal flipped() const { return equation(positive, rhs(), lhs()); }

  friend bool operator==(const Literal& a, const Literal& b) noexcept {
    return a.positive == b.positive && a.atom == b.atom;
  }
};

enum class Role : std::uint8_t { axiom, negated_conjecture, derived };

enum class Rule : std::uint8_t {
  input,
  resolution,
  factoring,
  equality_resolution,
  paramodulation,
};

std::string_view to_string(Role r);
std::string_view to_string(Rule r);
std::optional<Rule> rule_from_string(std::string_view s);

// How a clause came to be. Positions are rule specific:
//   resolution           {i, j}
//   factoring            {i, j}
//   equality_resolution  {i}
//   paramodulation       {eq_index, orientation, lit_index, path...}
struct Provenance {
  Rule rule = Rule::input;
  std::vector<ClauseId> parents;
  std::vector<int> positions;
  std::string name;  // input clauses only
};

struct Clause {
  ClauseId id = 0;
  std::vector<Literal> literals;
  Role role = Role::derived;
  std::uint64_t age = 0;
  Provenance from;
  VarIndex num_vars = 0;  // variables are 0..num_vars-1 once normalized

  bool empty() const noexcept { return literals.empty(); }
  std::size_t size() const noexcept { return literals.size(); }
};

// Renumbers variables to 0..n-1 in order of first occurrence and updates
// num_vars.
void normalize(Clause& c);
VarIndex var_bound(std::span<const Literal> literals);

// Finite map from variables to terms.
class Substitution {
 public:
  const Term* lookup(VarIndex v) const noexcept {
    return v < bindings_.size() && bindings_[v].valid() ? &bindings_[v] : nullptr;
  }
  void bind(VarIndex v, Term t);
  void unbind(VarIndex v) noexcept {
    if (v < bindings_.size()) bindings_[v] = Term{};
  }
  bool empty() const noexcept;
  std::size_t size() const noexcept;
  // Bound variables in ascending order.
  std::vector<VarIndex> domain() const;

  friend bool operator==(const Substitution& a, const Substitution& b) noexcept;

 private:
  std::vector<Term> bindings_;
};

// Simultaneous replacement; bindings are not chased, so `s` should be
// idempotent (as returned by unify) for the usual semantics.
Term apply(const Substitution& s, const Term& t);
Literal apply(const Substitution& s, const Literal& l);
// Result is normalized.
Clause apply(const Substitution& s, const Clause& c);

// Most general unifier with occurs check. The result is idempotent.
std::optional<Substitution> unify(const Term& a, const Term& b);
// Extends `s` (triangular form allowed) so that a and b become equal.
// Leaves `s` in an unspecified state on failure.
bool unify_into(Substitution& s, const Term& a, const Term& b);
// Rewrites a triangular substitution into idempotent form.
Substitution resolved(const Substitution& s);

// One-sided matcher: binds only pattern variables.
std::optional<Substitution> match_onto(const Term& pattern, const Term& target);
std::optional<Substitution> match_onto(const Literal& pattern, const Literal& target);
// Extends `s`; on failure, bindings made by this call are undone. On
// success the newly bound variables are appended to `trail` if given.
bool match_into(Substitution& s, const Term& pattern, const Term& target,
                std::vector<VarIndex>* trail = nullptr);

// Variant of c2 whose variables are disjoint from c1's.
Clause rename_apart(const Clause& c1, const Clause& c2);
Clause shift_vars(const Clause& c, VarIndex offset);

// fweight per symbol occurrence (including predicate and equality symbols),
// vweight per variable occurrence, positive literals scaled by pos_mult.
double clause_weight(const Clause& c, double fweight, double vweight, double pos_mult);

bool is_variant(const Clause& c1, const Clause& c2);

// Variable-blind hash; variant clauses hash equal.
std::size_t variant_hash(const Clause& c);

struct Problem {
  std::shared_ptr<Signature> signature = std::make_shared<Signature>();
  std::vector<Clause> clauses;
};

}  // namespace bare
