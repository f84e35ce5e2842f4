#pragma once

// Given-clause saturation with round-robin clause evaluation queues.

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "bareprover/calculus.hpp"
#include "bareprover/logic.hpp"

namespace bare {

// Clause evaluation function: smaller weights are selected first.
using ClauseEvaluation = std::function<double(const Clause&)>;

struct EvalQueue {
  std::string name;
  ClauseEvaluation cef;
  int frequency = 1;
};

struct Strategy {
  std::vector<EvalQueue> queues;
  bool prefer_initial = true;
};

struct Limits {
  std::optional<std::uint64_t> max_selections;
  std::optional<double> wall_seconds;

  static constexpr std::uint64_t default_selections = 1000;

  static Limits selections(std::uint64_t n) { return {n, std::nullopt}; }
  static Limits wall(double seconds) { return {std::nullopt, seconds}; }
};

enum class Status : std::uint8_t { unsatisfiable, satisfiable, resource_out };

std::string_view to_string(Status s);

enum class DiscardReason : std::uint8_t { tautology, subsumed, duplicate };

struct Statistics {
  std::uint64_t selections = 0;
  std::uint64_t generated = 0;
  std::uint64_t kept = 0;
  std::uint64_t tautologies = 0;
  std::uint64_t subsumed = 0;
  std::uint64_t duplicates = 0;
  std::vector<std::uint64_t> queue_picks;  // per strategy queue
};

struct ProofDag {
  std::map<ClauseId, Clause> nodes;
  ClauseId root = 0;
};

struct SaturationResult {
  Status status = Status::resource_out;
  std::optional<ProofDag> proof;  // set iff unsatisfiable
  Statistics stats;
  std::vector<ClauseId> trace;    // clauses moved to P, in order
  std::vector<Clause> selected;   // the same clauses, parallel to trace
};

class StrategyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The proof state: processed clauses P and the unprocessed pool U, held in
// one priority queue per evaluation function. Every clause of U sits in all
// queues; entries whose clause has since left U are skipped when popped.
class ProofState {
 public:
  explicit ProofState(Strategy strategy);

  // Assigns id and age, evaluates the clause under every queue and puts it
  // into U. Clauses with Role other than derived count as initial.
  ClauseId add(Clause c);

  // Pops the next clause per the round-robin schedule. `keep` may reject a
  // popped clause (it is then discarded as subsumed); like stale entries,
  // rejected pops do not use up the queue's turn. Returns nullopt iff U is
  // empty. The clause stays in U until move_to_processed.
  std::optional<ClauseId> select_next(const std::function<bool(const Clause&)>& keep = {});

  void move_to_processed(ClauseId id);
  void discard(ClauseId id, DiscardReason reason);

  const Clause& clause(ClauseId id) const { return pool_.at(id - 1); }
  const std::vector<const Clause*>& processed() const noexcept { return processed_; }
  std::size_t unprocessed_count() const noexcept { return unprocessed_; }
  std::size_t queue_count() const noexcept { return queues_.size(); }
  // Index of the queue that produced the last selection.
  std::size_t last_queue() const noexcept { return last_queue_; }
  const std::vector<std::uint64_t>& queue_picks() const noexcept { return picks_; }
  const std::deque<Clause>& pool() const noexcept { return pool_; }

 private:
  enum class Where : std::uint8_t { unprocessed, processed, discarded };

  struct Entry {
    int initial_rank;
    double weight;
    std::uint64_t age;
    ClauseId id;
    bool operator>(const Entry& o) const {
      if (initial_rank != o.initial_rank) return initial_rank > o.initial_rank;
      if (weight != o.weight) return weight > o.weight;
      return age > o.age;
    }
  };
  using Heap = std::priority_queue<Entry, std::vector<Entry>, std::greater<>>;

  Strategy strategy_;
  std::deque<Clause> pool_;  // stable addresses for processed_
  std::vector<Where> where_;
  std::vector<Heap> queues_;
  std::vector<const Clause*> processed_;
  std::vector<std::uint64_t> picks_;
  std::size_t unprocessed_ = 0;
  std::size_t current_queue_ = 0;
  int used_in_turn_ = 0;
  std::size_t last_queue_ = 0;
  std::uint64_t next_age_ = 1;
};

struct Simplification {
  bool keep = true;
  DiscardReason reason = DiscardReason::tautology;
};

Simplification forward_simplify(const Clause& c, std::span<const Clause* const> processed);

SaturationResult saturate(const Problem& p, const Strategy& s, const Limits& lim = {});

class MalformedDag : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ancestors of `root` (inclusive) following provenance parents. Throws
// MalformedDag when a parent cannot be found.
std::set<ClauseId> extract_proof(const std::function<const Clause*(ClauseId)>& lookup,
                                 ClauseId root);
std::set<ClauseId> extract_proof(const std::map<ClauseId, Clause>& nodes, ClauseId root);

struct ProofCheck {
  bool ok = false;
  std::optional<ClauseId> failing;
  std::string reason;
};

// Independent replay of every inference of the dag against the problem.
ProofCheck verify_proof(const ProofDag& dag, const Problem& problem);

// `# SZS status ...` line, plus one `id. clause [rule, parents]` line per
// proof step when `with_proof` and a proof exists.
std::string szs_report(const Signature& sig, const SaturationResult& r, bool with_proof);

}  // namespace bare
