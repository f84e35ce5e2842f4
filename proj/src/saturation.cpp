#include "bareprover/saturation.hpp"

#include <chrono>
#include <sstream>

#include "bareprover/tptp.hpp"

namespace bare {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::unsatisfiable: return "Unsatisfiable";
    case Status::satisfiable: return "Satisfiable";
    case Status::resource_out: return "ResourceOut";
  }
  return "ResourceOut";
}

// ---------------------------------------------------------------------------
// ProofState

ProofState::ProofState(Strategy strategy) : strategy_(std::move(strategy)) {
  if (strategy_.queues.empty()) throw StrategyError("strategy needs at least one queue");
  for (const EvalQueue& q : strategy_.queues) {
    if (q.frequency < 1) throw StrategyError("queue '" + q.name + "' has frequency < 1");
    if (!q.cef) throw StrategyError("queue '" + q.name + "' has no evaluation function");
  }
  queues_.resize(strategy_.queues.size());
  picks_.assign(strategy_.queues.size(), 0);
}

ClauseId ProofState::add(Clause c) {
  c.id = static_cast<ClauseId>(pool_.size() + 1);
  c.age = next_age_++;
  const int rank = strategy_.prefer_initial && c.role != Role::derived ? 0 : 1;
  pool_.push_back(std::move(c));
  where_.push_back(Where::unprocessed);
  ++unprocessed_;
  const Clause& stored = pool_.back();
  for (std::size_t q = 0; q < queues_.size(); ++q) {
    queues_[q].push({rank, strategy_.queues[q].cef(stored), stored.age, stored.id});
  }
  return stored.id;
}

std::optional<ClauseId> ProofState::select_next(const std::function<bool(const Clause&)>& keep) {
  while (unprocessed_ > 0) {
    if (used_in_turn_ >= strategy_.queues[current_queue_].frequency) {
      current_queue_ = (current_queue_ + 1) % queues_.size();
      used_in_turn_ = 0;
    }
    Heap& h = queues_[current_queue_];
    while (!h.empty() && where_[h.top().id - 1] != Where::unprocessed) h.pop();
    if (h.empty()) {
      current_queue_ = (current_queue_ + 1) % queues_.size();
      used_in_turn_ = 0;
      continue;
    }
    ClauseId id = h.top().id;
    h.pop();
    if (keep && !keep(pool_[id - 1])) {
      discard(id, DiscardReason::subsumed);
      continue;
    }
    ++used_in_turn_;
    ++picks_[current_queue_];
    last_queue_ = current_queue_;
    return id;
  }
  return std::nullopt;
}

void ProofState::move_to_processed(ClauseId id) {
  if (where_.at(id - 1) != Where::unprocessed) return;
  where_[id - 1] = Where::processed;
  --unprocessed_;
  processed_.push_back(&pool_[id - 1]);
}

void ProofState::discard(ClauseId id, DiscardReason) {
  if (where_.at(id - 1) != Where::unprocessed) return;
  where_[id - 1] = Where::discarded;
  --unprocessed_;
}

// ---------------------------------------------------------------------------
// Simplification

Simplification forward_simplify(const Clause& c, std::span<const Clause* const> processed) {
  if (is_tautology(c)) return {false, DiscardReason::tautology};
  for (const Clause* p : processed) {
    if (subsumes(*p, c)) return {false, DiscardReason::subsumed};
  }
  return {};
}

namespace {

class Saturator {
 public:
  Saturator(const Problem& p, const Strategy& s, const Limits& lim)
      : problem_(p), state_(s), limits_(lim), start_(std::chrono::steady_clock::now()) {
    if (!limits_.max_selections && !limits_.wall_seconds) {
      limits_.max_selections = Limits::default_selections;
    }
  }

  SaturationResult run() {
    for (const Clause& input : problem_.clauses) {
      Clause c = input;
      normalize(c);
      c.from.parents.clear();
      c.from.positions.clear();
      c.from.rule = Rule::input;
      if (c.empty()) return finish_unsat(state_.add(std::move(c)));
      if (is_tautology(c)) {
        ++result_.stats.tautologies;
        continue;
      }
      if (is_duplicate(c)) {
        ++result_.stats.duplicates;
        continue;
      }
      remember(state_.add(std::move(c)));
    }

    auto keep = [this](const Clause& c) { return !subsumed_by_processed(c); };
    while (true) {
      if (limits_.max_selections && result_.stats.selections >= *limits_.max_selections) {
        return finish(state_.unprocessed_count() > 0 ? Status::resource_out : Status::satisfiable);
      }
      if (limits_.wall_seconds && elapsed() > *limits_.wall_seconds) {
        return finish(Status::resource_out);
      }
      auto picked = state_.select_next(keep);
      if (!picked) return finish(Status::satisfiable);

      std::vector<const Clause*> before = state_.processed();
      state_.move_to_processed(*picked);
      const Clause& given = state_.clause(*picked);
      features_.push_back(subsumption_features(given));
      if (by_size_.size() <= given.size()) by_size_.resize(given.size() + 1);
      by_size_[given.size()].push_back(features_.size() - 1);
      ++result_.stats.selections;
      result_.trace.push_back(given.id);
      result_.selected.push_back(given);

      for (InferenceOutcome& o : generate(given, before)) {
        ++result_.stats.generated;
        Clause& c = o.conclusion;
        if (c.empty()) return finish_unsat(state_.add(std::move(c)));
        if (is_tautology(c)) {
          ++result_.stats.tautologies;
        } else if (is_duplicate(c)) {
          ++result_.stats.duplicates;
        } else if (subsumed_by_processed(c)) {
          ++result_.stats.subsumed;
        } else {
          ++result_.stats.kept;
          remember(state_.add(std::move(c)));
        }
      }
    }
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  bool subsumed_by_processed(const Clause& c) const {
    const SubsumptionFeatures f = subsumption_features(c);
    const auto& processed = state_.processed();
    const std::size_t max_size = std::min(c.size() + 1, by_size_.size());
    for (std::size_t len = 0; len < max_size; ++len) {
      for (std::size_t k : by_size_[len]) {
        if (features_[k].may_subsume(f) && subsumes(*processed[k], c)) return true;
      }
    }
    return false;
  }

  bool is_duplicate(const Clause& c) const {
    auto [lo, hi] = variants_.equal_range(variant_hash(c));
    for (auto it = lo; it != hi; ++it) {
      if (is_variant(state_.clause(it->second), c)) return true;
    }
    return false;
  }

  void remember(ClauseId id) { variants_.emplace(variant_hash(state_.clause(id)), id); }

  SaturationResult finish(Status s) {
    result_.status = s;
    result_.stats.queue_picks = state_.queue_picks();
    return std::move(result_);
  }

  SaturationResult finish_unsat(ClauseId bottom) {
    auto lookup = [this](ClauseId id) -> const Clause* {
      return id >= 1 && id <= state_.pool().size() ? &state_.clause(id) : nullptr;
    };
    ProofDag dag;
    dag.root = bottom;
    for (ClauseId id : extract_proof(lookup, bottom)) dag.nodes.emplace(id, state_.clause(id));
    result_.proof = std::move(dag);
    return finish(Status::unsatisfiable);
  }

  const Problem& problem_;
  ProofState state_;
  Limits limits_;
  std::chrono::steady_clock::time_point start_;
  SaturationResult result_;
  std::vector<SubsumptionFeatures> features_;  // parallel to state_.processed()
  std::vector<std::vector<std::size_t>> by_size_;  // processed indices by literal count
  std::unordered_multimap<std::size_t, ClauseId> variants_;
};

}  // namespace

SaturationResult saturate(const Problem& p, const Strategy& s, const Limits& lim) {
  if (p.clauses.empty()) throw std::invalid_argument("saturate: empty problem");
  return Saturator(p, s, lim).run();
}

// ---------------------------------------------------------------------------
// Proofs

std::set<ClauseId> extract_proof(const std::function<const Clause*(ClauseId)>& lookup,
                                 ClauseId root) {
  std::set<ClauseId> seen;
  std::vector<ClauseId> todo{root};
  while (!todo.empty()) {
    ClauseId id = todo.back();
    todo.pop_back();
    if (!seen.insert(id).second) continue;
    const Clause* c = lookup(id);
    if (c == nullptr) throw MalformedDag("proof dag: clause " + std::to_string(id) + " missing");
    for (ClauseId parent : c->from.parents) todo.push_back(parent);
  }
  return seen;
}

std::set<ClauseId> extract_proof(const std::map<ClauseId, Clause>& nodes, ClauseId root) {
  return extract_proof(
      [&](ClauseId id) -> const Clause* {
        auto it = nodes.find(id);
        return it == nodes.end() ? nullptr : &it->second;
      },
      root);
}

ProofCheck verify_proof(const ProofDag& dag, const Problem& problem) {
  auto fail = [](ClauseId id, std::string why) { return ProofCheck{false, id, std::move(why)}; };
  auto root = dag.nodes.find(dag.root);
  if (root == dag.nodes.end()) return fail(dag.root, "root missing");
  if (!root->second.empty()) return fail(dag.root, "root is not the empty clause");
  std::set<ClauseId> ids;
  try {
    ids = extract_proof(dag.nodes, dag.root);
  } catch (const MalformedDag& e) {
    return fail(dag.root, e.what());
  }
  for (ClauseId id : ids) {
    const Clause& c = dag.nodes.at(id);
    if (c.from.rule == Rule::input) {
      if (!c.from.parents.empty()) return fail(id, "input clause with parents");
      bool found = false;
      for (const Clause& q : problem.clauses) {
        if (is_variant(q, c)) {
          found = true;
          break;
        }
      }
      if (!found) return fail(id, "input clause not in problem");
      continue;
    }
    std::vector<const Clause*> parents;
    for (ClauseId pid : c.from.parents) {
      if (pid >= id) return fail(id, "parent does not precede conclusion");
      parents.push_back(&dag.nodes.at(pid));
    }
    auto again = replay(c.from, parents);
    if (!again) return fail(id, std::string(to_string(c.from.rule)) + " does not apply");
    if (!is_variant(*again, c)) return fail(id, "replayed conclusion differs");
  }
  return {true, std::nullopt, {}};
}

std::string szs_report(const Signature& sig, const SaturationResult& r, bool with_proof) {
  std::ostringstream out;
  out << "# SZS status " << to_string(r.status) << '\n';
  if (with_proof && r.proof) {
    for (const auto& [id, c] : r.proof->nodes) {
      out << id << ". " << to_tptp(sig, c) << " [" << to_string(c.from.rule);
      if (c.from.rule == Rule::input && !c.from.name.empty()) out << ", " << c.from.name;
      for (ClauseId p : c.from.parents) out << ", " << p;
      out << "]\n";
    }
  }
  return out.str();
}

}  // namespace bare
