// Acceptance gate: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "bareprover/calculus.hpp"
#include "bareprover/guidance.hpp"
#include "bareprover/harness.hpp"
#include "bareprover/report.hpp"
#include "bareprover/schedule.hpp"
#include "bareprover/tptp.hpp"
#include "support/gbdt_checks.hpp"
#include "support/oracles.hpp"

using namespace bare;
namespace fs = std::filesystem;

namespace {

// Tolerances and sizes.
constexpr double kSoundnessSeconds = 120.0;
constexpr int kUnifyPairs = 10000;
constexpr int kSubsumptionPairs = 1000;
constexpr int kGroundInferences = 10000;
constexpr double kLossTolerance = 1e-9;
constexpr double kXorAccuracy = 0.95;
constexpr double kLeafTolerance = 1e-12;
constexpr std::uint64_t kLoopBudget = 60;
constexpr double kBaselineLow = 0.40, kBaselineHigh = 0.60;
constexpr double kImprovement = 0.05;
constexpr int kLoops = 4;
const std::vector<std::uint64_t> kSeeds{1, 2, 3};

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void soundness() {
  auto t0 = std::chrono::steady_clock::now();
  auto corpus = load_corpus(BAREPROVER_CORPUS_DIR);
  auto results = evaluate_corpus(corpus, [](const CorpusProblem&) { return e0_strategy(); }, {});
  std::size_t unsat = 0, verified = 0, errors = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!results[i].result) {
      ++errors;
      continue;
    }
    if (!results[i].solved()) continue;
    ++unsat;
    if (results[i].result->proof && verify_proof(*results[i].result->proof, *corpus[i].problem).ok) ++verified;
  }
  double secs = seconds_since(t0);
  report("soundness", corpus.size() >= 60 && errors == 0 && unsat > 0 && verified == unsat && secs < kSoundnessSeconds,
         std::to_string(verified) + "/" + std::to_string(unsat) + " proofs verified on " +
             std::to_string(corpus.size()) + " problems in " + std::to_string(secs) + " s");
}

// t[th] == g for ground g, without building t[th].
bool equal_ground(const oracle::T& t, const oracle::T& g, const oracle::T* th) {
  if (t.is_var()) return th[t.var()] == g;
  if (t.sym != g.sym || t.args.size() != g.args.size()) return false;
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (!equal_ground(t.args[i], g.args[i], th)) return false;
  }
  return true;
}

// a[th] == b[th] for a ground th.
bool equal_under(const oracle::T& a, const oracle::T& b, const oracle::T* th) {
  if (a.is_var()) return equal_ground(b, th[a.var()], th);
  if (b.is_var()) return equal_ground(a, th[b.var()], th);
  if (a.sym != b.sym || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!equal_under(a.args[i], b.args[i], th)) return false;
  }
  return true;
}

bool occurs(const oracle::T& t, int v) {
  if (t.is_var()) return t.var() == v;
  return std::any_of(t.args.begin(), t.args.end(), [&](const oracle::T& a) { return occurs(a, v); });
}

void unification_oracle() {
  oracle::TermSig ts;
  std::mt19937_64 rng(2024);
  const auto ground = ts.universe(2, {});
  int mismatches = 0, unifiable = 0, matchable = 0;
  for (int trial = 0; trial < kUnifyPairs; ++trial) {
    oracle::T a = ts.random(rng, 2, 2), b = ts.random(rng, 2, 2);
    const bool v0 = occurs(a, 0) || occurs(b, 0), v1 = occurs(a, 1) || occurs(b, 1);

    // Every ground unifier over terms of depth <= 2.
    std::vector<std::pair<std::size_t, std::size_t>> witnesses;
    oracle::T th[2];
    for (std::size_t i = 0; i < (v0 ? ground.size() : 1); ++i) {
      th[0] = ground[i];
      for (std::size_t j = 0; j < (v1 ? ground.size() : 1); ++j) {
        th[1] = ground[j];
        if (equal_under(a, b, th)) {
          witnesses.emplace_back(i, j);
        }
      }
    }
    auto mgu = unify(oracle::to(a), oracle::to(b));
    bool ok = mgu.has_value() || witnesses.empty();
    if (mgu) {
      ++unifiable;
      oracle::Binding s = oracle::from(*mgu);
      ok = ok && oracle::subst(a, s) == oracle::subst(b, s) && !witnesses.empty();
      // Most general: every ground unifier is an instance of the mgu.
      oracle::T sx{ts.f, {oracle::subst(oracle::T::v(0), s), oracle::subst(oracle::T::v(1), s)}};
      for (auto [i, j] : witnesses) {
        oracle::Binding r;
        oracle::T gx{ts.f, {v0 ? ground[i] : ground[0], v1 ? ground[j] : ground[0]}};
        oracle::T pat = sx;
        if (!v0) pat.args[0] = ground[0];
        if (!v1) pat.args[1] = ground[0];
        if (!oracle::match(pat, gx, r)) {
          ok = false;
          break;
        }
      }
    }

    // One-sided matching onto a target whose variables are 2 and 3.
    oracle::T target = oracle::subst(b, {{0, oracle::T::v(2)}, {1, oracle::T::v(3)}});
    std::vector<oracle::T> subs;
    oracle::subterms(target, subs);
    bool brute_match = false;
    for (const auto& s0 : subs) {
      for (const auto& s1 : subs) {
        if (oracle::subst(a, {{0, s0}, {1, s1}}) == target) brute_match = true;
      }
    }
    auto m = match_onto(oracle::to(a), oracle::to(target));
    bool mok = m.has_value() == brute_match;
    if (m) {
      ++matchable;
      oracle::Binding s = oracle::from(*m);
      mok = mok && oracle::subst(a, s) == target;
      for (const auto& [v, t] : s) mok = mok && (v == 0 || v == 1);
    }
    if (!ok || !mok) ++mismatches;
  }
  report("unification-matching-oracle", mismatches == 0,
         std::to_string(kUnifyPairs) + " pairs, " + std::to_string(unifiable) + " unifiable, " +
             std::to_string(matchable) + " matchable, " + std::to_string(mismatches) + " discrepancies");
}

void subsumption_oracle() {
  oracle::ClauseGen gen;
  std::mt19937_64 rng(4049);
  int mismatches = 0, positive = 0;
  for (int trial = 0; trial < kSubsumptionPairs; ++trial) {
    auto g = gen.clause(rng, 1, 3, 3);
    auto s = trial % 2 ? gen.instance_of(rng, g) : gen.clause(rng, 1, 4, 2);
    bool expect = oracle::subsumes(g, s);
    positive += expect;
    Clause gc = oracle::to_clause(g), sc = oracle::to_clause(s);
    if (subsumes(gc, sc) != expect) ++mismatches;
  }
  report("subsumption-oracle", mismatches == 0,
         std::to_string(kSubsumptionPairs) + " pairs, " + std::to_string(positive) + " subsuming, " +
             std::to_string(mismatches) + " discrepancies");
}

void ground_soundness() {
  oracle::GroundSig gs;
  const auto models = oracle::ground_models();
  std::mt19937_64 rng(77);
  int checked = 0, counterexamples = 0;
  while (checked < kGroundInferences) {
    std::vector<Clause> cs;
    for (int i = 0; i < 4; ++i) {
      cs.push_back(gs.random_clause(rng, 3));
      cs.back().id = static_cast<ClauseId>(i + 1);
    }
    for (std::size_t g = 0; g < cs.size(); ++g) {
      std::vector<const Clause*> proc;
      for (std::size_t i = 0; i < g; ++i) proc.push_back(&cs[i]);
      for (const auto& o : generate(cs[g], proc)) {
        ++checked;
        for (const auto& m : models) {
          bool premises = std::all_of(o.premises.begin(), o.premises.end(),
                                      [&](ClauseId id) { return gs.holds(cs[id - 1], m); });
          if (premises && !gs.holds(o.conclusion, m)) ++counterexamples;
        }
      }
    }
  }
  report("ground-soundness", counterexamples == 0,
         std::to_string(checked) + " inferences x " + std::to_string(models.size()) + " models, " +
             std::to_string(counterexamples) + " counterexamples");
}

Clause derived(Signature& sig, const std::string& text) {
  Clause c = parse_clause(text, sig);
  c.role = Role::derived;
  return c;
}

std::string nest(const std::string& f, int n) {
  std::string t = "a";
  for (int k = 0; k < n; ++k) t = f + "(" + t + ")";
  return t;
}

void scheduler_ratio() {
  Signature sig;
  ProofState st(e0_strategy());
  for (int i = 0; i < 1500; ++i) st.add(derived(sig, "p(" + nest("g", (i * 7) % 13) + ") | q" + std::to_string(i)));
  bool nonempty = true;
  for (int i = 0; i < 1200; ++i) {
    auto id = st.select_next();
    if (!id) return report("scheduler-ratio", false, "pool ran dry");
    st.move_to_processed(*id);
    nonempty = nonempty && st.unprocessed_count() > 0;
  }
  auto e0 = st.queue_picks();

  Problem p = parse_problem("cnf(a, axiom, good(a) | q(X)).\ncnf(g, negated_conjecture, ~q(b)).");
  auto model = std::make_shared<GbdtModel>();
  model->feature_bits = 8;
  Tree t;
  t.nodes.push_back({false, hash_bucket("+good", 8), 0, 0, 1, 2});
  t.nodes.push_back({true, 0, 0, -1.5, -1, -1});
  t.nodes.push_back({true, 0, 0, 2.0, -1, -1});
  model->trees.push_back(t);
  ModelContext ctx = make_context(model, p);
  ProofState coop(coop_strategy(ctx));
  for (int i = 0; i < 300; ++i) {
    coop.add(derived(*p.signature, std::string(i % 3 ? "q(" : "good(") + nest("f", (i * 5) % 7) + ")"));
  }
  bool rounds = true;
  for (int round = 1; round <= 20; ++round) {
    for (int k = 0; k < 12; ++k) coop.move_to_processed(*coop.select_next());
    const auto& c = coop.queue_picks();
    rounds = rounds && c[0] == 6u * round && c[1] == 5u * round && c[2] == 1u * round;
  }
  const auto& c = coop.queue_picks();
  report("scheduler-ratio", nonempty && e0[0] == 1000 && e0[1] == 200 && rounds,
         "E0 weight/fifo = " + std::to_string(e0[0]) + "/" + std::to_string(e0[1]) + ", coop after 20 rounds = " +
             std::to_string(c[0]) + ":" + std::to_string(c[1]) + ":" + std::to_string(c[2]));
}

void gbdt_properties() {
  double worst_loss = -INFINITY;
  bool depth_ok = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Dataset d = gbdt_checks::random_dataset(seed, 300);
    TrainParams p{4, 40, 0.2};
    worst_loss = std::max(worst_loss, gbdt_checks::max_loss_increase(d, p));
    for (int depth : {1, 3, 6}) depth_ok = depth_ok && gbdt_checks::depth_within(train(d, {depth, 10, 0.2}), depth);
  }
  Dataset x = gbdt_checks::xor_dataset(31, 400);
  double acc = gbdt_checks::accuracy(train(x, {3, 50, 0.2}), x);
  double leaf = 0;
  for (const auto& labels : std::vector<std::vector<int>>{
           {1, 1, 1, 1, 1, 1, 1, 1}, {0, 0, 0, 0, 0, 0, 0, 0}, {1, 0, 1, 1, 0, 0, 0, 1}, {0, 0, 0, 1, 0, 0, 0, 0}}) {
    leaf = std::max(leaf, gbdt_checks::single_leaf_error(labels, 0.2, 1.0));
  }
  report("gbdt-properties", worst_loss <= kLossTolerance && depth_ok && acc >= kXorAccuracy && leaf < kLeafTolerance,
         "max loss increase " + std::to_string(worst_loss) + ", depth bound " + (depth_ok ? "held" : "violated") +
             ", XOR accuracy " + std::to_string(acc) + ", leaf error " + std::to_string(leaf));
}

void schedule_tables() {
  struct Golden {
    const char* name;
    std::vector<int> d, t, size;
  };
  const std::vector<Golden> tables{
      {"inc2",
       {3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 29, 31, 33},
       {150, 150, 150, 100, 100, 100, 75, 50, 75, 100, 150, 75, 100, 150, 75, 100},
       std::vector<int>(16, 32768)},
      {"exp2",
       {4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 16, 32, 9, 16, 32, 64, 24, 25, 32},
       {50, 150, 160, 170, 180, 190, 200, 200, 200, 200, 210, 220, 225, 225, 225, 300, 300, 225, 150, 250, 250, 250},
       std::vector<int>(22, 65536)},
      {"exp5",
       {512, 512, 32, 1000, 32, 1000, 32, 1000, 32, 1000, 1000, 100},
       {2, 2, 100, 100, 200, 100, 200, 32, 300, 32, 32, 32},
       {16384, 8192, 4096, 256, 4096, 256, 4096, 32, 2048, 64, 32, 128}},
  };
  int wrong = 0, entries = 0;
  for (const auto& g : tables) {
    auto s = builtin_schedule(g.name, static_cast<int>(g.d.size()));
    for (std::size_t k = 0; k < g.d.size(); ++k, ++entries) {
      if (s[k].depth != g.d[k] || s[k].trees != g.t[k] || static_cast<int>(s[k].feature_size()) != g.size[k]) ++wrong;
    }
  }
  auto inc = builtin_schedule("inc", 24);
  for (int k = 0; k < 24; ++k, ++entries) {
    const auto& e = inc[static_cast<std::size_t>(k)];
    if (e.depth != std::min(3 + 2 * k, 33) || e.trees != 100) ++wrong;
  }
  report("schedule-golden-tables", wrong == 0,
         std::to_string(entries) + " entries, " + std::to_string(wrong) + " mismatches");
}

fs::path scratch_dir() {
  fs::path d = fs::temp_directory_path() / ("bareprover_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

RunConfig loop_config(std::uint64_t seed) {
  RunConfig cfg;
  cfg.corpus = BAREPROVER_CORPUS_DIR;
  cfg.mode = GuidanceMode::solo;
  cfg.limits = Limits::selections(kLoopBudget);
  cfg.schedule = builtin_schedule("inc", kLoops);
  cfg.seed = seed;
  return cfg;
}

std::size_t best_loop(const LoopReport& r) {
  std::size_t best = 0;
  for (const auto& row : r.rows) {
    if (row.loop >= 0) best = std::max(best, row.solved);
  }
  return best;
}

template <typename V>
V median(std::vector<V> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

void loops(const fs::path& scratch) {
  const double n = static_cast<double>(load_corpus(BAREPROVER_CORPUS_DIR).size());

  // Unboosted runs.
  std::vector<double> margins;
  std::vector<std::size_t> plain_loop1;
  bool baseline_ok = true;
  std::string detail;
  for (std::uint64_t seed : kSeeds) {
    LoopReport r = run_loop(loop_config(seed));
    const double e0 = static_cast<double>(r.rows[0].solved);
    baseline_ok = baseline_ok && e0 >= kBaselineLow * n && e0 <= kBaselineHigh * n;
    margins.push_back(static_cast<double>(best_loop(r)) - e0);
    plain_loop1.push_back(r.rows[2].solved);
    detail += " seed " + std::to_string(seed) + ": E0 " + std::to_string(r.rows[0].solved) + " best " +
              std::to_string(best_loop(r)) + ";";
  }
  double m = median(margins);
  report("loop-improvement", baseline_ok && m >= kImprovement * n,
         "median gain " + std::to_string(m) + " >= " + std::to_string(kImprovement * n) + " required;" + detail);

  // Boost data from a prior run with another seed.
  RunConfig prior = loop_config(0);
  prior.out_dir = scratch / "prior";
  run_loop(prior);
  std::vector<long> diffs;
  std::string bdetail;
  for (std::size_t i = 0; i < kSeeds.size(); ++i) {
    RunConfig cfg = loop_config(kSeeds[i]);
    cfg.schedule = builtin_schedule("inc", 2);
    cfg.boost_files = {scratch / "prior" / ("loop-" + std::to_string(kLoops - 1)) / "data.txt"};
    LoopReport r = run_loop(cfg);
    diffs.push_back(static_cast<long>(r.rows[2].solved) - static_cast<long>(plain_loop1[i]));
    bdetail += " seed " + std::to_string(kSeeds[i]) + ": " + std::to_string(r.rows[2].solved) + " vs " +
               std::to_string(plain_loop1[i]) + ";";
  }
  report("boost-analog", median(diffs) >= 0, "loop 1 boosted vs unboosted," + bdetail);
}

void determinism(const fs::path& scratch) {
  std::string text[2];
  for (int i = 0; i < 2; ++i) {
    RunConfig cfg = loop_config(7);
    cfg.out_dir = scratch / ("det" + std::to_string(i));
    run_loop(cfg);
    text[i] = slurp(*cfg.out_dir / "report.csv");
  }
  report("determinism", !text[0].empty() && text[0] == text[1],
         std::to_string(text[0].size()) + " byte report, " + (text[0] == text[1] ? "identical" : "different"));
}

void guarded(const std::string& name, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(name, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  const fs::path scratch = scratch_dir();
  guarded("soundness", soundness);
  guarded("unification-matching-oracle", unification_oracle);
  guarded("subsumption-oracle", subsumption_oracle);
  guarded("ground-soundness", ground_soundness);
  guarded("scheduler-ratio", scheduler_ratio);
  guarded("gbdt-properties", gbdt_properties);
  guarded("schedule-golden-tables", schedule_tables);
  guarded("loop-improvement/boost-analog", [&] { loops(scratch); });
  guarded("determinism", [&] { determinism(scratch); });
  fs::remove_all(scratch);
  std::printf("acceptance: %d failing\n", failures);
  return failures ? 1 : 0;
}
