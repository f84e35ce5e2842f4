#include "bareprover/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <random>
#include <set>

#include "bareprover/report.hpp"
#include "bareprover/tptp.hpp"

namespace bare {

namespace fs = std::filesystem;

std::vector<CorpusProblem> load_corpus(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("corpus is not a directory: " + dir.string());
  std::vector<CorpusProblem> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".p") continue;
    CorpusProblem cp;
    cp.name = entry.path().filename().string();
    cp.path = entry.path();
    out.push_back(std::move(cp));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  for (CorpusProblem& cp : out) {
    try {
      cp.problem = std::make_shared<const Problem>(parse_problem_file(cp.path));
    } catch (const std::exception& e) {
      cp.error = e.what();
    }
  }
  return out;
}

std::map<std::string, std::shared_ptr<const Problem>> problem_index(const std::vector<CorpusProblem>& corpus) {
  std::map<std::string, std::shared_ptr<const Problem>> out;
  for (const CorpusProblem& cp : corpus) {
    if (cp.problem) out.emplace(cp.name, cp.problem);
  }
  return out;
}

Problem permute(const Problem& p, std::uint64_t seed, std::string_view name) {
  Problem out = p;
  if (seed == 0) return out;
  std::mt19937_64 rng(seed ^ (fnv1a64(name) * 0x9E3779B97F4A7C15ULL));
  std::shuffle(out.clauses.begin(), out.clauses.end(), rng);
  for (std::size_t i = 0; i < out.clauses.size(); ++i) {
    out.clauses[i].id = static_cast<ClauseId>(i + 1);
    out.clauses[i].age = i + 1;
  }
  return out;
}

namespace {

ProblemResult evaluate_one(const CorpusProblem& cp, const StrategyFactory& strategy, const EvalOptions& opts) {
  ProblemResult r;
  r.name = cp.name;
  if (!cp.problem) {
    r.error = cp.error.empty() ? "not loaded" : cp.error;
    return r;
  }
  auto start = std::chrono::steady_clock::now();
  try {
    Problem p = permute(*cp.problem, opts.seed, cp.name);
    r.result = saturate(p, strategy(cp), opts.limits);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

std::vector<ProblemResult> evaluate_corpus(const std::vector<CorpusProblem>& corpus,
                                           const StrategyFactory& strategy, const EvalOptions& opts) {
  std::vector<ProblemResult> out(corpus.size());
  const int n = static_cast<int>(corpus.size());
  const int threads = opts.workers > 0 ? opts.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = evaluate_one(corpus[static_cast<std::size_t>(i)], strategy, opts);
  }
  return out;
}

std::vector<ProblemResult> evaluate_corpus_serial(const std::vector<CorpusProblem>& corpus,
                                                  const StrategyFactory& strategy, const EvalOptions& opts) {
  std::vector<ProblemResult> out;
  out.reserve(corpus.size());
  for (const CorpusProblem& cp : corpus) out.push_back(evaluate_one(cp, strategy, opts));
  return out;
}

std::vector<Example> harvest(const std::vector<CorpusProblem>& corpus, const std::vector<ProblemResult>& results,
                             int loop_index) {
  std::map<std::string, const CorpusProblem*> by_name;
  for (const CorpusProblem& cp : corpus) by_name.emplace(cp.name, &cp);
  std::vector<Example> out;
  for (const ProblemResult& r : results) {
    if (!r.solved() || !r.result->proof) continue;
    auto it = by_name.find(r.name);
    if (it == by_name.end() || !it->second->problem) continue;
    const auto& problem = it->second->problem;
    const ProofDag& dag = *r.result->proof;
    for (const Clause& c : r.result->selected) {
      Example e;
      e.problem = r.name;
      e.clause_text = to_tptp(*problem->signature, c);
      e.clause = c;
      e.signature = problem->signature;
      e.source_problem = problem;
      e.label = dag.nodes.contains(c.id) ? 1 : 0;
      e.first_loop = loop_index;
      out.push_back(std::move(e));
    }
  }
  return out;
}

namespace {

std::string format_seconds(double s) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, s, std::chars_format::fixed, 3);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string results_csv(const std::vector<ProblemResult>& results, bool record_time) {
  std::string out = "problem,status,selections,generated,seconds\n";
  for (const ProblemResult& r : results) {
    out += r.name;
    out += ',';
    if (r.result) {
      out += to_string(r.result->status);
      out += ',' + std::to_string(r.result->stats.selections) + ',' + std::to_string(r.result->stats.generated);
    } else {
      out += "Error,0,0";
    }
    out += ',' + format_seconds(record_time ? r.seconds : 0.0) + '\n';
  }
  return out;
}

void RunConfig::validate() const {
  if (boost_cutoff < 0) throw std::invalid_argument("boost cutoff must be >= 0");
  if (!limits.max_selections && !limits.wall_seconds) throw std::invalid_argument("no resource limit");
  if (mode == GuidanceMode::baseline && !schedule.empty()) {
    throw std::invalid_argument("loop mode must be solo or coop");
  }
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (schedule[k].loop_index != static_cast<int>(k)) throw std::invalid_argument("schedule indices not contiguous");
    TrainParams{schedule[k].depth, schedule[k].trees, eta}.validate();
    FeatureConfig::with_bits(schedule[k].feature_bits);
  }
}

namespace {

void write_file(const fs::path& path, std::string_view text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::vector<Example> load_boost(const RunConfig& config,
                                const std::map<std::string, std::shared_ptr<const Problem>>& problems) {
  std::vector<Example> out;
  for (const fs::path& file : config.boost_files) {
    std::vector<Example> rows = read_examples_file(file, problems);
    for (Example& e : rows) {
      if (!e.is_boost()) e.source = "boost:" + file.stem().string();
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace

LoopReport run_loop(const RunConfig& config) {
  config.validate();
  const auto corpus = load_corpus(config.corpus);
  const auto problems = problem_index(corpus);
  const std::vector<Example> boost = load_boost(config, problems);

  EvalOptions opts{config.limits, config.seed, config.workers};
  LoopReport report;
  report.label = std::string(to_string(config.mode));
  TrainingStore store;
  std::set<std::string> cumulative;

  auto flush_report = [&] {
    if (config.out_dir) write_file(*config.out_dir / "report.csv", report_csv(report));
  };
  auto record = [&](LoopRow row, const std::vector<ProblemResult>& results) {
    for (const ProblemResult& r : results) {
      if (!r.solved()) continue;
      ++row.solved;
      if (cumulative.insert(r.name).second) row.newly_solved.push_back(r.name);
    }
    row.cumulative = cumulative.size();
    report.rows.push_back(std::move(row));
  };

  auto start = std::chrono::steady_clock::now();
  auto baseline = evaluate_corpus(corpus, [](const CorpusProblem&) { return e0_strategy(); }, opts);
  store.add(harvest(corpus, baseline, -1));
  LoopRow base_row;
  base_row.seconds =
      config.record_time ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() : 0.0;
  record(std::move(base_row), baseline);
  if (config.out_dir) write_file(*config.out_dir / "baseline" / "results.csv", results_csv(baseline, config.record_time));

  for (const ScheduleEntry& entry : config.schedule) {
    const int k = entry.loop_index;
    start = std::chrono::steady_clock::now();
    const FeatureConfig cfg = FeatureConfig::with_bits(entry.feature_bits);
    std::shared_ptr<const GbdtModel> model;
    MergedData merged;
    try {
      merged = merge(store, boost, k, config.boost_cutoff, cfg);
      TrainParams params{entry.depth, entry.trees, config.eta};
      params.threads = config.train_threads;
      model = std::make_shared<const GbdtModel>(train(merged.dataset, params));
    } catch (const std::exception& e) {
      flush_report();
      throw LoopError(k, std::string("training failed: ") + e.what(), report);
    }

    auto results = evaluate_corpus(
        corpus,
        [&](const CorpusProblem& cp) {
          ModelContext ctx = make_context(model, *cp.problem);
          return make_strategy(config.mode, &ctx);
        },
        opts);
    store.add(harvest(corpus, results, k));

    LoopRow row;
    row.loop = k;
    row.mode = std::string(to_string(config.mode));
    row.depth = entry.depth;
    row.trees = entry.trees;
    row.bits = entry.feature_bits;
    row.pos = merged.positives;
    row.neg = merged.negatives;
    row.boost = merged.boost;
    row.seconds =
        config.record_time ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() : 0.0;
    record(std::move(row), results);

    if (config.out_dir) {
      const fs::path dir = *config.out_dir / ("loop-" + std::to_string(k));
      write_file(dir / "model.txt", serialize(*model));
      write_file(dir / "data.txt", write_examples(store.examples(), cfg));
      write_file(dir / "results.csv", results_csv(results, config.record_time));
    }
    flush_report();
  }
  flush_report();
  return report;
}

}  // namespace bare
