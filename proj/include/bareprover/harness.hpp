#pragma once

// Corpus evaluation, training-data harvesting and the prove/learn loop.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bareprover/guidance.hpp"
#include "bareprover/saturation.hpp"
#include "bareprover/schedule.hpp"
#include "bareprover/training_data.hpp"

namespace bare {

struct CorpusProblem {
  std::string name;  // file name, e.g. "grp_001.p"
  std::filesystem::path path;
  std::shared_ptr<const Problem> problem;  // null when parsing failed
  std::string error;
};

// All .p files of `dir`, sorted by name. Parse failures are recorded per
// problem. Throws std::runtime_error if `dir` is not a directory.
std::vector<CorpusProblem> load_corpus(const std::filesystem::path& dir);

std::map<std::string, std::shared_ptr<const Problem>> problem_index(const std::vector<CorpusProblem>& corpus);

// Seed 0 keeps the input order; other seeds shuffle the clauses with a
// generator keyed on seed and problem name.
Problem permute(const Problem& p, std::uint64_t seed, std::string_view name);

struct ProblemResult {
  std::string name;
  std::optional<SaturationResult> result;  // empty on error
  std::string error;
  double seconds = 0;

  bool solved() const { return result && result->status == Status::unsatisfiable; }
};

using StrategyFactory = std::function<Strategy(const CorpusProblem&)>;

struct EvalOptions {
  Limits limits = Limits::selections(Limits::default_selections);
  std::uint64_t seed = 0;
  int workers = 0;  // 0: OpenMP default
};

// One result per corpus problem, in corpus order. Problems run in
// parallel; the result does not depend on the worker count.
std::vector<ProblemResult> evaluate_corpus(const std::vector<CorpusProblem>& corpus,
                                           const StrategyFactory& strategy, const EvalOptions& opts);
std::vector<ProblemResult> evaluate_corpus_serial(const std::vector<CorpusProblem>& corpus,
                                                  const StrategyFactory& strategy, const EvalOptions& opts);

// Positives: proof clauses that were selected; negatives: selected clauses
// outside the proof. Only solved problems contribute.
std::vector<Example> harvest(const std::vector<CorpusProblem>& corpus, const std::vector<ProblemResult>& results,
                             int loop_index);

std::string results_csv(const std::vector<ProblemResult>& results, bool record_time);

struct LoopRow {
  int loop = -1;  // -1 is the E0 baseline
  std::string mode = "e0";
  int depth = 0;
  int trees = 0;
  int bits = 0;
  std::size_t solved = 0;
  std::size_t cumulative = 0;
  std::size_t pos = 0;
  std::size_t neg = 0;
  std::size_t boost = 0;
  double seconds = 0;
  std::vector<std::string> newly_solved;  // not part of the CSV

  friend bool operator==(const LoopRow&, const LoopRow&) = default;
};

struct LoopReport {
  std::string label;
  std::vector<LoopRow> rows;

  friend bool operator==(const LoopReport&, const LoopReport&) = default;
};

struct RunConfig {
  std::filesystem::path corpus;
  GuidanceMode mode = GuidanceMode::solo;
  Limits limits = Limits::selections(Limits::default_selections);
  std::vector<ScheduleEntry> schedule;
  std::vector<std::filesystem::path> boost_files;
  int boost_cutoff = 4;
  std::uint64_t seed = 0;
  int workers = 0;
  int train_threads = 0;
  double eta = 0.2;
  std::optional<std::filesystem::path> out_dir;
  bool record_time = false;

  // Throws std::invalid_argument.
  void validate() const;
};

class LoopError : public std::runtime_error {
 public:
  LoopError(int loop, const std::string& what, LoopReport partial)
      : std::runtime_error("loop " + std::to_string(loop) + ": " + what), loop_(loop), partial_(std::move(partial)) {}
  int loop() const noexcept { return loop_; }
  const LoopReport& partial() const noexcept { return partial_; }

 private:
  int loop_;
  LoopReport partial_;
};

// Baseline E0 run, then one train/evaluate round per schedule entry.
// Writes baseline/, loop-<k>/{model.txt,data.txt,results.csv} and
// report.csv under out_dir when set.
LoopReport run_loop(const RunConfig& config);

}  // namespace bare
