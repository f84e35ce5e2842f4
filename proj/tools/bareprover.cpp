// bareprover command line: prove, featurize, train, loop, report.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "bareprover/gbdt.hpp"
#include "bareprover/guidance.hpp"
#include "bareprover/harness.hpp"
#include "bareprover/report.hpp"
#include "bareprover/schedule.hpp"
#include "bareprover/tptp.hpp"
#include "bareprover/training_data.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_internal = 2;

// Errors caused by the invocation rather than by the program.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

bare::Limits make_limits(std::optional<std::uint64_t> selections, std::optional<double> wall) {
  if (wall) return bare::Limits::wall(*wall);
  return bare::Limits::selections(selections.value_or(bare::Limits::default_selections));
}

struct ProveArgs {
  std::string file;
  std::string strategy = "e0";
  std::string model;
  bool solo = false;
  bool coop = false;
  std::optional<std::uint64_t> max_selections;
  std::optional<double> wall_secs;
  bool proof = false;
  bool stats = false;
};

int run_prove(const ProveArgs& a) {
  if (!fs::is_regular_file(a.file)) throw UsageError("cannot open " + a.file);
  bare::Problem problem;
  try {
    problem = bare::parse_problem_file(a.file);
  } catch (const bare::ParseError& e) {
    throw UsageError(a.file + ": " + e.what());
  }
  bare::Strategy strategy;
  std::optional<bare::ModelContext> ctx;
  if (!a.model.empty()) {
    auto model = std::make_shared<const bare::GbdtModel>(bare::deserialize(read_file(a.model)));
    ctx = bare::make_context(model, problem);
    strategy = bare::make_strategy(a.coop ? bare::GuidanceMode::coop : bare::GuidanceMode::solo, &*ctx);
  } else {
    if (a.solo || a.coop) throw UsageError("--solo/--coop need --model");
    if (a.strategy != "e0") throw UsageError("unknown strategy '" + a.strategy + "'");
    strategy = bare::e0_strategy();
  }
  auto result = bare::saturate(problem, strategy, make_limits(a.max_selections, a.wall_secs));
  std::cout << bare::szs_report(*problem.signature, result, a.proof);
  if (a.stats) {
    const auto& st = result.stats;
    std::cout << "# selections " << st.selections << "\n# generated " << st.generated << "\n# kept " << st.kept
              << "\n# tautologies " << st.tautologies << "\n# subsumed " << st.subsumed << "\n# duplicates "
              << st.duplicates << "\n";
  }
  return exit_ok;
}

struct FeaturizeArgs {
  std::string corpus;
  int bits = bare::default_feature_bits;
  std::string out;
  std::optional<std::uint64_t> max_selections;
  std::uint64_t seed = 0;
};

int run_featurize(const FeaturizeArgs& a) {
  const auto cfg = bare::FeatureConfig::with_bits(a.bits);
  const auto corpus = bare::load_corpus(a.corpus);
  bare::EvalOptions opts{make_limits(a.max_selections, std::nullopt), a.seed, 0};
  auto results = bare::evaluate_corpus(corpus, [](const bare::CorpusProblem&) { return bare::e0_strategy(); }, opts);
  bare::TrainingStore store;
  store.add(bare::harvest(corpus, results, -1));
  write_file(a.out, bare::write_examples(store.examples(), cfg));
  std::size_t solved = 0;
  for (const auto& r : results) solved += r.solved() ? 1 : 0;
  std::cerr << "solved " << solved << "/" << corpus.size() << ", " << store.size() << " examples\n";
  return exit_ok;
}

struct TrainArgs {
  std::vector<std::string> data;
  std::string corpus;
  int depth = 0;
  int trees = 0;
  double eta = 0.2;
  std::optional<int> bits;
  std::string out;
};

int run_train(const TrainArgs& a) {
  if (a.data.empty()) throw UsageError("train needs at least one --data file");
  std::map<std::string, std::shared_ptr<const bare::Problem>> problems;
  if (!a.corpus.empty()) problems = bare::problem_index(bare::load_corpus(a.corpus));
  bare::TrainingStore store;
  std::optional<int> file_bits;
  for (const std::string& f : a.data) {
    auto rows = bare::read_examples(read_file(f), problems);
    if (!rows.empty() && rows.front().vector && !file_bits) file_bits = rows.front().vector->bits;
    store.add(std::move(rows));
  }
  const auto cfg = bare::FeatureConfig::with_bits(a.bits.value_or(file_bits.value_or(bare::default_feature_bits)));
  auto merged = bare::merge(store, {}, 0, 0, cfg);
  bare::TrainParams params{a.depth, a.trees, a.eta};
  params.validate();
  auto model = bare::train(merged.dataset, params);
  write_file(a.out, bare::serialize(model));
  std::cerr << "trained on " << merged.positives << " positive, " << merged.negatives << " negative rows\n";
  return exit_ok;
}

struct LoopArgs {
  std::string corpus;
  std::string schedule;
  int loops = 0;
  std::string mode = "solo";
  std::vector<std::string> boost;
  int boost_cutoff = 4;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::optional<std::uint64_t> max_selections;
  std::optional<double> wall_secs;
  int workers = 0;
  double eta = 0.2;
  bool record_time = false;
};

int run_loop_cmd(const LoopArgs& a) {
  bare::RunConfig cfg;
  cfg.corpus = a.corpus;
  auto mode = bare::guidance_mode_from_string(a.mode);
  if (!mode || *mode == bare::GuidanceMode::baseline) throw UsageError("--mode must be solo or coop");
  cfg.mode = *mode;
  cfg.limits = make_limits(a.max_selections, a.wall_secs);
  try {
    cfg.schedule = bare::builtin_schedule(a.schedule, a.loops);
  } catch (const bare::ScheduleError& e) {
    throw UsageError(e.what());
  }
  for (const auto& f : a.boost) cfg.boost_files.emplace_back(f);
  cfg.boost_cutoff = a.boost_cutoff;
  cfg.seed = a.seed;
  cfg.workers = a.workers;
  cfg.eta = a.eta;
  cfg.record_time = a.record_time;
  cfg.out_dir = fs::path(a.out_dir);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  auto report = bare::run_loop(cfg);
  std::cout << bare::report_csv(report);
  return exit_ok;
}

struct ReportArgs {
  std::string in;
  bool csv = false;
  bool svg = false;
  std::string out;
};

int run_report(const ReportArgs& a) {
  if (a.csv == a.svg) throw UsageError("give exactly one of --csv, --svg");
  const fs::path in(a.in);
  std::vector<bare::LoopReport> reports;
  if (fs::is_regular_file(in / "report.csv")) {
    reports.push_back(bare::parse_report_csv(read_file(in / "report.csv"), in.filename().string()));
  } else if (fs::is_directory(in)) {
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(in)) {
      if (e.is_directory() && fs::is_regular_file(e.path() / "report.csv")) dirs.push_back(e.path());
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& d : dirs) reports.push_back(bare::parse_report_csv(read_file(d / "report.csv"), d.filename().string()));
  }
  if (reports.empty()) throw UsageError("no report.csv under " + a.in);
  std::string text;
  if (a.svg) {
    text = bare::report_svg(reports);
  } else {
    for (const auto& r : reports) {
      if (reports.size() > 1) text += "# run " + r.label + "\n";
      text += bare::report_csv(r);
    }
  }
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_file(a.out, text);
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bareprover: saturation prover with learned clause selection"};
  app.require_subcommand(1);

  ProveArgs prove;
  auto* p = app.add_subcommand("prove", "Run the prover on one TPTP CNF problem");
  p->add_option("FILE", prove.file, "Problem file")->required();
  p->add_option("--strategy", prove.strategy, "Baseline strategy (e0)");
  auto* model_opt = p->add_option("--model", prove.model, "Model file for learned guidance");
  auto* solo_flag = p->add_flag("--solo", prove.solo, "Model queue only");
  auto* coop_flag = p->add_flag("--coop", prove.coop, "Model queue alongside E0 queues");
  solo_flag->excludes(coop_flag);
  model_opt->excludes(p->get_option("--strategy"));
  auto* sel = p->add_option("--max-selections", prove.max_selections, "Selection budget");
  p->add_option("--wall-secs", prove.wall_secs, "Wall-clock budget")->excludes(sel);
  p->add_flag("--proof", prove.proof, "Print the proof");
  p->add_flag("--stats", prove.stats, "Print search statistics");

  FeaturizeArgs feat;
  auto* f = app.add_subcommand("featurize", "Run E0 on a corpus and write training data");
  f->add_option("--corpus", feat.corpus, "Corpus directory")->required();
  f->add_option("--bits", feat.bits, "Feature hashing bits")->required();
  f->add_option("--out", feat.out, "Output data file")->required();
  f->add_option("--max-selections", feat.max_selections, "Selection budget");
  f->add_option("--seed", feat.seed, "Clause order seed");

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train a boosted-tree model on data files");
  t->add_option("--data", tr.data, "Data files");
  t->add_option("--corpus", tr.corpus, "Corpus for re-featurizing rows");
  t->add_option("--depth", tr.depth, "Tree depth D")->required();
  t->add_option("--trees", tr.trees, "Tree count T")->required();
  t->add_option("--eta", tr.eta, "Learning rate");
  t->add_option("--bits", tr.bits, "Feature bits (default: from the data)");
  t->add_option("--out", tr.out, "Model file")->required();

  LoopArgs lp;
  auto* l = app.add_subcommand("loop", "Prove/learn loop over a corpus");
  l->add_option("--corpus", lp.corpus, "Corpus directory")->required();
  l->add_option("--schedule", lp.schedule, "Schedule name")->required();
  l->add_option("--loops", lp.loops, "Number of loops")->required();
  l->add_option("--mode", lp.mode, "solo or coop");
  l->add_option("--boost", lp.boost, "Boost data files");
  l->add_option("--boost-cutoff", lp.boost_cutoff, "Boost data is used while loop < cutoff");
  l->add_option("--seed", lp.seed, "Clause order seed");
  l->add_option("--out-dir", lp.out_dir, "Artifact directory")->required();
  auto* lsel = l->add_option("--max-selections", lp.max_selections, "Selection budget");
  l->add_option("--wall-secs", lp.wall_secs, "Wall-clock budget")->excludes(lsel);
  l->add_option("--workers", lp.workers, "Parallel problem workers");
  l->add_option("--eta", lp.eta, "Learning rate");
  l->add_flag("--record-time", lp.record_time, "Write wall times into the CSV");

  ReportArgs rp;
  auto* r = app.add_subcommand("report", "Render loop reports");
  r->add_option("--in", rp.in, "Run directory or directory of runs")->required();
  r->add_flag("--csv", rp.csv, "CSV output");
  r->add_flag("--svg", rp.svg, "SVG output");
  r->add_option("--out", rp.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return exit_usage;
  }

  try {
    if (*p) return run_prove(prove);
    if (*f) return run_featurize(feat);
    if (*t) return run_train(tr);
    if (*l) return run_loop_cmd(lp);
    if (*r) return run_report(rp);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return exit_internal;
  }
  return exit_usage;
}
