#pragma once

// Training examples harvested from proof runs, their on-disk line format
// and the merge into a deduplicated Dataset.
//
// Line format:
//   # bits <B>
//   # problem=<name> loop=<k> source=<tag> clause=<tptp disjunction>
//   <label> <slot>:<count> <slot>:<count> ...
// Slots are strictly ascending; a provenance comment applies to the next
// data row. Rows that carry problem and clause can be re-featurized under
// other bit widths.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bareprover/features.hpp"
#include "bareprover/gbdt.hpp"
#include "bareprover/logic.hpp"

namespace bare {

struct Example {
  std::string problem;  // corpus problem name, may be empty
  std::string clause_text;
  // Clause and the signature it was read in; absent for vector-only rows.
  std::optional<Clause> clause;
  std::shared_ptr<const Signature> signature;
  std::shared_ptr<const Problem> source_problem;  // for conjecture features
  std::optional<FeatureVector> vector;            // cached featurization
  int label = 0;
  std::string source = "self";
  int first_loop = 0;

  bool is_boost() const { return source.starts_with("boost:"); }
};

// Deduplicated example collection; a clause seen with both labels is kept
// as positive, at its earliest loop.
class TrainingStore {
 public:
  void add(Example e);
  void add(std::vector<Example> es);
  const std::vector<Example>& examples() const noexcept { return examples_; }
  std::size_t size() const noexcept { return examples_.size(); }

 private:
  std::vector<Example> examples_;
  std::map<std::string, std::size_t> index_;
};

class DataFormatError : public std::runtime_error {
 public:
  DataFormatError(const std::string& what, int line)
      : std::runtime_error("data line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Featurizes `e` under `cfg`, reusing the cached vector when the bits
// match. Throws ConfigMismatch if a vector-only row has other bits.
FeatureVector example_vector(const Example& e, const FeatureConfig& cfg);

std::string format_feature_row(int label, const FeatureVector& fv);

// Writes examples with provenance, featurized under `cfg`.
std::string write_examples(const std::vector<Example>& examples, const FeatureConfig& cfg);

// Reads a data file. `problems` resolves provenance problem names so rows
// can be re-featurized; unknown names leave vector-only rows.
std::vector<Example> read_examples(std::string_view text,
                                   const std::map<std::string, std::shared_ptr<const Problem>>& problems = {});
std::vector<Example> read_examples_file(const std::filesystem::path& path,
                                        const std::map<std::string, std::shared_ptr<const Problem>>& problems = {});

struct MergedData {
  Dataset dataset;
  // Distinct self-harvested vectors by label; boost counts the rows that
  // only the boost data contributes.
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t boost = 0;
};

// Builds the training set for loop `loop_index`: all store examples plus
// `boost` examples while loop_index < cutoff, deduplicated by feature
// vector with positive labels winning. Rows are ordered by vector.
MergedData merge(const TrainingStore& store, const std::vector<Example>& boost, int loop_index,
                 int cutoff, const FeatureConfig& cfg);

}  // namespace bare
