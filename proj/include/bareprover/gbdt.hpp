#pragma once

// Gradient boosted regression trees on the logistic loss, trained with
// exact greedy split search over sparse count features.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bareprover/features.hpp"

namespace bare {

struct TrainParams {
  int depth = 6;  // max edges on any root-leaf path
  int trees = 100;
  double eta = 0.2;
  double lambda = 1.0;
  int min_child_examples = 1;
  // Split search: 0 uses the OpenMP default team, 1 the serial kernel.
  int threads = 0;

  void validate() const;
};

struct Dataset {
  int bits = 15;
  std::vector<FeatureVector> rows;
  std::vector<int> labels;        // 0 or 1
  std::vector<std::string> tags;  // provenance, may be empty strings

  void add(FeatureVector fv, int label, std::string tag = {});
  std::size_t size() const noexcept { return rows.size(); }
  bool empty() const noexcept { return rows.empty(); }
  std::size_t positives() const;
};

struct TreeNode {
  bool leaf = true;
  std::uint32_t slot = 0;
  std::uint32_t threshold = 0;  // value <= threshold goes left
  double value = 0;             // leaves only, already scaled by eta
  std::int32_t left = -1;
  std::int32_t right = -1;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(const FeatureVector& fv) const;
  // Index of the leaf reached by fv.
  std::size_t leaf_index(const FeatureVector& fv) const;
  int depth() const;
};

struct GbdtModel {
  std::vector<Tree> trees;
  double eta = 0.2;
  double base_margin = 0;
  int feature_bits = 15;
};

class EmptyDataset : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

GbdtModel train(const Dataset& d, const TrainParams& p);

double predict_margin(const GbdtModel& m, const FeatureVector& fv);
double predict_prob(const GbdtModel& m, const FeatureVector& fv);
double sigmoid(double x);

// Mean logistic loss of m on d.
double log_loss(const GbdtModel& m, const Dataset& d);

class ModelFormatError : public std::runtime_error {
 public:
  ModelFormatError(const std::string& what, int line)
      : std::runtime_error("model line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

inline constexpr int model_format_version = 1;

std::string serialize(const GbdtModel& m);
GbdtModel deserialize(std::string_view text);

// ---------------------------------------------------------------------------
// Split search kernel, exposed for testing and benchmarking.

struct GradientPair {
  double g = 0;
  double h = 0;
};

// Feature column: (value, row) pairs of one slot, sorted by value then row.
struct Column {
  std::uint32_t slot = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;
};

std::vector<Column> build_columns(const Dataset& d);

struct NodeTotals {
  double g = 0;
  double h = 0;
  std::uint32_t n = 0;
};

struct SplitCandidate {
  bool valid = false;
  double gain = 0;
  std::uint32_t slot = 0;
  std::uint32_t threshold = 0;
};

struct SplitSearch {
  std::span<const Column> columns;
  std::span<const GradientPair> gradients;  // per row
  std::span<const std::int32_t> node_of;    // per row, -1 if inactive
  std::span<const NodeTotals> totals;       // per active node
  double lambda = 1.0;
  int min_child_examples = 1;
};

// Best split per active node. Ties go to the lower slot, then the lower
// threshold. Both variants return identical results.
std::vector<SplitCandidate> find_best_splits_serial(const SplitSearch& s);
std::vector<SplitCandidate> find_best_splits(const SplitSearch& s, int threads = 0);

double split_gain(const NodeTotals& left, const NodeTotals& right, double lambda);
double leaf_weight(double g, double h, double lambda);

}  // namespace bare
