#include "bareprover/gbdt.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include <omp.h>

namespace bare {

void TrainParams::validate() const {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (trees < 1) throw std::invalid_argument("trees must be >= 1");
  if (!(eta > 0 && eta <= 1)) throw std::invalid_argument("eta must be in (0, 1]");
  if (!(lambda >= 0)) throw std::invalid_argument("lambda must be >= 0");
  if (min_child_examples < 1) throw std::invalid_argument("min_child_examples must be >= 1");
}

void Dataset::add(FeatureVector fv, int label, std::string tag) {
  if (rows.empty() && labels.empty()) bits = fv.bits;
  if (fv.bits != bits) {
    throw ConfigMismatch("dataset uses " + std::to_string(bits) + " bits, row has " +
                         std::to_string(fv.bits));
  }
  if (label != 0 && label != 1) throw std::invalid_argument("label must be 0 or 1");
  rows.push_back(std::move(fv));
  labels.push_back(label);
  tags.push_back(std::move(tag));
}

std::size_t Dataset::positives() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

// ---------------------------------------------------------------------------
// Trees

std::size_t Tree::leaf_index(const FeatureVector& fv) const {
  std::size_t k = 0;
  while (!nodes[k].leaf) {
    const TreeNode& n = nodes[k];
    k = static_cast<std::size_t>(fv.value(n.slot) <= n.threshold ? n.left : n.right);
  }
  return k;
}

double Tree::predict(const FeatureVector& fv) const { return nodes[leaf_index(fv)].value; }

int Tree::depth() const {
  std::vector<std::pair<std::size_t, int>> todo{{0, 0}};
  int d = 0;
  while (!todo.empty()) {
    auto [k, depth] = todo.back();
    todo.pop_back();
    d = std::max(d, depth);
    if (!nodes[k].leaf) {
      todo.emplace_back(static_cast<std::size_t>(nodes[k].left), depth + 1);
      todo.emplace_back(static_cast<std::size_t>(nodes[k].right), depth + 1);
    }
  }
  return d;
}

// Clamped to the open interval (0, 1).
double sigmoid(double x) {
  constexpr double lo = std::numeric_limits<double>::denorm_min();
  constexpr double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2;
  if (x >= 0) return std::min(hi, 1.0 / (1.0 + std::exp(-x)));
  double e = std::exp(x);
  return std::max(lo, e / (1.0 + e));
}

namespace {

void check_bits(const GbdtModel& m, const FeatureVector& fv) {
  if (fv.bits != m.feature_bits) {
    throw ConfigMismatch("model expects " + std::to_string(m.feature_bits) +
                         "-bit features, got " + std::to_string(fv.bits));
  }
}

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

double predict_margin(const GbdtModel& m, const FeatureVector& fv) {
  check_bits(m, fv);
  double margin = m.base_margin;
  for (const Tree& t : m.trees) margin += t.predict(fv);
  return margin;
}

double predict_prob(const GbdtModel& m, const FeatureVector& fv) {
  return sigmoid(predict_margin(m, fv));
}

double log_loss(const GbdtModel& m, const Dataset& d) {
  if (d.empty()) return 0;
  double total = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double margin = predict_margin(m, d.rows[i]);
    total += softplus(margin) - d.labels[i] * margin;
  }
  return total / static_cast<double>(d.size());
}

// ---------------------------------------------------------------------------
// Split search

double leaf_weight(double g, double h, double lambda) {
  double denom = h + lambda;
  return denom > 0 ? -g / denom : 0.0;
}

double split_gain(const NodeTotals& left, const NodeTotals& right, double lambda) {
  auto score = [lambda](double g, double h) {
    double denom = h + lambda;
    return denom > 0 ? g * g / denom : 0.0;
  };
  return 0.5 * (score(left.g, left.h) + score(right.g, right.h) -
                score(left.g + right.g, left.h + right.h));
}

std::vector<Column> build_columns(const Dataset& d) {
  std::vector<std::uint32_t> slots;
  for (const FeatureVector& fv : d.rows) {
    for (const auto& e : fv.entries) slots.push_back(e.first);
  }
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  std::vector<Column> cols(slots.size());
  for (std::size_t k = 0; k < slots.size(); ++k) cols[k].slot = slots[k];
  for (std::uint32_t row = 0; row < d.rows.size(); ++row) {
    for (const auto& [slot, value] : d.rows[row].entries) {
      auto k = static_cast<std::size_t>(std::lower_bound(slots.begin(), slots.end(), slot) - slots.begin());
      cols[k].entries.emplace_back(value, row);
    }
  }
  for (Column& c : cols) std::sort(c.entries.begin(), c.entries.end());
  return cols;
}

namespace {

struct ScanScratch {
  std::vector<NodeTotals> present;
  std::vector<NodeTotals> left;
  std::vector<std::uint32_t> last;
  std::vector<std::int32_t> touched;

  explicit ScanScratch(std::size_t nodes) : present(nodes), left(nodes), last(nodes, 0) {}
};

void consider(SplitCandidate& best, const NodeTotals& total, const NodeTotals& left,
              std::uint32_t slot, std::uint32_t threshold, const SplitSearch& s) {
  const auto min_child = static_cast<std::uint32_t>(s.min_child_examples);
  if (left.n < min_child || total.n - left.n < min_child) return;
  NodeTotals right{total.g - left.g, total.h - left.h, total.n - left.n};
  double gain = split_gain(left, right, s.lambda);
  if (gain > 0 && (!best.valid || gain > best.gain)) best = {true, gain, slot, threshold};
}

void scan_column(const Column& col, const SplitSearch& s, ScanScratch& w,
                 std::vector<SplitCandidate>& best) {
  for (const auto& [value, row] : col.entries) {
    std::int32_t a = s.node_of[row];
    if (a < 0) continue;
    NodeTotals& p = w.present[static_cast<std::size_t>(a)];
    if (p.n == 0) w.touched.push_back(a);
    p.g += s.gradients[row].g;
    p.h += s.gradients[row].h;
    ++p.n;
  }
  for (std::int32_t a : w.touched) {
    const auto k = static_cast<std::size_t>(a);
    const NodeTotals& t = s.totals[k];
    w.left[k] = {t.g - w.present[k].g, t.h - w.present[k].h, t.n - w.present[k].n};
    w.last[k] = 0;
  }
  for (const auto& [value, row] : col.entries) {
    std::int32_t a = s.node_of[row];
    if (a < 0) continue;
    const auto k = static_cast<std::size_t>(a);
    NodeTotals& l = w.left[k];
    if (value != w.last[k]) {
      if (l.n > 0) consider(best[k], s.totals[k], l, col.slot, w.last[k], s);
      w.last[k] = value;
    }
    l.g += s.gradients[row].g;
    l.h += s.gradients[row].h;
    ++l.n;
  }
  for (std::int32_t a : w.touched) w.present[static_cast<std::size_t>(a)] = {};
  w.touched.clear();
}

void merge_best(std::vector<SplitCandidate>& into, const std::vector<SplitCandidate>& later) {
  for (std::size_t k = 0; k < into.size(); ++k) {
    if (later[k].valid && (!into[k].valid || later[k].gain > into[k].gain)) into[k] = later[k];
  }
}

}  // namespace

std::vector<SplitCandidate> find_best_splits_serial(const SplitSearch& s) {
  std::vector<SplitCandidate> best(s.totals.size());
  ScanScratch w(s.totals.size());
  for (const Column& col : s.columns) scan_column(col, s, w, best);
  return best;
}

std::vector<SplitCandidate> find_best_splits(const SplitSearch& s, int threads) {
  if (threads == 1 || s.columns.size() < 2) return find_best_splits_serial(s);
  const int team = threads > 0 ? threads : omp_get_max_threads();
  const std::size_t chunks = std::min<std::size_t>(s.columns.size(), static_cast<std::size_t>(team) * 4);
  std::vector<std::vector<SplitCandidate>> partial(chunks);
  const auto n = static_cast<std::int64_t>(chunks);

#pragma omp parallel for schedule(dynamic) num_threads(team)
  for (std::int64_t c = 0; c < n; ++c) {
    const std::size_t lo = s.columns.size() * static_cast<std::size_t>(c) / chunks;
    const std::size_t hi = s.columns.size() * static_cast<std::size_t>(c + 1) / chunks;
    std::vector<SplitCandidate> best(s.totals.size());
    ScanScratch w(s.totals.size());
    for (std::size_t k = lo; k < hi; ++k) scan_column(s.columns[k], s, w, best);
    partial[static_cast<std::size_t>(c)] = std::move(best);
  }

  std::vector<SplitCandidate> best(s.totals.size());
  for (const auto& p : partial) merge_best(best, p);
  return best;
}

// ---------------------------------------------------------------------------
// Training

namespace {

Tree grow_tree(const Dataset& d, const std::vector<Column>& columns,
               const std::vector<GradientPair>& grads, const TrainParams& p,
               std::vector<std::int32_t>& row_leaf) {
  const std::size_t n = d.size();
  Tree tree;
  tree.nodes.emplace_back();
  std::vector<std::int32_t> node_of(n, 0);
  std::vector<std::size_t> active{0};  // tree node index per active position
  std::vector<NodeTotals> totals(1);
  for (std::size_t r = 0; r < n; ++r) {
    totals[0].g += grads[r].g;
    totals[0].h += grads[r].h;
    ++totals[0].n;
  }

  for (int depth = 0; !active.empty(); ++depth) {
    std::vector<SplitCandidate> splits(active.size());
    if (depth < p.depth) {
      SplitSearch search{columns, grads, node_of, totals, p.lambda, p.min_child_examples};
      splits = find_best_splits(search, p.threads);
    }
    std::vector<std::size_t> next_active;
    // Per active position: position of the left child in next_active, or -1.
    std::vector<std::int32_t> child_pos(active.size(), -1);
    for (std::size_t a = 0; a < active.size(); ++a) {
      const std::size_t k = active[a];
      if (splits[a].valid) {
        auto left = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        TreeNode& node = tree.nodes[k];
        node.leaf = false;
        node.slot = splits[a].slot;
        node.threshold = splits[a].threshold;
        node.left = left;
        node.right = left + 1;
        child_pos[a] = static_cast<std::int32_t>(next_active.size());
        next_active.push_back(static_cast<std::size_t>(left));
        next_active.push_back(static_cast<std::size_t>(left + 1));
      } else {
        tree.nodes[k].value = p.eta * leaf_weight(totals[a].g, totals[a].h, p.lambda);
      }
    }
    std::vector<NodeTotals> next_totals(next_active.size());
    for (std::size_t r = 0; r < n; ++r) {
      std::int32_t a = node_of[r];
      if (a < 0) continue;
      const auto ai = static_cast<std::size_t>(a);
      if (child_pos[ai] < 0) {
        row_leaf[r] = static_cast<std::int32_t>(active[ai]);
        node_of[r] = -1;
        continue;
      }
      const TreeNode& node = tree.nodes[active[ai]];
      std::int32_t pos = child_pos[ai] + (d.rows[r].value(node.slot) <= node.threshold ? 0 : 1);
      node_of[r] = pos;
      NodeTotals& t = next_totals[static_cast<std::size_t>(pos)];
      t.g += grads[r].g;
      t.h += grads[r].h;
      ++t.n;
    }
    active = std::move(next_active);
    totals = std::move(next_totals);
  }
  return tree;
}

}  // namespace

GbdtModel train(const Dataset& d, const TrainParams& p) {
  p.validate();
  if (d.empty()) throw EmptyDataset("cannot train on an empty dataset");
  GbdtModel m;
  m.eta = p.eta;
  m.feature_bits = d.bits;
  const std::vector<Column> columns = build_columns(d);
  std::vector<double> margins(d.size(), m.base_margin);
  std::vector<GradientPair> grads(d.size());
  std::vector<std::int32_t> row_leaf(d.size(), 0);
  for (int t = 0; t < p.trees; ++t) {
    for (std::size_t r = 0; r < d.size(); ++r) {
      double prob = sigmoid(margins[r]);
      grads[r] = {prob - d.labels[r], prob * (1 - prob)};
    }
    Tree tree = grow_tree(d, columns, grads, p, row_leaf);
    for (std::size_t r = 0; r < d.size(); ++r) {
      margins[r] += tree.nodes[static_cast<std::size_t>(row_leaf[r])].value;
    }
    m.trees.push_back(std::move(tree));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void dump_node(const Tree& t, std::size_t k, std::string& out) {
  const TreeNode& n = t.nodes[k];
  if (n.leaf) {
    out += "leaf " + format_double(n.value) + "\n";
    return;
  }
  out += "split " + std::to_string(n.slot) + " " + std::to_string(n.threshold) + "\n";
  dump_node(t, static_cast<std::size_t>(n.left), out);
  dump_node(t, static_cast<std::size_t>(n.right), out);
}

class ModelReader {
 public:
  explicit ModelReader(std::string_view text) {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines_.push_back(line);
      start = end + 1;
    }
    while (!lines_.empty() && lines_.back().empty()) lines_.pop_back();
  }

  std::vector<std::string_view> next_fields() {
    if (pos_ >= lines_.size()) throw ModelFormatError("unexpected end of input", static_cast<int>(pos_) + 1);
    std::string_view line = lines_[pos_++];
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && line[i] == ' ') ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ') ++j;
      if (j > i) fields.push_back(line.substr(i, j - i));
      i = j;
    }
    return fields;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ModelFormatError(what, static_cast<int>(pos_));
  }

  std::vector<std::string_view> expect(std::string_view key, std::size_t count) {
    auto f = next_fields();
    if (f.empty() || f[0] != key || f.size() != count + 1) {
      fail("expected '" + std::string(key) + "' with " + std::to_string(count) + " value(s)");
    }
    return f;
  }

  template <typename T>
  T number(std::string_view s) {
    T v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) fail("bad number '" + std::string(s) + "'");
    return v;
  }

  bool at_end() const { return pos_ >= lines_.size(); }

 private:
  std::vector<std::string_view> lines_;
  std::size_t pos_ = 0;
};

std::int32_t read_node(ModelReader& in, Tree& t, int depth) {
  if (depth > 100000) in.fail("tree too deep");
  auto f = in.next_fields();
  auto k = static_cast<std::int32_t>(t.nodes.size());
  t.nodes.emplace_back();
  if (f.size() == 2 && f[0] == "leaf") {
    t.nodes[static_cast<std::size_t>(k)].value = in.number<double>(f[1]);
    return k;
  }
  if (f.size() != 3 || f[0] != "split") in.fail("expected 'leaf' or 'split'");
  TreeNode node;
  node.leaf = false;
  node.slot = in.number<std::uint32_t>(f[1]);
  node.threshold = in.number<std::uint32_t>(f[2]);
  node.left = read_node(in, t, depth + 1);
  node.right = read_node(in, t, depth + 1);
  t.nodes[static_cast<std::size_t>(k)] = node;
  return k;
}

}  // namespace

std::string serialize(const GbdtModel& m) {
  std::string out = "bareprover-gbdt " + std::to_string(model_format_version) + "\n";
  out += "feature_bits " + std::to_string(m.feature_bits) + "\n";
  out += "eta " + format_double(m.eta) + "\n";
  out += "base_margin " + format_double(m.base_margin) + "\n";
  out += "trees " + std::to_string(m.trees.size()) + "\n";
  for (std::size_t k = 0; k < m.trees.size(); ++k) {
    out += "tree " + std::to_string(k) + "\n";
    dump_node(m.trees[k], 0, out);
  }
  out += "end\n";
  return out;
}

GbdtModel deserialize(std::string_view text) {
  ModelReader in(text);
  auto header = in.expect("bareprover-gbdt", 1);
  int version = in.number<int>(header[1]);
  if (version != model_format_version) {
    in.fail("unsupported model version " + std::to_string(version));
  }
  GbdtModel m;
  m.feature_bits = in.number<int>(in.expect("feature_bits", 1)[1]);
  if (m.feature_bits < FeatureConfig::min_bits || m.feature_bits > FeatureConfig::max_bits) {
    in.fail("feature_bits out of range");
  }
  m.eta = in.number<double>(in.expect("eta", 1)[1]);
  m.base_margin = in.number<double>(in.expect("base_margin", 1)[1]);
  auto count = in.number<std::size_t>(in.expect("trees", 1)[1]);
  for (std::size_t k = 0; k < count; ++k) {
    auto f = in.expect("tree", 1);
    if (in.number<std::size_t>(f[1]) != k) in.fail("trees out of order");
    Tree t;
    read_node(in, t, 0);
    m.trees.push_back(std::move(t));
  }
  in.expect("end", 0);
  if (!in.at_end()) in.fail("trailing data after 'end'");
  return m;
}

}  // namespace bare
