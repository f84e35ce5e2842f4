#include "bareprover/training_data.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "bareprover/tptp.hpp"

namespace bare {

namespace {

std::string dedup_key(const Example& e) {
  if (!e.problem.empty() && !e.clause_text.empty()) return "p:" + e.problem + "\n" + e.clause_text;
  return "v:" + (e.vector ? std::to_string(e.vector->bits) + " " + format_feature_row(0, *e.vector) : "");
}

}  // namespace

void TrainingStore::add(Example e) {
  std::string key = dedup_key(e);
  auto it = index_.find(key);
  if (it == index_.end()) {
    index_.emplace(std::move(key), examples_.size());
    examples_.push_back(std::move(e));
    return;
  }
  Example& kept = examples_[it->second];
  kept.label = std::max(kept.label, e.label);
  kept.first_loop = std::min(kept.first_loop, e.first_loop);
}

void TrainingStore::add(std::vector<Example> es) {
  for (Example& e : es) add(std::move(e));
}

FeatureVector example_vector(const Example& e, const FeatureConfig& cfg) {
  if (e.vector && e.vector->bits == cfg.bits) return *e.vector;
  if (e.clause && e.signature && e.source_problem) {
    FeatureVector conj = featurize_conjecture(*e.source_problem, cfg);
    return featurize(*e.clause, *e.signature, conj, cfg);
  }
  throw ConfigMismatch("example from '" + e.source + "' has " +
                       (e.vector ? std::to_string(e.vector->bits) : std::string("no")) +
                       "-bit features and cannot be re-featurized to " + std::to_string(cfg.bits) +
                       " bits");
}

std::string format_feature_row(int label, const FeatureVector& fv) {
  std::string out = std::to_string(label);
  for (const auto& [slot, count] : fv.entries) {
    out += ' ';
    out += std::to_string(slot);
    out += ':';
    out += std::to_string(count);
  }
  return out;
}

std::string write_examples(const std::vector<Example>& examples, const FeatureConfig& cfg) {
  std::string out = "# bareprover training data\n# bits " + std::to_string(cfg.bits) + "\n";
  for (const Example& e : examples) {
    out += "# problem=" + e.problem + " loop=" + std::to_string(e.first_loop) + " source=" + e.source;
    if (!e.clause_text.empty()) out += " clause=" + e.clause_text;
    out += '\n';
    out += format_feature_row(e.label, example_vector(e, cfg));
    out += '\n';
  }
  return out;
}

namespace {

template <typename T>
bool parse_number(std::string_view s, T& v) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

struct RowProvenance {
  std::string problem;
  std::string source = "self";
  std::string clause_text;
  int loop = 0;
};

RowProvenance parse_provenance(std::string_view body) {
  RowProvenance p;
  // clause= runs to the end of the line and may contain spaces.
  std::size_t clause_at = body.find("clause=");
  std::string_view head = body.substr(0, clause_at);
  if (clause_at != std::string_view::npos) p.clause_text = std::string(body.substr(clause_at + 7));
  std::istringstream ss{std::string(head)};
  std::string field;
  while (ss >> field) {
    auto eq = field.find('=');
    if (eq == std::string::npos) continue;
    std::string key = field.substr(0, eq);
    std::string value = field.substr(eq + 1);
    if (key == "problem") p.problem = value;
    if (key == "source") p.source = value;
    if (key == "loop") parse_number(std::string_view(value), p.loop);
  }
  return p;
}

}  // namespace

std::vector<Example> read_examples(std::string_view text,
                                   const std::map<std::string, std::shared_ptr<const Problem>>& problems) {
  std::vector<Example> out;
  std::optional<int> bits;
  std::optional<RowProvenance> pending;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string_view body = line.substr(1);
      while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      if (body.starts_with("bits ")) {
        int b = 0;
        if (!parse_number(body.substr(5), b) || b < FeatureConfig::min_bits || b > FeatureConfig::max_bits) {
          throw DataFormatError("bad bits header", line_no);
        }
        if (bits && *bits != b) throw ConfigMismatch("data file mixes feature bit widths");
        bits = b;
      } else if (body.starts_with("problem=")) {
        pending = parse_provenance(body);
      }
      continue;
    }
    if (!bits) throw DataFormatError("data row before '# bits' header", line_no);
    const FeatureConfig cfg = FeatureConfig::with_bits(*bits);

    Example e;
    FeatureVector fv;
    fv.bits = *bits;
    std::istringstream ss{std::string(line)};
    std::string tok;
    ss >> tok;
    if (tok != "0" && tok != "1") throw DataFormatError("label must be 0 or 1", line_no);
    e.label = tok == "1" ? 1 : 0;
    while (ss >> tok) {
      auto colon = tok.find(':');
      std::uint32_t slot = 0;
      std::uint32_t count = 0;
      if (colon == std::string::npos || !parse_number(std::string_view(tok).substr(0, colon), slot) ||
          !parse_number(std::string_view(tok).substr(colon + 1), count)) {
        throw DataFormatError("bad entry '" + tok + "'", line_no);
      }
      if (count == 0) throw DataFormatError("zero count", line_no);
      if (slot >= cfg.dimension()) throw DataFormatError("slot out of range", line_no);
      if (!fv.entries.empty() && fv.entries.back().first >= slot) {
        throw DataFormatError("slots must be strictly ascending", line_no);
      }
      fv.entries.emplace_back(slot, count);
    }
    e.vector = std::move(fv);
    if (pending) {
      e.problem = pending->problem;
      e.source = pending->source;
      e.first_loop = pending->loop;
      e.clause_text = pending->clause_text;
      auto it = problems.find(e.problem);
      if (it != problems.end() && !e.clause_text.empty()) {
        auto sig = std::make_shared<Signature>(*it->second->signature);
        try {
          e.clause = parse_clause(e.clause_text, *sig);
          e.signature = std::move(sig);
          e.source_problem = it->second;
        } catch (const ParseError& err) {
          throw DataFormatError(std::string("bad clause in provenance: ") + err.what(), line_no - 1);
        }
      }
      pending.reset();
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Example> read_examples_file(const std::filesystem::path& path,
                                        const std::map<std::string, std::shared_ptr<const Problem>>& problems) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_examples(ss.str(), problems);
}

MergedData merge(const TrainingStore& store, const std::vector<Example>& boost, int loop_index,
                 int cutoff, const FeatureConfig& cfg) {
  std::map<const Problem*, FeatureVector> conj_cache;
  auto vector_of = [&](const Example& e) {
    if ((e.vector && e.vector->bits == cfg.bits) || !e.clause || !e.signature || !e.source_problem) {
      return example_vector(e, cfg);
    }
    auto it = conj_cache.find(e.source_problem.get());
    if (it == conj_cache.end()) {
      it = conj_cache.emplace(e.source_problem.get(), featurize_conjecture(*e.source_problem, cfg)).first;
    }
    return featurize(*e.clause, *e.signature, it->second, cfg);
  };

  struct Row {
    int label;
    bool from_self;
    std::string tag;
  };
  std::map<FeatureVector, Row> rows;
  auto put = [&](const Example& e, bool from_self) {
    std::string tag = e.problem + "@" + std::to_string(e.first_loop) + ":" + e.source;
    auto [it, inserted] = rows.try_emplace(vector_of(e), Row{e.label, from_self, tag});
    if (inserted) return;
    Row& kept = it->second;
    if (from_self && !kept.from_self) {
      kept.from_self = true;
      kept.tag = tag;
    }
    kept.label = std::max(kept.label, e.label);
  };
  std::map<FeatureVector, int> self_labels;
  for (const Example& e : store.examples()) {
    FeatureVector fv = vector_of(e);
    int& l = self_labels[fv];
    l = std::max(l, e.label);
    put(e, true);
  }
  if (loop_index < cutoff) {
    for (const Example& e : boost) put(e, !e.is_boost());
  }
  MergedData out;
  out.dataset.bits = cfg.bits;
  for (const auto& [fv, label] : self_labels) (label == 1 ? out.positives : out.negatives) += 1;
  for (auto& [fv, row] : rows) {
    if (!row.from_self) ++out.boost;
    out.dataset.add(fv, row.label, row.tag);
  }
  return out;
}

}  // namespace bare
