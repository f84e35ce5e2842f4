#include "bareprover/features.hpp"

#include <algorithm>
#include <map>

namespace bare {

FeatureConfig FeatureConfig::with_bits(int bits) {
  if (bits < min_bits || bits > max_bits) {
    throw std::invalid_argument("feature bits must be in [" + std::to_string(min_bits) + ", " +
                                std::to_string(max_bits) + "], got " + std::to_string(bits));
  }
  FeatureConfig cfg;
  cfg.bits = bits;
  return cfg;
}

std::uint32_t FeatureVector::value(std::uint32_t slot) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), slot,
                             [](const auto& e, std::uint32_t s) { return e.first < s; });
  return it != entries.end() && it->first == slot ? it->second : 0;
}

std::uint64_t FeatureVector::total() const {
  std::uint64_t t = 0;
  for (const auto& e : entries) t += e.second;
  return t;
}

namespace {

bool is_skolem(std::string_view name) { return name.starts_with("esk") || name.starts_with("sk"); }

TokenTree token_tree(const Term& t, const Signature& sig) {
  if (t.is_variable()) return {"*VAR", {}};
  const std::string& name = sig[t.head()].name;
  TokenTree n{is_skolem(name) ? "*SKO" : name, {}};
  n.children.reserve(t.args().size());
  for (const Term& a : t.args()) n.children.push_back(token_tree(a, sig));
  return n;
}

void walks_from(const TokenTree& n, std::string prefix, int remaining, std::vector<std::string>& out) {
  prefix += n.token;
  out.push_back(prefix);
  if (remaining <= 1) return;
  for (const TokenTree& child : n.children) {
    walks_from(child, prefix + std::string(walk_separator), remaining - 1, out);
  }
}

std::uint32_t max_depth(const Clause& c) {
  std::uint32_t d = 0;
  for (const Literal& l : c.literals) {
    for (const Term& a : l.atom.args()) d = std::max(d, a.depth());
  }
  return d;
}

}  // namespace

std::vector<TokenTree> normalize_symbols(const Clause& c, const Signature& sig) {
  std::vector<TokenTree> out;
  out.reserve(c.literals.size());
  for (const Literal& l : c.literals) {
    TokenTree root = token_tree(l.atom, sig);
    root.token = std::string(l.positive ? "+" : "-") + (l.is_equation() ? "eq" : root.token);
    out.push_back(std::move(root));
  }
  return out;
}

std::string to_string(const TokenTree& t) {
  std::string s = t.token;
  if (t.children.empty()) return s;
  s += '(';
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i > 0) s += ", ";
    s += to_string(t.children[i]);
  }
  s += ')';
  return s;
}

std::vector<std::string> vertical_walks(const std::vector<TokenTree>& literals) {
  std::vector<std::string> out;
  for (const TokenTree& l : literals) walks_from(l, {}, FeatureConfig::walk_length, out);
  return out;
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint32_t hash_bucket(std::string_view s, int bits) {
  if (bits < FeatureConfig::min_bits || bits > FeatureConfig::max_bits) {
    throw std::invalid_argument("hash_bucket: bits out of range");
  }
  return static_cast<std::uint32_t>(fnv1a64(s) & ((std::uint64_t{1} << bits) - 1));
}

FeatureVector clause_block(const Clause& c, const Signature& sig, const FeatureConfig& cfg) {
  std::map<std::uint32_t, std::uint32_t> counts;
  for (const std::string& w : vertical_walks(normalize_symbols(c, sig))) {
    ++counts[hash_bucket(w, cfg.bits)];
  }
  FeatureVector fv;
  fv.bits = cfg.bits;
  fv.entries.assign(counts.begin(), counts.end());
  return fv;
}

FeatureVector featurize(const Clause& c, const Signature& sig, const FeatureVector& conj,
                        const FeatureConfig& cfg) {
  if (conj.bits != cfg.bits) {
    throw ConfigMismatch("conjecture features use " + std::to_string(conj.bits) +
                         " bits, config uses " + std::to_string(cfg.bits));
  }
  FeatureVector fv = clause_block(c, sig, cfg);
  const std::uint32_t block = cfg.block_size();
  for (const auto& [slot, count] : conj.entries) {
    if (slot >= block) throw ConfigMismatch("conjecture feature slot outside the clause block");
    fv.entries.emplace_back(block + slot, count);
  }
  const std::uint32_t stats = cfg.statistics_offset();
  const auto literals = static_cast<std::uint32_t>(c.literals.size());
  const auto weight = static_cast<std::uint32_t>(clause_weight(c, 1, 1, 1));
  const std::uint32_t depth = max_depth(c);
  if (literals > 0) fv.entries.emplace_back(stats, literals);
  if (weight > 0) fv.entries.emplace_back(stats + 1, weight);
  if (depth > 0) fv.entries.emplace_back(stats + 2, depth);
  return fv;
}

FeatureVector featurize_conjecture(const Problem& p, const FeatureConfig& cfg) {
  std::map<std::uint32_t, std::uint32_t> counts;
  for (const Clause& c : p.clauses) {
    if (c.role != Role::negated_conjecture) continue;
    for (const auto& [slot, count] : clause_block(c, *p.signature, cfg).entries) counts[slot] += count;
  }
  FeatureVector fv;
  fv.bits = cfg.bits;
  fv.entries.assign(counts.begin(), counts.end());
  return fv;
}

}  // namespace bare
