#pragma once

// Clause features: hashed top-down symbol walks plus a few raw statistics,
// laid out as [clause block | conjecture block | statistics].

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bareprover/logic.hpp"

namespace bare {

class ConfigMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FeatureConfig {
  static constexpr int min_bits = 5;
  static constexpr int max_bits = 16;
  static constexpr int walk_length = 3;
  static constexpr std::uint32_t statistic_slots = 3;

  int bits = 15;

  std::uint32_t block_size() const { return std::uint32_t{1} << bits; }
  std::uint32_t statistics_offset() const { return block_size() * 2; }
  std::uint32_t dimension() const { return statistics_offset() + statistic_slots; }

  // Throws std::invalid_argument outside [min_bits, max_bits].
  static FeatureConfig with_bits(int bits);
};

// Sparse slot -> count map, sorted by slot, counts >= 1.
struct FeatureVector {
  int bits = 15;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;

  std::uint32_t value(std::uint32_t slot) const;
  std::uint64_t total() const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
  friend auto operator<=>(const FeatureVector&, const FeatureVector&) = default;
};

// Walk separator, U+25B7.
inline constexpr std::string_view walk_separator = "\xE2\x96\xB7";

// A literal rendered into feature tokens: the head token carries the
// polarity prefix (+/-), variables become *VAR and Skolem symbols (names
// starting with "esk" or "sk") become *SKO. Equations use the head "eq".
struct TokenTree {
  std::string token;
  std::vector<TokenTree> children;
};

std::vector<TokenTree> normalize_symbols(const Clause& c, const Signature& sig);
std::string to_string(const TokenTree& t);

// Root-anchored paths of 1..walk_length nodes in every literal tree.
std::vector<std::string> vertical_walks(const std::vector<TokenTree>& literals);

std::uint64_t fnv1a64(std::string_view s);
std::uint32_t hash_bucket(std::string_view s, int bits);

// Walk counts of c in [0, 2^bits) without the other blocks.
FeatureVector clause_block(const Clause& c, const Signature& sig, const FeatureConfig& cfg);

FeatureVector featurize(const Clause& c, const Signature& sig, const FeatureVector& conj,
                        const FeatureConfig& cfg);
FeatureVector featurize_conjecture(const Problem& p, const FeatureConfig& cfg);

}  // namespace bare
