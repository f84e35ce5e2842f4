#pragma once

// Generating inferences of unordered resolution + paramodulation. With the
// identity ordering nothing is orientable and no literal is selected, so
// every literal and both sides of every equation take part.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bareprover/logic.hpp"

namespace bare {

enum class Orientation : int { lhs_to_rhs = 0, rhs_to_lhs = 1 };

struct InferenceOutcome {
  Clause conclusion;  // normalized; id/age unassigned, provenance filled in
  Rule rule = Rule::input;
  std::vector<ClauseId> premises;
  std::vector<int> positions;
};

// Callers rename premises apart first (see rename_apart). The conclusion's
// provenance names the premises by their ids.
std::optional<InferenceOutcome> resolve(const Clause& c1, std::size_t i, const Clause& c2,
                                        std::size_t j);
std::optional<InferenceOutcome> factor(const Clause& c, std::size_t i, std::size_t j);
std::optional<InferenceOutcome> equality_resolution(const Clause& c, std::size_t i);

// `path` addresses a subterm of the atom of literal `lit_index` in `into`;
// for an equation literal, path[0] selects the side. Throws
// std::invalid_argument when the addressed subterm is a variable, the path
// is invalid, or `eq_index` is not a positive equation.
std::optional<InferenceOutcome> paramodulate(const Clause& from, std::size_t eq_index,
                                             Orientation orientation, const Clause& into,
                                             std::size_t lit_index, std::span<const int> path);

// All inferences between `given` and each clause of processed ∪ {given},
// plus factors and equality resolvents of `given`. Ordered by partner id,
// then literal indices, then subterm position in preorder.
std::vector<InferenceOutcome> generate(const Clause& given, std::span<const Clause* const> processed);

bool is_tautology(const Clause& c);

// Multiset subsumption: an injective literal map under one matcher.
bool subsumes(const Clause& general, const Clause& specific);

// Counts that a matcher can only increase: literals per polarity, per
// (polarity, head) bucket and non-variable symbol occurrences per bucket.
// If general subsumes specific then every count of general is <= the
// corresponding count of specific.
struct SubsumptionFeatures {
  static constexpr std::size_t head_buckets = 8;
  static constexpr std::size_t symbol_buckets = 16;
  static constexpr std::size_t head_base = 2;
  static constexpr std::size_t symbol_base = head_base + 2 * head_buckets;
  static constexpr std::size_t size = symbol_base + symbol_buckets;

  std::array<std::uint16_t, size> counts{};

  bool may_subsume(const SubsumptionFeatures& specific) const noexcept;
};

SubsumptionFeatures subsumption_features(const Clause& c);

// Re-runs the recorded rule of `c` on `parents` (in provenance order).
// Returns nullopt if the rule does not apply.
std::optional<Clause> replay(const Provenance& from, std::span<const Clause* const> parents);

}  // namespace bare
