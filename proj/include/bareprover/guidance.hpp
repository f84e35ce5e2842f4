#pragma once

// Clause selection strategies: the bare E0 baseline and the learned
// solo/coop variants built on a boosted-tree model.

#include <memory>
#include <string_view>

#include "bareprover/features.hpp"
#include "bareprover/gbdt.hpp"
#include "bareprover/saturation.hpp"

namespace bare {

enum class GuidanceMode : std::uint8_t { baseline, solo, coop };

std::string_view to_string(GuidanceMode m);
std::optional<GuidanceMode> guidance_mode_from_string(std::string_view s);

// Weights the model assigns to clauses it classifies as useful / useless.
struct ModelWeights {
  double positive = 1;
  double negative = 10;
};

// 5 x clause weight (1,1,1) + 1 x FIFO, preferring initial clauses.
Strategy e0_strategy();

// Everything a model evaluation function needs for one problem. The
// signature and model are shared read-only.
struct ModelContext {
  std::shared_ptr<const GbdtModel> model;
  std::shared_ptr<const Signature> signature;
  FeatureVector conjecture;
  FeatureConfig config;

  // Throws ConfigMismatch unless model, conjecture and config agree.
  void check() const;
};

ModelContext make_context(std::shared_ptr<const GbdtModel> model, const Problem& p);

ClauseEvaluation model_cef(const ModelContext& ctx, ModelWeights w = {});
Strategy solo_strategy(const ModelContext& ctx);
// Model at frequency 6 against E0's pair at 5 and 1: half of every 12 picks.
Strategy coop_strategy(const ModelContext& ctx);

// Builds the strategy for `mode`; the context is ignored for baseline.
Strategy make_strategy(GuidanceMode mode, const ModelContext* ctx);

}  // namespace bare
