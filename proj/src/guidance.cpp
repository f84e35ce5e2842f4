#include "bareprover/guidance.hpp"

namespace bare {

std::string_view to_string(GuidanceMode m) {
  switch (m) {
    case GuidanceMode::baseline: return "e0";
    case GuidanceMode::solo: return "solo";
    case GuidanceMode::coop: return "coop";
  }
  return "e0";
}

std::optional<GuidanceMode> guidance_mode_from_string(std::string_view s) {
  if (s == "e0" || s == "baseline") return GuidanceMode::baseline;
  if (s == "solo") return GuidanceMode::solo;
  if (s == "coop") return GuidanceMode::coop;
  return std::nullopt;
}

namespace {

EvalQueue weight_queue(int frequency) {
  return {"clauseweight", [](const Clause& c) { return clause_weight(c, 1, 1, 1); }, frequency};
}

EvalQueue fifo_queue(int frequency) {
  return {"fifo", [](const Clause& c) { return static_cast<double>(c.age); }, frequency};
}

}  // namespace

Strategy e0_strategy() {
  Strategy s;
  s.queues.push_back(weight_queue(5));
  s.queues.push_back(fifo_queue(1));
  s.prefer_initial = true;
  return s;
}

void ModelContext::check() const {
  if (!model) throw ConfigMismatch("no model");
  if (!signature) throw ConfigMismatch("no signature");
  if (model->feature_bits != config.bits) {
    throw ConfigMismatch("model uses " + std::to_string(model->feature_bits) + " bits, config " +
                         std::to_string(config.bits));
  }
  if (conjecture.bits != config.bits) throw ConfigMismatch("conjecture features use other bits");
}

ModelContext make_context(std::shared_ptr<const GbdtModel> model, const Problem& p) {
  ModelContext ctx;
  ctx.config = FeatureConfig::with_bits(model->feature_bits);
  ctx.model = std::move(model);
  ctx.signature = p.signature;
  ctx.conjecture = featurize_conjecture(p, ctx.config);
  return ctx;
}

ClauseEvaluation model_cef(const ModelContext& ctx, ModelWeights w) {
  ctx.check();
  return [ctx, w](const Clause& c) {
    FeatureVector fv = featurize(c, *ctx.signature, ctx.conjecture, ctx.config);
    return predict_prob(*ctx.model, fv) >= 0.5 ? w.positive : w.negative;
  };
}

Strategy solo_strategy(const ModelContext& ctx) {
  Strategy s;
  s.queues.push_back({"model", model_cef(ctx), 1});
  s.prefer_initial = true;
  return s;
}

Strategy coop_strategy(const ModelContext& ctx) {
  Strategy s;
  s.queues.push_back({"model", model_cef(ctx), 6});
  s.queues.push_back(weight_queue(5));
  s.queues.push_back(fifo_queue(1));
  s.prefer_initial = true;
  return s;
}

Strategy make_strategy(GuidanceMode mode, const ModelContext* ctx) {
  if (mode == GuidanceMode::baseline) return e0_strategy();
  if (ctx == nullptr) throw std::invalid_argument("guided strategy needs a model");
  return mode == GuidanceMode::solo ? solo_strategy(*ctx) : coop_strategy(*ctx);
}

}  // namespace bare
