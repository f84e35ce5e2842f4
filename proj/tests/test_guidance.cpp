#include <doctest.h>

#include <cmath>

#include "bareprover/guidance.hpp"
#include "bareprover/harness.hpp"
#include "bareprover/tptp.hpp"

using namespace bare;

namespace {

std::shared_ptr<const GbdtModel> constant_model(double margin, int bits = 8) {
  auto m = std::make_shared<GbdtModel>();
  m->feature_bits = bits;
  m->base_margin = margin;
  return m;
}

// Positive iff the clause has a positive `good` literal.
std::shared_ptr<const GbdtModel> good_model(int bits = 8, double scale = 1.0) {
  auto m = std::make_shared<GbdtModel>();
  m->feature_bits = bits;
  Tree t;
  t.nodes.push_back({false, hash_bucket("+good", bits), 0, 0, 1, 2});
  t.nodes.push_back({true, 0, 0, -1.5 * scale, -1, -1});
  t.nodes.push_back({true, 0, 0, 2.0 * scale, -1, -1});
  m->trees.push_back(t);
  return m;
}

double logit(double p) { return std::log(p / (1 - p)); }

Problem small_problem() {
  return parse_problem("cnf(a, axiom, good(a) | q(X)).\ncnf(g, negated_conjecture, ~q(b)).");
}

Clause derived(Signature& sig, std::string_view text) {
  Clause c = parse_clause(text, sig);
  c.role = Role::derived;
  return c;
}

}  // namespace

TEST_CASE("E0 strategy") {
  Strategy s = e0_strategy();
  REQUIRE(s.queues.size() == 2);
  CHECK(s.queues[0].frequency == 5);
  CHECK(s.queues[1].frequency == 1);
  CHECK(s.prefer_initial);
  Signature sig;
  Clause px = parse_clause("p(X)", sig);
  px.age = 17;
  CHECK(s.queues[0].cef(px) == 2);
  CHECK(s.queues[1].cef(px) == 17);
}

TEST_CASE("model cef threshold") {
  Problem p = small_problem();
  Clause c = p.clauses[0];
  for (auto [prob, weight] : std::vector<std::pair<double, double>>{{0.9, 1}, {0.2, 10}, {0.5, 1}, {0.49, 10}}) {
    ModelContext ctx = make_context(constant_model(prob == 0.5 ? 0.0 : logit(prob)), p);
    CHECK(model_cef(ctx)(c) == weight);
  }
  ModelContext ctx = make_context(constant_model(2.0), p);
  CHECK(model_cef(ctx, {3, 7})(c) == 3);
}

TEST_CASE("solo and coop structure") {
  Problem p = small_problem();
  ModelContext ctx = make_context(good_model(), p);
  Strategy solo = solo_strategy(ctx);
  REQUIRE(solo.queues.size() == 1);
  CHECK(solo.queues[0].frequency == 1);
  CHECK(solo.prefer_initial);
  Strategy coop = coop_strategy(ctx);
  REQUIRE(coop.queues.size() == 3);
  CHECK(coop.queues[0].frequency == 6);
  CHECK(coop.queues[1].frequency == 5);
  CHECK(coop.queues[2].frequency == 1);
  CHECK(make_strategy(GuidanceMode::baseline, nullptr).queues.size() == 2);
  CHECK_THROWS_AS(make_strategy(GuidanceMode::solo, nullptr), std::invalid_argument);
  CHECK(guidance_mode_from_string("coop") == GuidanceMode::coop);
  CHECK_FALSE(guidance_mode_from_string("duo"));
}

TEST_CASE("config mismatch is rejected") {
  Problem p = small_problem();
  ModelContext ctx = make_context(good_model(8), p);
  ctx.config = FeatureConfig::with_bits(9);
  CHECK_THROWS_AS(model_cef(ctx), ConfigMismatch);
  ModelContext no_model;
  CHECK_THROWS_AS(no_model.check(), ConfigMismatch);
}

TEST_CASE("solo pops positives first, each class by age") {
  Problem p = small_problem();
  ModelContext ctx = make_context(good_model(), p);
  Signature& sig = *p.signature;
  ProofState st(solo_strategy(ctx));
  ClauseId n1 = st.add(derived(sig, "q(a)"));
  ClauseId g1 = st.add(derived(sig, "good(b) | q(a) | q(b)"));
  ClauseId n2 = st.add(derived(sig, "q(b)"));
  ClauseId g2 = st.add(derived(sig, "good(a)"));
  std::vector<ClauseId> order;
  while (auto id = st.select_next()) {
    order.push_back(*id);
    st.move_to_processed(*id);
  }
  CHECK(order == std::vector<ClauseId>{g1, g2, n1, n2});
}

TEST_CASE("coop rounds are 6:5:1") {
  Problem p = small_problem();
  ModelContext ctx = make_context(good_model(), p);
  Signature& sig = *p.signature;
  ProofState st(coop_strategy(ctx));
  for (int i = 0; i < 60; ++i) {
    std::string t = "a";
    for (int k = 0; k < (i * 5) % 7; ++k) t = "f(" + t + ")";
    st.add(derived(sig, (i % 3 ? "q(" : "good(") + t + ")"));
  }
  for (int i = 0; i < 48; ++i) {
    auto id = st.select_next();
    REQUIRE(id);
    st.move_to_processed(*id);
  }
  CHECK(st.queue_picks() == std::vector<std::uint64_t>{24, 20, 4});
}

TEST_CASE("coop with an all-negative model interleaves age order with E0") {
  Problem p = small_problem();
  ModelContext ctx = make_context(constant_model(-3.0), p);
  Signature& sig = *p.signature;
  ProofState st(coop_strategy(ctx));
  struct Item {
    ClauseId id;
    double weight;
    std::uint64_t age;
  };
  std::vector<Item> items;
  const int sizes[] = {4, 1, 6, 2, 2, 0, 5, 3, 1, 7};
  for (int n : sizes) {
    std::string t = "a";
    for (int k = 0; k < n; ++k) t = "f(" + t + ")";
    ClauseId id = st.add(derived(sig, "q(" + t + ")"));
    items.push_back({id, clause_weight(st.clause(id), 1, 1, 1), st.clause(id).age});
  }
  std::vector<ClauseId> got;
  while (auto id = st.select_next()) {
    got.push_back(*id);
    st.move_to_processed(*id);
  }
  // Reference: 6 picks by age, 5 by (weight, age), 1 by age, repeated.
  std::vector<ClauseId> expect;
  std::set<ClauseId> taken;
  auto by_age = items, by_weight = items;
  std::sort(by_weight.begin(), by_weight.end(), [](const Item& a, const Item& b) {
    return a.weight != b.weight ? a.weight < b.weight : a.age < b.age;
  });
  auto pick = [&](const std::vector<Item>& order) {
    for (const Item& it : order) {
      if (taken.insert(it.id).second) {
        expect.push_back(it.id);
        return;
      }
    }
  };
  while (expect.size() < items.size()) {
    for (int k = 0; k < 6 && expect.size() < items.size(); ++k) pick(by_age);
    for (int k = 0; k < 5 && expect.size() < items.size(); ++k) pick(by_weight);
    if (expect.size() < items.size()) pick(by_age);
  }
  CHECK(got == expect);
}

TEST_CASE("solo with an all-positive model is FIFO") {
  auto corpus = load_corpus(BAREPROVER_CORPUS_DIR);
  Strategy fifo{{{"fifo", [](const Clause& c) { return static_cast<double>(c.age); }, 1}}, true};
  for (std::size_t i = 0; i < corpus.size(); i += 6) {
    const Problem& p = *corpus[i].problem;
    ModelContext ctx = make_context(constant_model(1.0, 15), p);
    auto a = saturate(p, solo_strategy(ctx), Limits::selections(60));
    auto b = saturate(p, fifo, Limits::selections(60));
    CHECK(a.trace == b.trace);
  }
}

TEST_CASE("scaling leaf values keeps the cef") {
  auto corpus = load_corpus(BAREPROVER_CORPUS_DIR);
  const Problem& p = *corpus[3].problem;
  ModelContext base = make_context(good_model(8, 1.0), p);
  ModelContext scaled = make_context(good_model(8, 7.5), p);
  auto r = saturate(p, e0_strategy(), Limits::selections(80));
  auto f = model_cef(base), g = model_cef(scaled);
  for (const Clause& c : r.selected) CHECK(f(c) == g(c));
}
