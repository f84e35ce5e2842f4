#include <doctest.h>

#include <random>
#include <set>

#include "bareprover/features.hpp"
#include "bareprover/tptp.hpp"
#include "support/oracles.hpp"

using namespace bare;

namespace {

// FNV-1a, 64 bit, from the published offset basis and prime.
std::uint64_t reference_fnv(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

const std::string sep(walk_separator);

std::multiset<std::string> walks(std::string_view clause, Signature& sig) {
  auto w = vertical_walks(normalize_symbols(parse_clause(clause, sig), sig));
  return {w.begin(), w.end()};
}

}  // namespace

TEST_CASE("normalize_symbols examples") {
  Signature sig;
  auto one = [&](std::string_view text) { return to_string(normalize_symbols(parse_clause(text, sig), sig)[0]); };
  CHECK(one("p(X)") == "+p(*VAR)");
  CHECK(one("~q(sk1(X), a)") == "-q(*SKO(*VAR), a)");
  CHECK(one("a = b") == "+eq(a, b)");
  CHECK(one("esk3_0 != b") == "-eq(*SKO, b)");
}

TEST_CASE("vertical_walks examples") {
  Signature sig;
  CHECK(walks("p(X)", sig) == std::multiset<std::string>{"+p", "+p" + sep + "*VAR"});
  CHECK(walks("p(f(a))", sig) == std::multiset<std::string>{"+p", "+p" + sep + "f", "+p" + sep + "f" + sep + "a"});
  CHECK(vertical_walks({}).empty());
  // Paths stop after three nodes.
  CHECK(walks("p(f(f(f(a))))", sig).size() == 3);
  CHECK(walks("q(X, X)", sig).count("+q" + sep + "*VAR") == 2);
}

TEST_CASE("hash_bucket and the FNV-1a reference") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  const std::string w = "+p" + sep + "f" + sep + "a";
  CHECK(hash_bucket(w, 8) == (reference_fnv(w) & 0xFF));
  CHECK(hash_bucket(w, 8) == hash_bucket(w, 8));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    std::string s(rng() % 12, 'x');
    for (char& c : s) c = static_cast<char>('a' + rng() % 26);
    int bits = 5 + static_cast<int>(rng() % 12);
    CHECK(hash_bucket(s, bits) < (1u << bits));
    CHECK(hash_bucket(s, bits) == (reference_fnv(s) & ((1u << bits) - 1)));
  }
  CHECK_THROWS_AS(hash_bucket("x", 4), std::invalid_argument);
  CHECK_THROWS_AS(hash_bucket("x", 17), std::invalid_argument);
}

TEST_CASE("featurize examples") {
  Signature sig;
  FeatureConfig cfg = FeatureConfig::with_bits(8);
  FeatureVector none{8, {}};
  FeatureVector bottom = featurize(Clause{}, sig, none, cfg);
  CHECK(bottom.entries.empty());
  CHECK(bottom.value(cfg.statistics_offset()) == 0);

  Clause once = parse_clause("p(a)", sig);
  Clause twice = parse_clause("p(a) | p(a)", sig);
  FeatureVector b1 = clause_block(once, sig, cfg), b2 = clause_block(twice, sig, cfg);
  REQUIRE(b1.entries.size() == b2.entries.size());
  for (std::size_t i = 0; i < b1.entries.size(); ++i) {
    CHECK(b1.entries[i].first == b2.entries[i].first);
    CHECK(2 * b1.entries[i].second == b2.entries[i].second);
  }

  FeatureVector f = featurize(parse_clause("~q(f(a), Y) | p(Y)", sig), sig, none, cfg);
  CHECK(f.value(cfg.statistics_offset()) == 2);
  CHECK(f.value(cfg.statistics_offset() + 1) == 6);
  CHECK(f.value(cfg.statistics_offset() + 2) == 2);

  FeatureVector conj = clause_block(parse_clause("r(b)", sig), sig, cfg);
  FeatureVector g = featurize(once, sig, conj, cfg);
  for (const auto& [slot, count] : conj.entries) CHECK(g.value(cfg.block_size() + slot) == count);
  for (const auto& [slot, count] : g.entries) CHECK(slot < cfg.dimension());
  CHECK(cfg.dimension() == (1u << 9) + 3);

  CHECK_THROWS_AS(featurize(once, sig, FeatureVector{9, {}}, cfg), ConfigMismatch);
  CHECK_THROWS_AS(featurize(once, sig, FeatureVector{8, {{300, 1}}}, cfg), ConfigMismatch);
  CHECK_THROWS_AS(FeatureConfig::with_bits(4), std::invalid_argument);
}

TEST_CASE("a walk pair that collides at 5 bits but not at 15") {
  std::vector<std::string> names;
  for (int i = 0; i < 200; ++i) names.push_back("+p" + sep + "c" + std::to_string(i));
  std::string x, y;
  for (std::size_t i = 0; i < names.size() && x.empty(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      if ((reference_fnv(names[i]) & 31) == (reference_fnv(names[j]) & 31) &&
          (reference_fnv(names[i]) & 0x7FFF) != (reference_fnv(names[j]) & 0x7FFF)) {
        x = names[i].substr(2 + sep.size());
        y = names[j].substr(2 + sep.size());
        break;
      }
    }
  }
  REQUIRE(!x.empty());
  Signature sig;
  Clause cx = parse_clause("p(" + x + ")", sig), cy = parse_clause("p(" + y + ")", sig);
  auto five = FeatureConfig::with_bits(5), fifteen = FeatureConfig::with_bits(15);
  CHECK(clause_block(cx, sig, five) == clause_block(cy, sig, five));
  CHECK(clause_block(cx, sig, fifteen) != clause_block(cy, sig, fifteen));
}

TEST_CASE("featurize_conjecture") {
  auto cfg = FeatureConfig::with_bits(10);
  Problem none = parse_problem("cnf(a, axiom, p(a)).");
  CHECK(featurize_conjecture(none, cfg).entries.empty());

  Problem one = parse_problem("cnf(a, axiom, p(a)).\ncnf(g, negated_conjecture, ~q(f(X))).");
  CHECK(featurize_conjecture(one, cfg) == clause_block(one.clauses[1], *one.signature, cfg));

  Problem two = parse_problem(
      "cnf(g1, negated_conjecture, ~q(f(X))).\ncnf(g2, negated_conjecture, ~q(b) | r).");
  FeatureVector u = featurize_conjecture(two, cfg);
  const std::uint32_t shared = hash_bucket("-q", 10);
  CHECK(u.value(shared) == 2);
  CHECK(u.total() == clause_block(two.clauses[0], *two.signature, cfg).total() +
                         clause_block(two.clauses[1], *two.signature, cfg).total());
}

TEST_CASE("featurize ignores variable names and literal order") {
  oracle::ClauseGen gen;
  std::mt19937_64 rng(17);
  FeatureVector conj{12, {{3, 1}, {77, 2}}};
  auto cfg = FeatureConfig::with_bits(12);
  for (int trial = 0; trial < 300; ++trial) {
    auto lits = gen.clause(rng, 1, 4, 3);
    Clause c = oracle::to_clause(lits);
    std::shuffle(lits.begin(), lits.end(), rng);
    oracle::Binding perm{{0, oracle::T::v(2)}, {1, oracle::T::v(0)}, {2, oracle::T::v(1)}};
    for (auto& l : lits) l.atom = oracle::subst(l.atom, perm);
    Clause d = oracle::to_clause(lits);
    CHECK(featurize(c, gen.ts.sig, conj, cfg) == featurize(d, gen.ts.sig, conj, cfg));
  }
}

TEST_CASE("occupied buckets never shrink as bits grow") {
  oracle::ClauseGen gen;
  std::mt19937_64 rng(23);
  for (int set = 0; set < 20; ++set) {
    std::vector<Clause> cs;
    for (int i = 0; i < 40; ++i) cs.push_back(oracle::to_clause(gen.clause(rng, 1, 3, 2)));
    std::size_t previous = 0;
    for (int bits = 5; bits <= 16; ++bits) {
      std::set<std::uint32_t> occupied;
      auto cfg = FeatureConfig::with_bits(bits);
      for (const Clause& c : cs) {
        for (const auto& e : clause_block(c, gen.ts.sig, cfg).entries) occupied.insert(e.first);
      }
      CHECK(occupied.size() >= previous);
      previous = occupied.size();
    }
  }
}
