#include <doctest.h>

#include <random>

#include "support/corpus.hpp"
#include "treegram/dflr.hpp"
#include "treegram/error.hpp"
#include "treegram/slp.hpp"

using namespace treegram;

namespace {

std::string joined(const std::vector<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) out += x;
  return out;
}

RuleId literal(SlpStore& s, std::string_view text) {
  std::vector<SlpSymbol> rhs;
  for (char c : text) rhs.push_back(s.terminal(std::string(1, c)));
  return s.add(rhs);
}

}  // namespace

TEST_CASE("lengths") {
  SlpStore s;
  CHECK(s.length(literal(s, "a")) == 1);
  CHECK(s.length(s.add({})) == 0);
  RuleId r = literal(s, "g");
  for (int i = 0; i < 60; ++i) r = s.add({SlpStore::rule_symbol(r), SlpStore::rule_symbol(r)});
  CHECK(slp_length(s, r) == pow2(60));
  CHECK(s.label(slp_symbol_at(s, r, pow2(59))) == "g");
  CHECK_THROWS_AS(slp_symbol_at(s, r, pow2(60) + 1), ValidationError);
  CHECK_THROWS_AS(slp_expand(s, r), LimitError);
}

TEST_CASE("slice and symbol access on a literal") {
  SlpStore s;
  RuleId fba = literal(s, "fba");
  CHECK(joined(slp_expand(s, slp_slice(s, fba, 2, 3))) == "ba");
  CHECK(slp_equal(s, slp_slice(s, fba, 1, 3), fba));
  CHECK(s.length(slp_slice(s, fba, 3, 2)) == 0);
  CHECK(s.label(slp_symbol_at(s, fba, 2)) == "b");
  CHECK_THROWS_AS(slp_slice(s, fba, 0, 2), ValidationError);
  CHECK_THROWS_AS(slp_slice(s, fba, 2, 4), ValidationError);
}

TEST_CASE("slices of random SLPs match substrings") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 60; ++trial) {
    SlpStore s;
    RuleId r = corpus::random_slp(s, rng, 12, 200);
    std::string full = joined(slp_expand(s, r));
    std::size_t n = full.size();
    for (std::size_t l = 1; l <= n; l += 1 + n / 15)
      for (std::size_t rr = l; rr <= n; rr += 1 + n / 15) {
        RuleId sl = slp_slice(s, r, l, rr);
        CHECK(joined(slp_expand(s, sl)) == full.substr(l - 1, rr - l + 1));
        if (rr - l >= 2) {
          RuleId inner = slp_slice(s, sl, 2, rr - l);
          CHECK(joined(slp_expand(s, inner)) == full.substr(l, rr - l - 1));
        }
      }
    for (std::size_t i = 1; i <= n; ++i) CHECK(s.label(slp_symbol_at(s, r, i))[0] == full[i - 1]);
  }
}

TEST_CASE("equality and llex order") {
  SlpStore s;
  RuleId ab = literal(s, "ab"), ba = literal(s, "ba");
  CHECK(slp_equal(s, ab, ab));
  CHECK_FALSE(slp_equal(s, ab, ba));
  CHECK(slp_compare_llex(s, literal(s, "a"), ab) == Ordering::Less);
  CHECK(slp_compare_llex(s, literal(s, "fab"), literal(s, "fba")) == Ordering::Less);
  CHECK(slp_compare_llex(s, ab, ab) == Ordering::Equal);
  EqualityPolicy exact = EqualityPolicy::exact(1);
  CHECK_THROWS_AS(slp_equal(s, ab, ba, exact), LimitError);
}

TEST_CASE("fingerprint equality matches expansion") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::mt19937_64 rng(seed);
    SlpStore s;
    RuleId a = corpus::random_slp(s, rng, 14, 10'000);
    RuleId b = corpus::random_slp(s, rng, 14, 10'000);
    RuleId c = slp_slice(s, a, 1, s.length(a));
    auto fp = EqualityPolicy::fingerprint(3, seed);
    bool same = slp_expand(s, a) == slp_expand(s, b);
    CHECK(slp_equal(s, a, b, fp) == same);
    CHECK(slp_equal(s, a, c, fp));
    auto expect = llex_compare(slp_expand(s, a), slp_expand(s, b));
    CHECK(slp_compare_llex(s, a, b, {}, fp) == expect);
  }
}

TEST_CASE("fingerprints on long strings") {
  SlpStore s;
  RuleId x = literal(s, "ab");
  RuleId y = literal(s, "ab");
  for (int i = 0; i < 80; ++i) {
    x = s.add({SlpStore::rule_symbol(x), SlpStore::rule_symbol(x)});
    y = s.add({SlpStore::rule_symbol(y), SlpStore::rule_symbol(y)});
  }
  RuleId z = s.add({SlpStore::rule_symbol(x), s.terminal("a")});
  RuleId w = s.add({SlpStore::rule_symbol(y), s.terminal("b")});
  auto fp = EqualityPolicy::fingerprint(3, 7);
  CHECK(slp_equal(s, x, y, fp));
  CHECK_FALSE(slp_equal(s, z, w, fp));
  CHECK(slp_compare_llex(s, z, w, {}, fp) == Ordering::Less);
  CHECK(slp_compare_llex(s, w, z) == Ordering::Greater);
}

TEST_CASE("primality") {
  CHECK(is_prime_u64(2));
  CHECK(is_prime_u64(2305843009213693951ULL));
  CHECK_FALSE(is_prime_u64(1));
  CHECK_FALSE(is_prime_u64(3215031751ULL));
  CHECK_FALSE(is_prime_u64(2305843009213693953ULL));
}

TEST_CASE("dflr SLPs") {
  NormalGrammar g = normalize(parse_grammar("slt v1\nS = B(A)\nA = a\nB(y) = f(b, y)"));
  SlpStore s;
  DflrSlps d(g, s);
  CHECK(joined(slp_expand(s, d.tree(g.start()))) == "fba");
  NormalGrammar leaf = normalize(parse_grammar("slt v1\nS = a"));
  SlpStore s2;
  DflrSlps d2(leaf, s2);
  CHECK(joined(slp_expand(s2, d2.tree(leaf.start()))) == "a");
}

TEST_CASE("dflr SLPs match eval on random grammars") {
  for (const auto& g : corpus::random_grammars(60, 700, 3000)) {
    SlpStore s;
    DflrSlps d(g, s);
    auto sz = sizes(g);
    for (NtId id : g.topological_order()) {
      if (g.rank(id) == 0) {
        CHECK(slp_expand(s, d.tree(id)) == dflr(eval(g, id)));
        CHECK(s.length(d.tree(id)) == sz[id]);
      } else {
        CHECK(s.length(d.prefix(id)) + s.length(d.suffix(id)) + 1 == sz[id]);
      }
    }
  }
}

TEST_CASE("compare_values matches llex on evals and is a total order") {
  auto grammars = corpus::random_grammars(50, 800, 2000);
  for (const auto& g0 : grammars) {
    NormalGrammar g = ranked(g0);
    ValueOrder order(g);
    auto ids = g.topological_order();
    std::vector<NtId> trees;
    for (NtId id : ids)
      if (g.rank(id) == 0) trees.push_back(id);
    for (NtId a : trees)
      for (NtId b : trees) {
        auto expect = llex_compare_trees(eval(g, a), eval(g, b));
        CHECK(order.compare(a, b) == expect);
        CHECK(compare_values(g, b, a) == static_cast<Ordering>(-static_cast<int>(expect)));
      }
  }
  NormalGrammar g = normalize(parse_grammar("slt v1\nS = f(A, B)\nA = a\nB = f(a, a)"));
  CHECK(compare_values(g, *g.find("A"), *g.find("B")) == Ordering::Less);
  CHECK(compare_values(g, *g.find("A"), *g.find("A")) == Ordering::Equal);
}
