#include <doctest.h>

#include <random>

#include "support/corpus.hpp"
#include "treegram/canonize.hpp"
#include "treegram/dflr.hpp"
#include "treegram/oracles.hpp"

using namespace treegram;

namespace {

CanonOptions checked() {
  CanonOptions o;
  o.check_breakpoints = true;
  return o;
}

NormalGrammar prepared(const Grammar& g) { return dedup_equal(normalize(ranked_grammar(g))); }


void check_canon(const NormalGrammar& g) {
  Tree expect = ahu_canon(eval(g));
  NormalGrammar c = canonize(g, checked());
  CHECK(eval(c) == expect);
}

}  // namespace

TEST_CASE("canonize sorts node arguments") {
  NormalGrammar g = prepared(parse_grammar("slt v1\nS = f(B, A)\nA = a\nB = b"));
  CHECK(to_string(eval(canonize(g))) == "'f#2'('a#0','b#0')");
}

TEST_CASE("canonize keeps canonical grammars") {
  NormalGrammar g = prepared(parse_grammar("slt v1\nS = f(a, g(b, c))"));
  CHECK(eval(canonize(g)) == eval(g));
}

TEST_CASE("canonize compares against the canonical suffix") {
  Grammar g = parse_grammar(
      "slt v1\nZ = B1(B2(A))\nB1(y) = g(y, F)\nF = f(a, c)\nB2(y) = f(b, y)\nA = a");
  NormalGrammar n = prepared(g);
  NormalGrammar c = canonize(n, checked());
  CHECK(eval(c) == ahu_canon(ranked_tree(eval(g))));
  CHECK(to_string(unranked(c).count() ? eval(unranked(c)) : Tree{}) == "g(f(a,b),f(a,c))");
}

TEST_CASE("canonize towers with varying arguments") {
  std::string text = "slt v1\nS = D(a)\nD(y) = E0(E1(E2(E3(y))))\n";
  const char* args[] = {"b", "f(a,a)", "a", "f(a,b)"};
  for (int i = 0; i < 4; ++i)
    text += "E" + std::to_string(i) + "(y) = G" + std::to_string(i) + "(G" + std::to_string(i) + "(y))\n" + "G" +
            std::to_string(i) + "(y) = g(" + args[i] + ", y)\n";
  check_canon(prepared(parse_grammar(text)));
  std::string left = "slt v1\nS = D(g(a,a))\nD(y) = E(E(E(y)))\nE(y) = F(F(y))\nF(y) = g(y, b)\n";
  check_canon(prepared(parse_grammar(left)));
}

TEST_CASE("canonize matches the oracle on random grammars") {
  for (const auto& g : corpus::random_grammars(150, 1000, 10'000)) {
    NormalGrammar r = dedup_equal(ranked(g));
    check_canon(r);
  }
}

TEST_CASE("canonize matches the oracle on dags of random trees") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    Tree t = i % 2 ? corpus::random_tree(rng, 1 + i % 40) : corpus::random_repetitive_tree(rng, 300);
    NormalGrammar g = prepared(tree_to_dag(t));
    CHECK(eval(canonize(g)) == ahu_canon(ranked_tree(t)));
  }
}

TEST_CASE("canonize is idempotent") {
  for (const auto& g : corpus::random_grammars(40, 2000, 5000)) {
    NormalGrammar c = canonize(dedup_equal(ranked(g)));
    CHECK(eval(canonize(c)) == eval(c));
  }
}

TEST_CASE("iso_rooted") {
  CHECK(iso_rooted(parse_grammar("slt v1\nS = f(a,b)"), parse_grammar("slt v1\nS = f(b,a)")));
  CHECK_FALSE(iso_rooted(parse_grammar("slt v1\nS = f(g(a),g(b))"), parse_grammar("slt v1\nS = f(g(a,b))")));
  Grammar g = parse_grammar("slt v1\nS = B(B(a))\nB(y) = f(y, g(b, c))");
  CHECK(iso_rooted(g, g));
  Grammar h = parse_grammar("slt v1\nS = B(B(a))\nB(y) = f(g(c, b), y)");
  CHECK(iso_rooted(g, h));
  CHECK_FALSE(iso_rooted(parse_grammar("slt v1\nS = a(a(a))"), parse_grammar("slt v1\nS = a(a,a)")));
}

TEST_CASE("iso_rooted is invariant under argument permutations") {
  std::mt19937_64 rng(23);
  for (const auto& g0 : corpus::random_grammars(60, 3000, 5000)) {
    NormalGrammar g = ranked(g0);
    NormalGrammar p = corpus::permuted(g, rng);
    CHECK(eval(p) != Tree{});
    CHECK(iso_rooted(g, p));
  }
}

TEST_CASE("iso_rooted agrees with the oracle") {
  auto grammars = corpus::random_grammars(30, 4000, 300, 6);
  for (const auto& a : grammars)
    for (const auto& b : grammars) {
      bool expect = iso_key(eval(a)) == iso_key(eval(b)) && iso_key(ranked_tree(eval(a))) == iso_key(ranked_tree(eval(b)));
      CHECK(iso_rooted(ranked(a), ranked(b)) == expect);
    }
}
