#include <doctest.h>

#include <random>

#include "support/corpus.hpp"
#include "treegram/bisim.hpp"
#include "treegram/oracles.hpp"

using namespace treegram;

namespace {

Grammar parsed(std::string_view text) { return parse_grammar(text); }

Tree bvalue(const Grammar& g) { return eval(bcanon_grammar(g)); }

void check_against_oracle(const Grammar& g) {
  Tree t = eval(g);
  Tree b = bvalue(g);
  CHECK(iso_key(b) == iso_key(naive_bcanon(t)));
  CHECK(tree_size(b) <= tree_size(t));
  CHECK(iso_key(bvalue(tree_to_dag(b))) == iso_key(b));
}

}  // namespace

TEST_CASE("small examples") {
  Grammar faaa = parsed("slt v1\nS = f(a, a, a)");
  Grammar faa = parsed("slt v1\nS = f(a, a)");
  CHECK(to_string(bvalue(faaa)) == "f(a)");
  CHECK(bisim_equal(faaa, faa));
  CHECK_FALSE(bisim_equal(parsed("slt v1\nS = f(g(a), g(b))"), parsed("slt v1\nS = f(g(a, b))")));
  CHECK(bisim_equal(faaa, faaa));
}

TEST_CASE("suffix on the spine repeats a sibling") {
  // f(g(a), g(a, a)): the suffix g(a, a) only matches g(a) after its own duplicate is dropped.
  Grammar g = parsed("slt v1\nS = F(G)\nF(y) = f(H, y)\nH = g(a)\nG = g(a, a)");
  CHECK(to_string(bvalue(g)) == "f(g(a))");
  // The drop happens below the top of the spine only.
  Grammar chain = parsed("slt v1\nS = P(P(Q(b)))\nP(y) = p(E, y)\nQ(y) = q(y)\nE = q(b)\n");
  check_against_oracle(chain);
  CHECK(to_string(bvalue(chain)) == "p(q(b),p(q(b)))");
}

TEST_CASE("bcanon matches the oracle on random grammars") {
  int shrunk = 0;
  for (const auto& g : corpus::random_grammars(200, 41, 3000)) {
    check_against_oracle(to_grammar(g));
    shrunk += tree_size(naive_bcanon(eval(g))) < tree_size(eval(g));
  }
  MESSAGE("grammars whose bcanon is smaller: " << shrunk);
  CHECK(shrunk >= 50);
}

TEST_CASE("bcanon matches the oracle on repetitive tree dags") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 150; ++trial) {
    Tree t = trial % 2 ? corpus::random_repetitive_tree(rng, 400) : corpus::random_tree(rng, 1 + rng() % 30, {"a"});
    check_against_oracle(tree_to_dag(t));
    // Through a spine: wrap t into a chain of contexts sharing one child.
    Tree wrapped = Tree("w", {t, Tree("w", {t, Tree("w", {t, t})})});
    CHECK(iso_key(bvalue(tree_to_dag(wrapped))) == iso_key(naive_bcanon(wrapped)));
  }
}

TEST_CASE("bisim_equal agrees with partition refinement") {
  std::mt19937_64 rng(43);
  int equal = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Tree s = corpus::random_tree(rng, 1 + rng() % 10, {"a", "b"});
    Tree t = trial % 3 ? corpus::random_tree(rng, 1 + rng() % 10, {"a", "b"}) : naive_bcanon(s);
    bool expect = naive_bisim(s, t);
    equal += expect;
    CHECK(bisim_equal(tree_to_dag(s), tree_to_dag(t)) == expect);
  }
  CHECK(equal >= 100);
  auto gs = corpus::random_grammars(40, 44, 2000);
  for (std::size_t i = 0; i + 1 < gs.size(); ++i) {
    Grammar a = to_grammar(gs[i]), b = to_grammar(gs[i + 1]);
    CHECK(bisim_equal(a, b) == naive_bisim(eval(gs[i]), eval(gs[i + 1])));
    CHECK(bisim_equal(a, tree_to_dag(naive_bcanon(eval(gs[i])))));
  }
}

TEST_CASE("bisimilarity is decided by bcanon isomorphism in the oracles") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 200; ++trial) {
    Tree s = corpus::random_tree(rng, 1 + rng() % 12, {"a", "b"});
    Tree t = corpus::random_tree(rng, 1 + rng() % 12, {"a", "b"});
    CHECK(naive_bisim(s, t) == (ahu_canon(naive_bcanon(s)) == ahu_canon(naive_bcanon(t))));
  }
}
