#include <doctest.h>

#include <random>

#include "support/corpus.hpp"
#include "treegram/bisim.hpp"
#include "treegram/error.hpp"
#include "treegram/oracles.hpp"
#include "treegram/st.hpp"

using namespace treegram;

namespace {

Tree full_binary(std::size_t height) {
  Tree t("a");
  for (std::size_t i = 0; i < height; ++i) t = Tree("f", {t, t});
  return t;
}

// Exhaustive truth by direct recursion over assignments, independent of qbf_eval.
bool brute(const Qbf& f, const Qbf::Node& n, std::vector<bool>& val) {
  switch (n.kind) {
    case Qbf::Node::Kind::Literal: return val[n.var] != n.negated;
    case Qbf::Node::Kind::And: return brute(f, n.children[0], val) && brute(f, n.children[1], val);
    default: return brute(f, n.children[0], val) || brute(f, n.children[1], val);
  }
}

bool brute(const Qbf& f, std::size_t i, std::vector<bool>& val) {
  if (i == f.prefix.size()) return brute(f, f.matrix, val);
  bool r[2];
  for (int b = 0; b < 2; ++b) {
    val[i] = b;
    r[b] = brute(f, i + 1, val);
  }
  return f.prefix[i].forall ? r[0] && r[1] : r[0] || r[1];
}

}  // namespace

TEST_CASE("doubling grammar expands to a small dag") {
  const char* expect[] = {"3", "7", "31", "511", "131071"};
  for (int n = 0; n <= 4; ++n) {
    Grammar dag = st_to_dag(corpus::doubling_family(n));
    BigCount nodes = (BigCount(1) << ((1 << n) + 1)) - 1;
    CHECK(to_string(size_of(dag)) == expect[n]);
    CHECK(size_of(dag) == nodes);
    CHECK(dag.productions().size() == static_cast<std::size_t>((1 << n) + 1));
  }
  CHECK(eval(st_to_dag(corpus::doubling_family(2))) == full_binary(4));
  CHECK(iso_st(corpus::doubling_family(3), tree_to_dag(full_binary(8))));
  CHECK_FALSE(iso_st(corpus::doubling_family(3), tree_to_dag(full_binary(7))));
}

TEST_CASE("expansion budget") {
  ExpansionBudget tight;
  tight.max_nodes = 5;
  CHECK_THROWS_AS(st_to_dag(corpus::doubling_family(3), tight), LimitError);
  ExpansionBudget few;
  few.max_instantiations = 1;
  Grammar g = parse_grammar("st v1\nS = f(F(a), F(b))\nF(y) = g(y, y)");
  CHECK_THROWS_AS(st_to_dag(g, few), LimitError);
  CHECK(to_string(eval(st_to_dag(g))) == "f(g(a,a),g(b,b))");
}

TEST_CASE("st_to_dag agrees with eval and shares every repeat") {
  for (const auto& n : corpus::random_grammars(60, 51, 3000)) {
    Grammar g = to_grammar(n);
    Grammar dag = st_to_dag(g);
    Tree t = eval(g);
    CHECK(eval(dag) == t);
    CHECK(dag.productions().size() == tree_to_dag(t).productions().size());
  }
  Grammar nl = parse_grammar("st v1\nS = F(G(a), b)\nF(x, y) = h(x, y, x)\nG(y) = g(y, y, c)");
  CHECK(eval(st_to_dag(nl)) == eval(nl));
}

TEST_CASE("qbf parsing") {
  CHECK(to_string(qbf_parse("E z. z")) == "E z. z");
  CHECK(to_string(qbf_parse("A z. z")) == "A z. z");
  Qbf neg = qbf_parse("E z. !(z)");
  CHECK(neg.matrix.negated);
  CHECK(to_string(qbf_parse("A z. E w. !(z & !w)")) == "A z. E w. !z | w");
  CHECK_THROWS_AS(qbf_parse("E z. w"), ValidationError);
  CHECK_THROWS_AS(qbf_parse("E z. (z"), SyntaxError);
  CHECK_THROWS_AS(qbf_parse("E z. z &"), SyntaxError);
  CHECK_THROWS_AS(qbf_parse("E z. E z. z"), ValidationError);
}

TEST_CASE("qbf evaluation") {
  CHECK(qbf_eval(qbf_parse("E z. z")));
  CHECK_FALSE(qbf_eval(qbf_parse("A z. z")));
  CHECK(qbf_eval(qbf_parse("A z. E w. (z | !w) & (!z | w)")));
  CHECK_FALSE(qbf_eval(qbf_parse("E w. A z. (z | !w) & (!z | w)")));
  std::string many;
  for (int i = 0; i < 25; ++i) many += "E x" + std::to_string(i) + ". ";
  CHECK_THROWS_AS(qbf_eval(qbf_parse(many + "x0")), LimitError);
}

TEST_CASE("paper's literal gadget cannot tell true from false") {
  // A_z(0) = f(0,1) and B_z(0) = f(1,0) are isomorphic as unordered trees.
  CHECK(brute_force_iso(Tree("f", {Tree("0"), Tree("1")}), Tree("f", {Tree("1"), Tree("0")})));
  Qbf f = qbf_parse("A z. z");
  auto [a, b] = qbf_to_st(f, LiteralGadget::Paper);
  CHECK(iso_st(a, b));
  CHECK_FALSE(qbf_eval(f));
  auto [fa, fb] = qbf_to_st(f);
  CHECK_FALSE(iso_st(fa, fb));
}

TEST_CASE("qbf reduction agrees with evaluation") {
  for (const char* text : {"E z. z", "A z. z", "E z. !z", "A z. z | !z", "E z. z & !z"}) {
    Qbf f = qbf_parse(text);
    auto [a, b] = qbf_to_st(f);
    CHECK_MESSAGE(iso_st(a, b) == qbf_eval(f), text);
    CHECK_MESSAGE(bisim_st(a, b) == qbf_eval(f), text);
  }
  // All 2-variable prefixes over a few matrices.
  const char* matrices[] = {"(x | !y) & (!x | y)", "x & y", "x | y", "!x & (y | x)", "(x & !y) | (!x & y)"};
  const char* prefixes[] = {"A x. A y. ", "A x. E y. ", "E x. A y. ", "E x. E y. ",
                            "A y. A x. ", "A y. E x. ", "E y. A x. ", "E y. E x. "};
  for (const char* m : matrices)
    for (const char* p : prefixes) {
      std::string text = std::string(p) + m;
      Qbf f = qbf_parse(text);
      auto [a, b] = qbf_to_st(f);
      CHECK_MESSAGE(iso_st(a, b) == qbf_eval(f), text);
    }
}

TEST_CASE("qbf reduction on random formulas up to 8 variables") {
  std::mt19937_64 rng(52);
  int truths = 0;
  for (int trial = 0; trial < 120; ++trial) {
    std::size_t vars = 1 + trial % 8;
    std::string text = corpus::random_qbf(rng, vars);
    Qbf f = qbf_parse(text);
    std::vector<bool> val(f.prefix.size());
    bool expect = brute(f, 0, val);
    CHECK_MESSAGE(qbf_eval(f) == expect, text);
    auto [a, b] = qbf_to_st(f);
    CHECK_MESSAGE(iso_st(a, b) == expect, text);
    if (trial % 4 == 0) CHECK_MESSAGE(bisim_st(a, b) == expect, text);
    truths += expect;
  }
  CHECK(truths > 20);
  CHECK(truths < 100);
}

TEST_CASE("bisimulation through st grammars") {
  Grammar three = parse_grammar("st v1\nS = F(a)\nF(y) = f(y, y, y)");
  Grammar two = parse_grammar("st v1\nS = F(a)\nF(y) = f(y, y)");
  CHECK(bisim_st(three, two));
  CHECK_FALSE(iso_st(three, two));
  CHECK(bisim_st(three, three));
  CHECK(bisim_st(corpus::doubling_family(3), tree_to_dag(Tree("f", {Tree("f", {Tree("f", {Tree("f", {Tree("f", {Tree("f", {Tree("f", {Tree("f", {Tree("a")})})})})})})})}))));
}
