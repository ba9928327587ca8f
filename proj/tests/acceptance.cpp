// One line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "support/corpus.hpp"
#include "treegram/bisim.hpp"
#include "treegram/canonize.hpp"
#include "treegram/dflr.hpp"
#include "treegram/oracles.hpp"
#include "treegram/st.hpp"
#include "treegram/stats.hpp"
#include "treegram/unrooted.hpp"

using namespace treegram;

namespace {

struct Outcome {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string detail;
  std::string first_failure;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first_failure = what;
  }
};

using Seconds = std::chrono::duration<double>;

double since(std::chrono::steady_clock::time_point t) {
  return Seconds(std::chrono::steady_clock::now() - t).count();
}

Tree ahu_of(const Grammar& g) { return ahu_canon(eval(ranked_grammar(g))); }

Outcome canonization() {
  Outcome o;
  std::mt19937_64 rng(1001);
  for (int i = 0; i < 10'000; ++i) {
    Tree t = corpus::random_tree(rng, 1 + rng() % 40, {"a", "b", "c"});
    Grammar g = tree_to_dag(t);
    o.check(eval(canon_grammar(g)) == ahu_of(g), "tree " + to_string(t));
  }
  BigCount total = 0;
  for (const auto& n : corpus::random_grammars(200, 2001, 10'000)) {
    Grammar g = to_grammar(n);
    total += size_of(g);
    o.check(eval(canon_grammar(g)) == ahu_of(g), "grammar\n" + write_grammar(g));
  }
  o.detail = "10000 tree dags + 200 grammars (mean eval " + to_string(total / 200) + " nodes)";
  return o;
}

Outcome isomorphism() {
  Outcome o;
  std::mt19937_64 rng(3001);
  std::vector<NormalGrammar> base = corpus::random_grammars(30, 3001, 2000);
  std::vector<Grammar> gs;
  std::vector<std::string> keys;
  for (const auto& g : base) gs.push_back(to_grammar(g));
  for (const auto& g : base) gs.push_back(to_grammar(corpus::permuted(g, rng)));
  for (const auto& g : gs) keys.push_back(iso_key(eval(g)));
  std::size_t iso = 0;
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = i + 1; j < gs.size(); ++j) {
      bool expect = keys[i] == keys[j];
      iso += expect;
      o.check(iso_rooted(gs[i], gs[j]) == expect, "pair " + std::to_string(i) + "," + std::to_string(j));
    }
  o.detail = std::to_string(o.checks) + " pairs, " + std::to_string(iso) + " isomorphic";
  return o;
}

std::string joined(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += x;
  return s;
}

Outcome slp_primitives() {
  Outcome o;
  std::mt19937_64 rng(4001);
  for (int trial = 0; trial < 100; ++trial) {
    SlpStore base;
    RuleId r = corpus::random_long_slp(base, rng, 200);
    std::string full = joined(slp_expand(base, r));
    std::size_t n = full.size();
    for (std::size_t l = 1; l <= n; ++l) {
      SlpStore s = base;  // slices add rules; start each row from a clean store
      for (std::size_t rr = l; rr <= n; ++rr)
        o.check(joined(slp_expand(s, slp_slice(s, r, l, rr))) == full.substr(l - 1, rr - l + 1),
                "slice " + std::to_string(l) + ".." + std::to_string(rr) + " of " + full);
    }
  }
  std::size_t slices = o.checks;
  for (int trial = 0; trial < 10'000; ++trial) {
    SlpStore s;
    RuleId a = corpus::random_long_slp(s, rng, 1 + rng() % 200);
    RuleId b;
    switch (trial % 3) {
      case 0: b = corpus::random_long_slp(s, rng, 1 + rng() % 200); break;
      case 1: b = s.add({SlpStore::rule_symbol(a)}); break;  // equal value, other rule
      default: {
        BigCount len = s.length(a);
        b = len == 0 ? a : s.add({SlpStore::rule_symbol(slp_slice(s, a, 1, len - 1)), s.terminal(rng() % 2 ? "a" : "b")});
      }
    }
    auto expect = llex_compare(slp_expand(s, a), slp_expand(s, b));
    EqualityPolicy p = trial % 2 ? EqualityPolicy{} : EqualityPolicy::fingerprint(3, trial);
    o.check(slp_compare_llex(s, a, b, {}, p) == expect, "llex pair " + std::to_string(trial));
  }
  o.detail = std::to_string(slices) + " slices of 100 SLPs, 10000 llex pairs";
  return o;
}

Outcome center_reroot() {
  Outcome o;
  std::size_t total = 0;
  for (const auto& g0 : corpus::random_grammars(500, 5001, 5000)) {
    NormalGrammar g = normalize(even_grammar(to_grammar(g0)));
    Tree t = eval(g);
    total += tree_size(t);
    DeweyAddress c = naive_center(t);
    CompressedPath p = find_center(g);
    o.check(resolve_path(g, p).expand() == c, "center of\n" + to_string(g));
    o.check(iso_key(eval(reroot(g, p))) == iso_key(naive_reroot(t, c)), "reroot of\n" + to_string(g));
  }
  o.detail = "500 even grammars (mean eval " + std::to_string(total / 500) + " nodes)";
  return o;
}

Outcome bisimulation() {
  Outcome o;
  std::mt19937_64 rng(6001);
  std::vector<Grammar> gs;
  auto base = corpus::random_grammars(30, 6001, 3000);
  for (const auto& g : base) gs.push_back(to_grammar(g));
  for (std::size_t i = 0; i < 15; ++i) gs.push_back(tree_to_dag(naive_bcanon(eval(base[i]))));
  for (int i = 0; i < 15; ++i) gs.push_back(tree_to_dag(corpus::random_tree(rng, 1 + rng() % 12, {"a", "b"})));
  std::vector<Tree> vals;
  for (const auto& g : gs) vals.push_back(eval(g));
  for (std::size_t i = 0; i < gs.size(); ++i)
    o.check(iso_key(eval(bcanon_grammar(gs[i]))) == iso_key(naive_bcanon(vals[i])), "bcanon " + std::to_string(i));
  std::size_t equal = 0;
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = i + 1; j < gs.size(); ++j) {
      bool expect = naive_bisim(vals[i], vals[j]);
      equal += expect;
      o.check(bisim_equal(gs[i], gs[j]) == expect, "pair " + std::to_string(i) + "," + std::to_string(j));
    }
  o.detail = std::to_string(gs.size()) + " grammars, " + std::to_string(equal) + " bisimilar pairs";
  return o;
}

Outcome qbf_reduction() {
  Outcome o;
  auto run = [&](const std::string& text) {
    Qbf f = qbf_parse(text);
    auto [a, b] = qbf_to_st(f);
    o.check(iso_st(a, b) == qbf_eval(f), text);
  };
  const char* names[] = {"x", "y", "z"};
  std::size_t templates = 0;
  for (std::size_t k = 1; k <= 3; ++k) {
    std::vector<std::string> matrices;
    if (k == 1) {
      matrices = {"x", "!x", "x & !x", "x | !x"};
    } else {
      for (unsigned signs = 0; signs < (1u << k); ++signs)
        for (unsigned ops = 0; ops < (1u << (k - 1)); ++ops) {
          std::string m = (signs & 1 ? "!" : "") + std::string(names[0]);
          for (std::size_t v = 1; v < k; ++v) {
            std::string op = (ops >> (v - 1)) & 1 ? " | " : " & ";
            m = "(" + m + op + ((signs >> v) & 1 ? "!" : "") + names[v] + ")";
          }
          matrices.push_back(m);
        }
    }
    for (unsigned q = 0; q < (1u << k); ++q) {
      std::string prefix;
      for (std::size_t v = 0; v < k; ++v) prefix += std::string((q >> v) & 1 ? "A " : "E ") + names[v] + ". ";
      for (const auto& m : matrices) {
        run(prefix + m);
        ++templates;
      }
    }
  }
  std::mt19937_64 rng(7001);
  for (int i = 0; i < 300; ++i) run(corpus::random_qbf(rng, 1 + i % 8));
  o.detail = std::to_string(templates) + " template formulas + 300 random";
  return o;
}

Outcome counting() {
  Outcome o;
  const char* expect[] = {"3", "7", "31", "511", "131071"};
  std::string sizes;
  for (int n = 0; n <= 4; ++n) {
    Grammar g = corpus::doubling_family(n);
    BigCount formula = (BigCount(1) << ((1 << n) + 1)) - 1;
    BigCount direct = size_of(g), dag = size_of(st_to_dag(g));
    o.check(to_string(direct) == expect[n] && direct == formula, "size_of n=" + std::to_string(n));
    o.check(dag == direct, "st_to_dag n=" + std::to_string(n));
    sizes += (n ? ", " : "") + to_string(direct);
  }
  o.detail = "n=0..4: " + sizes;
  return o;
}

Outcome scale() {
  Outcome o;
  Grammar g = corpus::scale_family(60);
  NormalGrammar n = normalize(g);
  GrammarStats st(n);
  const TreeStats& top = st.tree(n.start());
  std::ostringstream d;
  d << g.productions().size() << " productions, |val| = " << top.size << ", height " << top.height << ", diameter "
    << top.diameter;

  auto t0 = std::chrono::steady_clock::now();
  NormalGrammar c = canon_grammar(g);
  double tc = since(t0);
  o.check(tc < 10, "canonize took " + std::to_string(tc) + " s");
  o.check(GrammarStats(c).tree(c.start()).size == top.size, "canon changed the size");

  t0 = std::chrono::steady_clock::now();
  NormalGrammar e = normalize(even_grammar(g));
  CompressedPath p = find_center(e);
  BigCount depth = resolve_path(e, p).depth();
  double tf = since(t0);
  o.check(tf < 10, "find_center took " + std::to_string(tf) + " s");
  // Rooted at the center, the height is the radius.
  BigCount diameter = GrammarStats(e).tree(e.start()).diameter;
  NormalGrammar r = reroot(e, p);
  o.check(GrammarStats(r).tree(r.start()).height * 2 == diameter, "rerooted height is not the radius");

  std::mt19937_64 rng(8001);
  Grammar shuffled = to_grammar(corpus::permuted(n, rng));
  t0 = std::chrono::steady_clock::now();
  bool same = bisim_equal(g, shuffled);
  double tb = since(t0);
  o.check(tb < 10, "bisim_equal took " + std::to_string(tb) + " s");
  o.check(same, "permuted copy not bisimilar");
  o.check(iso_rooted(g, shuffled), "permuted copy not isomorphic");

  d << std::fixed << std::setprecision(2) << "; canonize " << tc << " s, find_center " << tf << " s (depth " << depth
    << "), bisim_equal " << tb << " s";
  o.detail = d.str();
  return o;
}

Outcome growth() {
  Outcome o;
  double worst = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (const auto& n : corpus::random_grammars(200, 2001, 10'000)) {
    Grammar g = to_grammar(n);
    double in = static_cast<double>(dedup_equal(normalize(ranked_grammar(g))).size());
    double out = static_cast<double>(canon_grammar(g).size());
    o.check(out <= 50 * in * in, "canon grows past 50|g|^2");
    worst = std::max(worst, out / in);
    double x = std::log(in), y = std::log(out);
    sx += x, sy += y, sxx += x * x, sxy += x * y, ++m;
  }
  double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  std::ostringstream d;
  d << std::fixed << std::setprecision(2) << "max |canon|/|g| = " << worst << ", log-log slope " << slope
    << " (empirical gate |canon| <= 50|g|^2)";
  o.detail = d.str();
  return o;
}

Outcome fingerprints() {
  Outcome o;
  SlpStore s;
  std::vector<RuleId> roots;
  for (const auto& n : corpus::random_grammars(20, 9001, 10'000)) {
    DflrSlps d(n, s);
    roots.push_back(d.tree(n.start()));
    // Same string, other rules: the dag of the value.
    NormalGrammar dag = normalize(tree_to_dag(eval(n)));
    DflrSlps dd(dag, s);
    roots.push_back(dd.tree(dag.start()));
    BigCount len = s.length(roots.back());
    if (len > 1) roots.push_back(slp_slice(s, roots.back(), 2, len));
  }
  std::vector<std::vector<std::string>> text;
  for (RuleId r : roots) text.push_back(slp_expand(s, r));
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    SlpComparator cmp(s, EqualityPolicy::fingerprint(3, seed));
    for (std::size_t i = 0; i < roots.size(); ++i)
      for (std::size_t j = i; j < roots.size(); ++j)
        o.check(cmp.equal(roots[i], roots[j]) == (text[i] == text[j]),
                "seed " + std::to_string(seed) + " pair " + std::to_string(i) + "," + std::to_string(j));
  }
  std::size_t same_length = 0;
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i; j < roots.size(); ++j) same_length += text[i].size() == text[j].size();
  o.detail = std::to_string(roots.size()) + " strings, " + std::to_string(o.checks) + " comparisons over seeds 1..100 (" +
             std::to_string(same_length) + " equal-length pairs per seed)";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "canonization oracle suite", canonization},
      {2, "isomorphism correctness", isomorphism},
      {3, "SLP primitives", slp_primitives},
      {4, "center + reroot", center_reroot},
      {5, "bisimulation", bisimulation},
      {6, "QBF reduction", qbf_reduction},
      {7, "counting claim", counting},
      {8, "scale demonstration", scale},
      {9, "polynomial growth", growth},
      {10, "fingerprint robustness", fingerprints},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    std::string error;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    bool pass = error.empty() && o.failures == 0;
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  " << std::setw(2) << c.id << "  " << c.name << ": ";
    if (!error.empty())
      std::cout << "threw: " << error;
    else
      std::cout << o.checks - o.failures << "/" << o.checks << " checks; " << o.detail;
    std::cout << std::fixed << std::setprecision(1) << " [" << since(t0) << " s]\n";
    if (o.failures) std::cout << "      first failure: " << o.first_failure << "\n";
    std::cout.flush();
  }
  return failed ? 1 : 0;
}
