#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "treegram/bisim.hpp"
#include "treegram/canonize.hpp"
#include "treegram/error.hpp"
#include "treegram/grammar.hpp"
#include "treegram/normal_grammar.hpp"
#include "treegram/st.hpp"
#include "treegram/stats.hpp"
#include "treegram/unrooted.hpp"

using namespace treegram;

namespace {

struct Config {
  std::uint64_t seed = 0;
  unsigned primes = 3;
  std::string exact_threshold = "1000000";
  std::string max_nodes = "10000000";
  std::size_t budget_nodes = ExpansionBudget{}.max_nodes;
  std::size_t budget_inst = ExpansionBudget{}.max_instantiations;

  CanonOptions canon() const {
    CanonOptions o;
    o.policy.seed = seed;
    o.policy.prime_count = primes;
    o.policy.exact_threshold = number(exact_threshold, "--exact-threshold");
    return o;
  }
  ExpansionBudget budget() const { return {budget_nodes, budget_inst}; }
  BigCount limit() const { return number(max_nodes, "--max-nodes"); }

  static BigCount number(const std::string& s, const char* flag) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw ValidationError(std::string(flag) + " expects a non-negative integer, got '" + s + "'");
    return BigCount(s);
  }
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Grammar load(const std::string& path) {
  try {
    return parse_grammar(slurp(path));
  } catch (const SyntaxError& e) {
    throw Error(path + ": " + e.what());
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

class Timer {
 public:
  ~Timer() {
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    std::cerr << "time: " << ms << " ms\n";
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

NormalGrammar prepared(const Grammar& g, bool even) { return normalize(even ? even_grammar(g) : g); }

std::string stats_report(const Grammar& g) {
  std::ostringstream out;
  out << "start " << g.start() << " size " << size_of(g) << "\n";
  if (!g.linear() || g.kind() == GrammarKind::St) {
    for (const auto& name : g.topological_order())
      out << name << " rank " << g.rank(name) << " size " << size_of(g, name) << "\n";
    if (!g.linear()) return out.str();
  }
  NormalGrammar n = normalize(g);
  GrammarStats st(n);
  for (const auto& name : g.topological_order()) {
    auto id = n.find(name);
    if (!id) continue;
    if (n.rank(*id) == 0) {
      const TreeStats& t = st.tree(*id);
      out << name << " rank 0 size " << t.size << " height " << t.height << " diameter " << t.diameter << "\n";
    } else {
      const ContextStats& c = st.context(*id);
      out << name << " rank 1 size " << c.size << " height " << c.height << " diameter " << c.diameter << " rty "
          << c.rty << " ecc " << c.ecc << "\n";
    }
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trees compressed by straight-line tree grammars"};
  app.require_subcommand(1);
  Config cfg;
  app.add_option("--seed", cfg.seed, "Seed for fingerprint primes");
  app.add_option("--primes", cfg.primes, "Number of fingerprint primes")->check(CLI::PositiveNumber);
  app.add_option("--exact-threshold", cfg.exact_threshold, "Strings up to this length are compared exactly");
  app.add_option("--max-nodes", cfg.max_nodes, "Largest tree eval and --emit-tree will write");
  app.add_option("--budget-nodes", cfg.budget_nodes, "Dag node budget for st grammars")->check(CLI::PositiveNumber);
  app.add_option("--budget-inst", cfg.budget_inst, "Instantiations per nonterminal for st grammars")
      ->check(CLI::PositiveNumber);

  std::string in_a, in_b, out_path, path_text, formula, prefix = "qbf";
  bool unrooted = false, st = false, emit_tree = false, even = false, at_center = false;
  int verdict = 0;
  std::function<void()> action;

  auto* iso = app.add_subcommand("iso", "Unordered isomorphism; exit 0 if isomorphic, 1 if not");
  iso->add_option("a", in_a)->required();
  iso->add_option("b", in_b)->required();
  iso->add_flag("--unrooted", unrooted, "Compare as unrooted trees");
  iso->add_flag("--st", st, "Expand (possibly non-linear) st grammars first");
  iso->callback([&] {
    action = [&] {
      Timer timer;
      Grammar a = load(in_a), b = load(in_b);
      bool same;
      if (st) {
        a = st_to_dag(a, cfg.budget());
        b = st_to_dag(b, cfg.budget());
      }
      same = unrooted ? iso_unrooted(a, b, cfg.canon()) : iso_rooted(a, b, cfg.canon());
      std::cout << (same ? "ISO" : "NOT-ISO") << "\n";
      verdict = same ? 0 : 1;
    };
  });

  auto* bis = app.add_subcommand("bisim", "Bisimulation equivalence; exit 0 if equivalent, 1 if not");
  bis->add_option("a", in_a)->required();
  bis->add_option("b", in_b)->required();
  bis->add_flag("--st", st, "Expand (possibly non-linear) st grammars first");
  bis->callback([&] {
    action = [&] {
      Timer timer;
      Grammar a = load(in_a), b = load(in_b);
      bool same = st ? bisim_st(a, b, cfg.budget(), cfg.canon()) : bisim_equal(a, b, cfg.canon());
      std::cout << (same ? "BISIM" : "NOT-BISIM") << "\n";
      verdict = same ? 0 : 1;
    };
  });

  auto finish = [&](const NormalGrammar& n) {
    Grammar out = to_grammar(n);
    emit(out_path, write_grammar(out));
    if (emit_tree) std::cout << to_string(eval(out, cfg.limit())) << "\n";
  };

  auto* canon = app.add_subcommand("canon", "Grammar for the canonical ordered tree (ranked labels)");
  canon->add_option("input", in_a)->required();
  canon->add_option("-o,--output", out_path, "Output grammar file (default stdout)");
  canon->add_flag("--emit-tree", emit_tree, "Also print the canonical tree");
  canon->callback([&] { action = [&] { finish(canon_grammar(load(in_a), cfg.canon())); }; });

  auto* bcanon = app.add_subcommand("bcanon", "Grammar for the bisimulation canon");
  bcanon->add_option("input", in_a)->required();
  bcanon->add_option("-o,--output", out_path, "Output grammar file (default stdout)");
  bcanon->add_flag("--emit-tree", emit_tree, "Also print the tree");
  bcanon->callback([&] {
    action = [&] { finish(canon_grammar(to_grammar(bcanon_grammar(load(in_a), cfg.canon())), cfg.canon())); };
  });

  auto* center = app.add_subcommand("center", "Compressed path to the center of the unrooted tree");
  center->add_option("input", in_a)->required();
  center->add_flag("--even", even, "Subdivide every edge first");
  center->callback([&] {
    action = [&] {
      NormalGrammar n = prepared(load(in_a), even);
      CompressedPath p = find_center(n);
      ResolvedAddress a = resolve_path(n, p);
      std::cout << format_path(n, p) << "\ndepth " << a.depth() << "\naddress " << a.to_string() << "\n";
    };
  });

  auto* rr = app.add_subcommand("reroot", "Re-root the unrooted tree at a node");
  rr->add_option("input", in_a)->required();
  auto* path_opt = rr->add_option("--path", path_text, "Compressed path, e.g. 'S@1 / A@ε'");
  auto* center_opt = rr->add_flag("--at-center", at_center, "Re-root at the center");
  path_opt->excludes(center_opt);
  rr->add_flag("--even", even, "Subdivide every edge first");
  rr->add_option("-o,--output", out_path, "Output grammar file (default stdout)");
  rr->callback([&] {
    if (path_text.empty() && !at_center) throw CLI::ValidationError("reroot needs --path or --at-center");
    action = [&] {
      NormalGrammar n = prepared(load(in_a), even);
      CompressedPath p = at_center ? find_center(n) : parse_path(n, path_text);
      emit(out_path, write_grammar(to_grammar(reroot(n, p))));
    };
  });

  auto* stats = app.add_subcommand("stats", "Exact size, height, diameter, rty and ecc per nonterminal");
  stats->add_option("input", in_a)->required();
  stats->callback([&] { action = [&] { std::cout << stats_report(load(in_a)); }; });

  auto* ev = app.add_subcommand("eval", "Decompress to a term");
  ev->add_option("input", in_a)->required();
  ev->add_option("-o,--output", out_path, "Output term file (default stdout)");
  ev->callback([&] { action = [&] { emit(out_path, to_string(eval(load(in_a), cfg.limit())) + "\n"); }; });

  auto* comp = app.add_subcommand("compress", "Dag grammar for a term file");
  comp->add_option("input", in_a)->required();
  comp->add_option("-o,--output", out_path, "Output grammar file (default stdout)");
  comp->callback([&] { action = [&] { emit(out_path, write_grammar(tree_to_dag(parse_term(slurp(in_a))))); }; });

  auto* qbf = app.add_subcommand("qbf", "Write the st grammar pair for a QBF and print its truth");
  qbf->add_option("formula", formula)->required();
  qbf->add_option("-o,--output", prefix, "Output prefix; writes <prefix>.A.st and <prefix>.B.st");
  qbf->callback([&] {
    action = [&] {
      Qbf f = qbf_parse(formula);
      auto [a, b] = qbf_to_st(f);
      emit(prefix + ".A.st", write_grammar(a));
      emit(prefix + ".B.st", write_grammar(b));
      std::cout << "TRUTH: " << (qbf_eval(f) ? "true" : "false") << "\n";
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return verdict;
}
