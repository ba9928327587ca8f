#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "treegram/grammar.hpp"

namespace treegram {

using NtId = std::uint32_t;

/// The four production shapes.
enum class RuleType : std::uint8_t {
  Node = 1,         // A -> σ(A1,...,Ak)
  Apply = 2,        // A -> B(C)
  ContextNode = 3,  // A(y) -> σ(A1,...,Ai,y,Ai+1,...,Ak)
  Compose = 4,      // A(y) -> B(C(y))
};

struct NormalRule {
  RuleType type = RuleType::Node;
  std::string label;       // Node, ContextNode
  std::vector<NtId> args;  // Node, ContextNode: rank-0 children without the hole
  std::size_t hole = 0;    // ContextNode: number of arguments left of y
  NtId head = 0;           // Apply, Compose: B
  NtId arg = 0;            // Apply, Compose: C

  std::size_t rank() const { return type == RuleType::ContextNode || type == RuleType::Compose ? 1 : 0; }
  friend bool operator==(const NormalRule&, const NormalRule&) = default;

  static NormalRule node(std::string label, std::vector<NtId> args) {
    return {RuleType::Node, std::move(label), std::move(args), 0, 0, 0};
  }
  static NormalRule context(std::string label, std::vector<NtId> args, std::size_t hole) {
    return {RuleType::ContextNode, std::move(label), std::move(args), hole, 0, 0};
  }
  static NormalRule apply(NtId head, NtId arg) { return {RuleType::Apply, {}, {}, 0, head, arg}; }
  static NormalRule compose(NtId head, NtId arg) { return {RuleType::Compose, {}, {}, 0, head, arg}; }
};

/// Linear grammar in normal form; every nonterminal has rank 0 or 1.
/// Structurally identical rules are shared (hash-consing through intern()).
class NormalGrammar {
 public:
  std::size_t count() const { return rules_.size(); }
  const NormalRule& rule(NtId id) const { return rules_[id]; }
  const std::string& name(NtId id) const { return names_[id]; }
  std::size_t rank(NtId id) const { return rules_[id].rank(); }
  std::optional<NtId> find(const std::string& name) const;

  NtId start() const { return start_; }
  void set_start(NtId id) { start_ = id; }

  /// Returns the existing nonterminal with an identical rule, or adds one
  /// named `preferred` when that name is free (a fresh name otherwise).
  NtId intern(const NormalRule& rule, const std::string& preferred = {});
  /// Adds a rule even if an identical one exists. Empty name = fresh.
  NtId add(const NormalRule& rule, const std::string& name = {});
  void set_rule(NtId id, const NormalRule& rule);
  void rename(NtId id, const std::string& name);

  /// Reserves a name (or label) so fresh names never collide with it.
  void reserve_name(const std::string& name) { names_alloc_.reserve(name); }

  /// Direct callees in right-hand-side order.
  std::vector<NtId> children(NtId id) const;
  /// Nonterminals reachable from `roots`, callees first.
  std::vector<NtId> topological_order(const std::vector<NtId>& roots) const;
  std::vector<NtId> topological_order() const { return topological_order({start_}); }
  /// Every nonterminal, callees first.
  std::vector<NtId> full_topological_order() const;

  /// Total number of right-hand-side nodes (type 1: 1+k, 2: 2, 3: 2+k, 4: 3).
  std::size_t size() const;
  std::set<std::string> labels() const;

 private:
  static std::string key(const NormalRule& rule);

  std::vector<NormalRule> rules_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, NtId> by_name_;
  std::unordered_map<std::string, NtId> by_rule_;
  std::set<std::string> labels_;
  NameAllocator names_alloc_;
  NtId start_ = 0;
};

/// A context reference while flattening: identity, a rank-1 nonterminal, or a
/// constant context that discards its argument.
struct ContextRef {
  enum class Kind { Identity, Nonterminal, Constant } kind = Kind::Identity;
  NtId id = 0;
};

NtId apply_context(NormalGrammar& g, ContextRef ctx, NtId arg);
ContextRef compose_contexts(NormalGrammar& g, ContextRef outer, ContextRef inner);

/// Tree over terminals, grammar nonterminals and at most one hole.
struct MixedTerm {
  enum class Kind { Terminal, Nonterminal, Hole } kind = Kind::Terminal;
  std::string label;  // Terminal
  NtId nt = 0;        // Nonterminal
  std::vector<MixedTerm> children;
  bool marked = false;

  static MixedTerm terminal(std::string label, std::vector<MixedTerm> kids = {}) {
    return {Kind::Terminal, std::move(label), 0, std::move(kids), false};
  }
  static MixedTerm nonterminal(NtId id, std::vector<MixedTerm> kids = {}) {
    return {Kind::Nonterminal, {}, id, std::move(kids), false};
  }
  static MixedTerm hole() { return {Kind::Hole, {}, 0, {}, false}; }
  bool has_hole() const;
};

/// Right-hand side of a rule as a mixed term (the hole stands for y).
MixedTerm rule_term(const NormalGrammar& g, NtId id);
/// Interns a hole-free mixed term as a rank-0 nonterminal.
NtId build_tree(NormalGrammar& g, const MixedTerm& t);
/// Interns a mixed term with exactly one hole as a context.
ContextRef build_context(NormalGrammar& g, const MixedTerm& t);
/// Expands a hole-free mixed term to an explicit tree (bounded by max_nodes).
Tree eval_term(const NormalGrammar& g, const MixedTerm& t, const BigCount& max_nodes = BigCount(10'000'000));
std::string to_string(const NormalGrammar& g, const MixedTerm& t);

/// Flattens a linear grammar with nonterminal ranks <= 1 into normal form.
NormalGrammar normalize(const Grammar& g);
/// Writes a normal grammar as an slt grammar (only the part reachable from `roots`).
Grammar to_grammar(const NormalGrammar& g);

/// Copies the part of `src` reachable from `root` into `dst`, sharing
/// identical rules. `memo` maps src ids to dst ids (sized on demand).
NtId import_into(NormalGrammar& dst, const NormalGrammar& src, NtId root, std::vector<std::optional<NtId>>& memo);

/// The part reachable from `roots` with compact ids; `remap[old]` gives the new id.
NormalGrammar prune(const NormalGrammar& g, const std::vector<NtId>& roots, std::vector<std::optional<NtId>>* remap = nullptr);
inline NormalGrammar prune(const NormalGrammar& g) { return prune(g, {g.start()}); }

/// Terminal σ of a type-1 rule with k arguments becomes σ#k; type 3 becomes σ#(k+1).
NormalGrammar ranked(const NormalGrammar& g);

/// val of a rank-0 nonterminal.
Tree eval(const NormalGrammar& g, NtId id, const BigCount& max_nodes = BigCount(10'000'000));
inline Tree eval(const NormalGrammar& g) { return eval(g, g.start()); }
/// |val| of every nonterminal, indexed by id (the parameter counts as a node).
std::vector<BigCount> sizes(const NormalGrammar& g);

/// Production-by-production dump used for diagnostics and golden output.
std::string to_string(const NormalGrammar& g);

}  // namespace treegram
