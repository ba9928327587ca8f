#pragma once

#include <variant>
#include <vector>

#include "treegram/bigcount.hpp"
#include "treegram/normal_grammar.hpp"
#include "treegram/tree.hpp"

// Size, height, eccentricity and diameter of compressed trees and contexts.
// Heights are in edges; the maximum over an empty set is -1.

namespace treegram {

struct TreeStats {
  BigCount size = 1;
  BigCount height = 0;
  BigCount diameter = 0;
  friend bool operator==(const TreeStats&, const TreeStats&) = default;
};

/// Statistics of a context t(y); y counts as a node (a leaf).
struct ContextStats {
  BigCount size = 1;
  BigCount rty = 0;       // distance from the root to y
  BigCount ecc = 0;       // eccentricity of y
  BigCount height = 0;    // height with y as an ordinary leaf
  BigCount diameter = 0;  // diameter with y as an ordinary leaf
  friend bool operator==(const ContextStats&, const ContextStats&) = default;
};

/// σ(s1,...,sk).
TreeStats node_stats(const std::vector<const TreeStats*>& children);
/// σ(s1,...,y,...,sk) where `children` excludes y.
ContextStats hole_node_stats(const std::vector<const TreeStats*>& children);
/// outer(inner(y)).
ContextStats compose(const ContextStats& outer, const ContextStats& inner);
/// ctx(arg).
TreeStats apply(const ContextStats& ctx, const TreeStats& arg);
inline ContextStats identity_context() { return {}; }

/// Per-nonterminal statistics of a normal grammar. Extends itself to rules
/// added after construction when update() is called.
class GrammarStats {
 public:
  explicit GrammarStats(const NormalGrammar& g) { update(g); }
  void update(const NormalGrammar& g);

  const TreeStats& tree(NtId id) const { return trees_[id]; }
  const ContextStats& context(NtId id) const { return contexts_[id]; }
  const BigCount& size(NtId id) const { return ranks_[id] ? contexts_[id].size : trees_[id].size; }

 private:
  std::vector<TreeStats> trees_;
  std::vector<ContextStats> contexts_;
  std::vector<char> ranks_;
  std::vector<char> done_;
};

/// Statistics of a mixed term: TreeStats without a hole, ContextStats with one.
std::variant<TreeStats, ContextStats> mixed_stats(const GrammarStats& stats, const MixedTerm& t);

// Explicit counterparts on decompressed trees. A context is given as a tree
// with exactly one leaf labelled `hole`.
TreeStats explicit_tree_stats(const Tree& t);
ContextStats explicit_context_stats(const Tree& t, const std::string& hole);

}  // namespace treegram
