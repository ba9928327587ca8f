#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "treegram/label.hpp"

namespace treegram {

/// Explicit ordered rooted node-labelled tree.
struct Tree {
  std::string label;
  std::vector<Tree> children;

  Tree() = default;
  explicit Tree(std::string l) : label(std::move(l)) {}
  Tree(std::string l, std::vector<Tree> c) : label(std::move(l)), children(std::move(c)) {}

  bool is_leaf() const { return children.empty(); }
  friend bool operator==(const Tree&, const Tree&) = default;
};

/// Child indices from the root, 1-based. Empty addresses the root.
using DeweyAddress = std::vector<std::size_t>;

/// "1.2.1", or "ε" for the root.
std::string format_address(const DeweyAddress& address);

/// Parses `term := sym | sym '(' term (',' term)* ')'`.
Tree parse_term(std::string_view text);

/// Canonical term text with minimal whitespace.
std::string to_string(const Tree& t);

std::size_t tree_size(const Tree& t);

/// Height in edges; a single node has height 0.
std::size_t tree_height(const Tree& t);

/// Depth-first left-to-right traversal.
std::vector<std::string> dflr(const Tree& t);

/// Relabels every node σ with k children to σ#k.
Tree ranked_tree(const Tree& t);

/// Length-lexicographic order on dflr traversals.
Ordering llex_compare_trees(const Tree& s, const Tree& t, const LabelOrder& ord = {});

/// Length-lexicographic comparison of label sequences.
Ordering llex_compare(const std::vector<std::string>& a, const std::vector<std::string>& b,
                      const LabelOrder& ord = {});

/// The node at `address`; throws ValidationError if it is not in D(t).
const Tree& subtree_at(const Tree& t, const DeweyAddress& address);

bool has_address(const Tree& t, const DeweyAddress& address);

}  // namespace treegram
