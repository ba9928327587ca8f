#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "treegram/bigcount.hpp"
#include "treegram/tree.hpp"

namespace treegram {

/// `Name(p1,...,pk) = rhs`. Parameters are leaves of rhs labelled by a name in `params`.
struct Production {
  std::string name;
  std::vector<std::string> params;
  Tree rhs;
};

enum class GrammarKind { Slt, St };

/// Straight-line context-free tree grammar. Construction validates the
/// productions and drops those unreachable from the start symbol.
class Grammar {
 public:
  Grammar() = default;
  /// An empty `start` selects the first production.
  Grammar(GrammarKind kind, std::vector<Production> productions, std::string start = {});

  GrammarKind kind() const { return kind_; }
  /// Every parameter occurs at most once per right-hand side.
  bool linear() const { return linear_; }
  const std::string& start() const { return start_; }
  const std::vector<Production>& productions() const { return productions_; }

  const Production* find(std::string_view name) const;
  const Production& at(std::string_view name) const;
  bool is_nonterminal(std::string_view name) const { return find(name) != nullptr; }
  std::size_t rank(std::string_view name) const { return at(name).params.size(); }

  /// Nonterminals with every callee before its callers.
  std::vector<std::string> topological_order() const;
  /// Labels of terminal nodes over all right-hand sides.
  std::set<std::string> terminal_labels() const;
  /// Total number of nodes over all right-hand sides.
  std::size_t size() const;

 private:
  GrammarKind kind_ = GrammarKind::Slt;
  bool linear_ = true;
  std::string start_;
  std::vector<Production> productions_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Hands out `_N<k>` names that avoid every name marked as taken.
class NameAllocator {
 public:
  NameAllocator() = default;
  explicit NameAllocator(const std::set<std::string>& taken) : taken_(taken.begin(), taken.end()) {}
  void reserve(const std::string& name) { taken_.insert(name); }
  bool taken(const std::string& name) const { return taken_.count(name) != 0; }
  std::string fresh(const std::string& prefix = "_N");

 private:
  std::unordered_set<std::string> taken_;
  std::size_t counter_ = 0;
};

/// Reads the `slt v1` / `st v1` file format.
Grammar parse_grammar(std::string_view text);
std::string write_grammar(const Grammar& g);

/// |val_G(A)|; a parameter leaf counts as one node.
BigCount size_of(const Grammar& g, std::string_view nonterminal);
inline BigCount size_of(const Grammar& g) { return size_of(g, g.start()); }

/// val(G). Throws LimitError (reporting the exact size) above `max_nodes`.
Tree eval(const Grammar& g, const BigCount& max_nodes = BigCount(10'000'000));

/// Terminal σ with k children in a right-hand side becomes σ#k.
Grammar ranked_grammar(const Grammar& g);
/// Every terminal already reads σ#k with k its child count (output of canon).
bool is_ranked(const Grammar& g);
/// g itself when is_ranked(g), ranked_grammar(g) otherwise.
Grammar ensure_ranked(const Grammar& g);
/// Subdivides every edge of the derived tree with a node labelled '#'.
Grammar even_grammar(const Grammar& g);
/// Hash-consed dag of t as a grammar with rank-0 nonterminals only.
Grammar tree_to_dag(const Tree& t);

/// The grammar whose only production is `S = t` (S renamed if t uses it).
Grammar tree_grammar(const Tree& t);

}  // namespace treegram
