#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treegram/canonize.hpp"
#include "treegram/grammar.hpp"

namespace treegram {

struct ExpansionBudget {
  std::size_t max_nodes = 1'000'000;
  /// Distinct argument tuples a single nonterminal may be instantiated with.
  std::size_t max_instantiations = 100'000;
};

/// Dag (rank-0 grammar) for val(g); g may be non-linear. Each nonterminal is
/// instantiated once per distinct tuple of argument nodes. Throws LimitError
/// past the budget.
Grammar st_to_dag(const Grammar& g, const ExpansionBudget& budget = {});

bool iso_st(const Grammar& a, const Grammar& b, const ExpansionBudget& budget = {}, const CanonOptions& options = {});
bool bisim_st(const Grammar& a, const Grammar& b, const ExpansionBudget& budget = {},
              const CanonOptions& options = {});

/// Prenex QBF with the matrix in negation normal form.
struct Qbf {
  struct Quantifier {
    bool forall = false;
    std::string var;
  };
  struct Node {
    enum class Kind { Literal, And, Or } kind = Kind::Literal;
    std::size_t var = 0;  // index into prefix
    bool negated = false;
    std::vector<Node> children;
  };
  std::vector<Quantifier> prefix;
  Node matrix;
};

/// `A z. E w. (z | !w) & (w | !z)`. Negations are pushed to the variables.
Qbf qbf_parse(std::string_view text);
std::string to_string(const Qbf& f);
/// Exhaustive evaluation; at most 24 variables.
bool qbf_eval(const Qbf& f);

enum class LiteralGadget {
  Fixed,  // A_z(z) = f(z,1), B_z(z) = f(1,1); A_!z(z) = f(z,0), B_!z(z) = f(0,0)
  Paper,  // A_z(z) = f(z,1), B_z(z) = f(1,z): isomorphic for both values of z
};

/// ST grammars (G1, G2) with val(G1) isomorphic to val(G2) iff f is true.
std::pair<Grammar, Grammar> qbf_to_st(const Qbf& f, LiteralGadget gadget = LiteralGadget::Fixed);

}  // namespace treegram
