#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "treegram/canonize.hpp"
#include "treegram/normal_grammar.hpp"
#include "treegram/slp.hpp"
#include "treegram/tree.hpp"

namespace treegram {

/// One pair (A, u): a nonterminal and an address into the right-hand side of
/// its rule, read as a tree (type 2 and 4: B is at ε, C at 1).
struct PathStep {
  NtId nt = 0;
  DeweyAddress address;
  friend bool operator==(const PathStep&, const PathStep&) = default;
};
using CompressedPath = std::vector<PathStep>;

/// `A@1.2 / B@ε / C@2`.
std::string format_path(const NormalGrammar& g, const CompressedPath& p);
CompressedPath parse_path(const NormalGrammar& g, std::string_view text);
/// Throws ValidationError unless p is a (full, if requested) compressed path of g.
void validate_path(const NormalGrammar& g, const CompressedPath& p, bool full = true);

/// Replaces the hole of `t` by `arg`.
MixedTerm plug(MixedTerm t, MixedTerm arg);

/// State of one recursive call of the center search: val(left[nt[right]]) = val(g).
struct CenterStep {
  MixedTerm left;
  NtId nt = 0;
  std::optional<MixedTerm> right;
  CompressedPath path;
};
using CenterObserver = std::function<void(const CenterStep&)>;

/// Compressed path to the center of the unrooted value. Needs an even
/// diameter (see even_grammar); throws Error otherwise.
CompressedPath find_center(const NormalGrammar& g, const CenterObserver& observer = {});

/// Dewey address of the node a path denotes, as an SLP over step labels "1", "2", ...
struct ResolvedAddress {
  SlpStore store;
  RuleId root = 0;
  BigCount depth() const { return store.length(root); }
  /// Throws LimitError above max_depth.
  DeweyAddress expand(const BigCount& max_depth = BigCount(10'000'000)) const;
  /// Dotted address, or a length summary when longer than max_steps.
  std::string to_string(std::size_t max_steps = 64) const;
};
ResolvedAddress resolve_path(const NormalGrammar& g, const CompressedPath& p);

/// ex_G(p): a mixed tree with a terminal root, the address u of the node the
/// path denotes, its label σ and the root label δ.
struct Expansion {
  MixedTerm tree;
  DeweyAddress u;
  std::string sigma;
  std::string delta;
};
Expansion expand_path(const NormalGrammar& g, const CompressedPath& p);

/// Reverses the root-to-hole path of a context. Rank-1 nonterminals are
/// replaced by primed copies that are added to g.
MixedTerm rooty(NormalGrammar& g, const MixedTerm& context);
/// B' with val(B') = rooty(val(B)).
NtId primed(NormalGrammar& g, NtId b);

/// Grammar whose value, as a rooted unordered tree, is the unrooted value of g
/// rooted at the node p denotes. Labels must not be rank-mangled.
NormalGrammar reroot(const NormalGrammar& g, const CompressedPath& p);

/// Isomorphism of the unrooted unordered values.
bool iso_unrooted(const Grammar& a, const Grammar& b, const CanonOptions& options = {});

}  // namespace treegram
