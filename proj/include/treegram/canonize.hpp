#pragma once

#include <vector>

#include "treegram/grammar.hpp"
#include "treegram/normal_grammar.hpp"
#include "treegram/slp.hpp"

namespace treegram {

struct CanonOptions {
  EqualityPolicy policy;
  LabelOrder order;
  /// Re-verify every breakpoint with two extra comparisons; throws Error on failure.
  bool check_breakpoints = false;
};

/// Grammar for canon(val(g)). Expects ranked labels; without them the output
/// still has sorted children but dflr comparisons may tie unequal trees.
NormalGrammar canonize(const NormalGrammar& g, const CanonOptions& options = {});

/// Canonizes every value in `roots` inside one grammar. `new_roots` receives
/// the ids of the roots in the returned grammar.
NormalGrammar canonize_all(const NormalGrammar& g, const std::vector<NtId>& roots, std::vector<NtId>& new_roots,
                           const CanonOptions& options = {});

/// ensure_ranked, normalize, dedup_equal and canonize.
NormalGrammar canon_grammar(const Grammar& g, const CanonOptions& options = {});

/// Strips the rank suffix from every label ("f#2" back to "f").
NormalGrammar unranked(const NormalGrammar& g);

/// Whether uo(val(a)) and uo(val(b)) are isomorphic.
bool iso_rooted(const Grammar& a, const Grammar& b, const CanonOptions& options = {});
/// Same for normal grammars with ranked labels.
bool iso_rooted(const NormalGrammar& a, const NormalGrammar& b, const CanonOptions& options = {});

}  // namespace treegram
