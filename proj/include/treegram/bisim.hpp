#pragma once

#include "treegram/canonize.hpp"
#include "treegram/grammar.hpp"
#include "treegram/normal_grammar.hpp"

namespace treegram {

/// Grammar whose unordered value is isomorphic to bcanon(val(g)).
/// Expects plain labels: arity suffixes would go stale when children are dropped.
NormalGrammar bcanon_grammar(const NormalGrammar& g, const CanonOptions& options = {});
/// normalize, then bcanon_grammar.
NormalGrammar bcanon_grammar(const Grammar& g, const CanonOptions& options = {});

/// Whether uo(val(a)) and uo(val(b)) are bisimulation equivalent.
bool bisim_equal(const Grammar& a, const Grammar& b, const CanonOptions& options = {});

}  // namespace treegram
