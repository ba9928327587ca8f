#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "treegram/normal_grammar.hpp"

namespace treegram {

struct RandomParams {
  std::size_t nonterminals = 10;
  /// Maximum number of rank-0 arguments of type-1 and type-3 rules.
  std::size_t max_arity = 3;
  std::vector<std::string> labels = {"a", "b", "c"};
};

/// Random normal-form grammar, deterministic in `seed`. Nonterminals that end
/// up unreachable from the start are dropped, so the count is an upper bound.
NormalGrammar gen_random(std::uint64_t seed, const RandomParams& params = {});

}  // namespace treegram
