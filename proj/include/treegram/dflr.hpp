#pragma once

#include <optional>
#include <vector>

#include "treegram/normal_grammar.hpp"
#include "treegram/slp.hpp"

namespace treegram {

/// dflr traversals of a normal grammar as SLPs, built on demand.
/// Rank 0: tree(A) derives dflr(val(A)). Rank 1: dflr(val(B(t))) =
/// prefix(B) dflr(t) suffix(B). Rules added to the grammar later are picked
/// up; a rule changed through set_rule after its SLP was built is not.
/// With `mangle_arity` every label is emitted as σ#k, which makes equal
/// strings imply equal trees for unranked grammars too.
class DflrSlps {
 public:
  DflrSlps(const NormalGrammar& g, SlpStore& store, bool mangle_arity = false)
      : g_(g), store_(store), mangle_(mangle_arity) {}

  RuleId tree(NtId a);
  RuleId prefix(NtId b);
  RuleId suffix(NtId b);

  const NormalGrammar& grammar() const { return g_; }
  SlpStore& store() { return store_; }

 private:
  static constexpr RuleId kNone = static_cast<RuleId>(-1);
  void build(NtId id);
  bool built(NtId id) const { return id < first_.size() && first_[id] != kNone; }

  const NormalGrammar& g_;
  SlpStore& store_;
  bool mangle_;
  // Rank 0: first_ is the tree rule. Rank 1: first_ is the prefix, second_ the suffix.
  std::vector<RuleId> first_;
  std::vector<RuleId> second_;
};

/// llex order and equality of the values of rank-0 nonterminals.
class ValueOrder {
 public:
  explicit ValueOrder(const NormalGrammar& g, EqualityPolicy policy = {}, LabelOrder order = {},
                      bool mangle_arity = false)
      : slps_(g, store_, mangle_arity), cmp_(store_, std::move(policy), std::move(order)) {}

  Ordering compare(NtId a, NtId b);
  bool equal(NtId a, NtId b);
  /// Equality of two rank-1 values.
  bool equal_contexts(NtId a, NtId b);

  DflrSlps& slps() { return slps_; }
  SlpComparator& comparator() { return cmp_; }

 private:
  SlpStore store_;
  DflrSlps slps_;
  SlpComparator cmp_;
};

Ordering compare_values(const NormalGrammar& g, NtId a, NtId b, const LabelOrder& ord = {},
                        const EqualityPolicy& policy = {});

/// Merges nonterminals with equal values (rank 0 and rank 1) and keeps the
/// part reachable from `roots`.
NormalGrammar dedup_equal(const NormalGrammar& g, const std::vector<NtId>& roots, const EqualityPolicy& policy = {},
                          std::vector<std::optional<NtId>>* remap = nullptr);
inline NormalGrammar dedup_equal(const NormalGrammar& g, const EqualityPolicy& policy = {}) {
  return dedup_equal(g, {g.start()}, policy);
}

}  // namespace treegram
