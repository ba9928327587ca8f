#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "treegram/bigcount.hpp"
#include "treegram/label.hpp"

namespace treegram {

/// Dense ids for labels shared by SLP stores.
class LabelInterner {
 public:
  std::uint32_t id(std::string_view label);
  const std::string& label(std::uint32_t id) const { return labels_[id]; }
  std::size_t size() const { return labels_.size(); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

/// A symbol is a rule id (>= 0) or a terminal (< 0, encoding a label id).
using SlpSymbol = std::int64_t;
using RuleId = std::uint32_t;

/// Straight-line program store. A rule may only mention rules added before
/// it, so insertion order is a valid bottom-up order.
class SlpStore {
 public:
  explicit SlpStore(std::shared_ptr<LabelInterner> labels = std::make_shared<LabelInterner>())
      : labels_(std::move(labels)) {}

  static SlpSymbol terminal_symbol(std::uint32_t label_id) { return -static_cast<SlpSymbol>(label_id) - 1; }
  static bool is_terminal(SlpSymbol s) { return s < 0; }
  static std::uint32_t terminal_id(SlpSymbol s) { return static_cast<std::uint32_t>(-(s + 1)); }
  static SlpSymbol rule_symbol(RuleId r) { return static_cast<SlpSymbol>(r); }

  SlpSymbol terminal(std::string_view label) { return terminal_symbol(labels_->id(label)); }
  const std::string& label(SlpSymbol terminal) const { return labels_->label(terminal_id(terminal)); }

  RuleId add(std::vector<SlpSymbol> rhs);
  const std::vector<SlpSymbol>& rhs(RuleId r) const { return rules_[r]; }
  const BigCount& length(RuleId r) const { return lengths_[r]; }
  BigCount length_of(SlpSymbol s) const { return is_terminal(s) ? BigCount(1) : lengths_[static_cast<RuleId>(s)]; }
  std::size_t rule_count() const { return rules_.size(); }

  LabelInterner& labels() { return *labels_; }
  const std::shared_ptr<LabelInterner>& shared_labels() const { return labels_; }

  /// Debug dump of the rules reachable from `root`: `R3 = a R1 R2`.
  std::string dump(RuleId root) const;

 private:
  std::shared_ptr<LabelInterner> labels_;
  std::vector<std::vector<SlpSymbol>> rules_;
  std::vector<BigCount> lengths_;
};

inline const BigCount& slp_length(const SlpStore& s, RuleId root) { return s.length(root); }

/// Rule for val(root)[l..r] (1-based, inclusive; l = r + 1 gives the empty string).
RuleId slp_slice(SlpStore& s, RuleId root, const BigCount& l, const BigCount& r);
/// i-th symbol (1-based) of val(root); always a terminal.
SlpSymbol slp_symbol_at(const SlpStore& s, RuleId root, const BigCount& i);
/// Labels of val(root). Throws LimitError above max_length.
std::vector<std::string> slp_expand(const SlpStore& s, RuleId root, const BigCount& max_length = BigCount(10'000'000));

/// Left-to-right streaming over val(root).
class SlpCursor {
 public:
  SlpCursor(const SlpStore& s, RuleId root) : store_(s) { stack_.push_back({root, 0}); }
  /// Next terminal, or false at the end.
  bool next(SlpSymbol& out);

 private:
  struct Frame {
    RuleId rule;
    std::size_t index;
  };
  const SlpStore& store_;
  std::vector<Frame> stack_;
};

/// How string equality is decided.
struct EqualityPolicy {
  enum class Mode { Fingerprint, Exact, Hybrid };
  Mode mode = Mode::Hybrid;
  unsigned prime_count = 3;
  std::uint64_t seed = 0;
  /// Exact mode refuses longer strings; hybrid mode compares exactly up to it.
  BigCount exact_threshold = 1'000'000;

  static EqualityPolicy fingerprint(unsigned primes, std::uint64_t seed) {
    return {Mode::Fingerprint, primes, seed, 0};
  }
  static EqualityPolicy exact(const BigCount& max_length) { return {Mode::Exact, 0, 0, max_length}; }
};

/// Karp-Rabin fingerprints modulo `prime_count` random primes below 2^62.
class Fingerprinter {
 public:
  Fingerprinter(const SlpStore& store, std::uint64_t seed, unsigned prime_count);

  using Print = std::vector<std::uint64_t>;
  /// Fingerprint of the whole rule (extends the tables to new rules first).
  Print of(RuleId r);
  /// Fingerprint of the first n symbols of val(r).
  Print prefix(RuleId r, const BigCount& n);
  const std::vector<std::uint64_t>& primes() const { return primes_; }

 private:
  void extend();
  std::uint64_t terminal_value(std::size_t k, std::uint32_t label_id) const;

  const SlpStore& store_;
  std::uint64_t seed_;
  std::vector<std::uint64_t> primes_;
  std::vector<std::uint64_t> bases_;
  // Row-major: [rule * prime_count + k].
  std::vector<std::uint64_t> hash_;
  std::vector<std::uint64_t> power_;
  std::size_t computed_ = 0;
};

/// Equality and llex order of SLP values under one policy and label order.
class SlpComparator {
 public:
  SlpComparator(SlpStore& store, EqualityPolicy policy = {}, LabelOrder order = {});

  bool equal(RuleId a, RuleId b);
  Ordering compare(RuleId a, RuleId b);
  SlpStore& store() { return store_; }
  const EqualityPolicy& policy() const { return policy_; }
  const LabelOrder& order() const { return order_; }

 private:
  bool use_exact(const BigCount& length) const;
  Ordering exact_compare(RuleId a, RuleId b, bool equality_only);
  Fingerprinter& prints();

  SlpStore& store_;
  EqualityPolicy policy_;
  LabelOrder order_;
  std::unique_ptr<Fingerprinter> prints_;
};

bool slp_equal(SlpStore& s, RuleId a, RuleId b, const EqualityPolicy& policy = {});
Ordering slp_compare_llex(SlpStore& s, RuleId a, RuleId b, const LabelOrder& ord = {},
                          const EqualityPolicy& policy = {});

/// Primality for 64-bit integers (deterministic Miller-Rabin).
bool is_prime_u64(std::uint64_t n);

}  // namespace treegram
