#include "treegram/canonize.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "treegram/dflr.hpp"
#include "treegram/error.hpp"
#include "treegram/stats.hpp"

namespace treegram {

namespace {

class Canonizer {
 public:
  Canonizer(NormalGrammar& g, const CanonOptions& options)
      : g_(g), options_(options), values_(g, options.policy, options.order), stats_(g) {}

  void run(const std::vector<NtId>& roots) {
    for (NtId z : g_.topological_order(roots)) {
      if (g_.rank(z) != 0) continue;
      if (g_.rule(z).type == RuleType::Node)
        sort_node(z);
      else
        spine_phase(z);
    }
  }

 private:
  bool less(NtId a, NtId b) { return values_.compare(a, b) == Ordering::Less; }

  void sort_node(NtId z) {
    NormalRule r = g_.rule(z);
    std::vector<NtId> sorted = r.args;
    std::stable_sort(sorted.begin(), sorted.end(), [&](NtId a, NtId b) { return less(a, b); });
    if (sorted == r.args) return;
    r.args = std::move(sorted);
    g_.set_rule(z, r);
  }

  BigCount size(NtId id) {
    if (id >= g_.count() || id >= known_) {
      stats_.update(g_);
      known_ = g_.count();
    }
    return stats_.size(id);
  }
  // Number of non-hole nodes of a context.
  BigCount weight(NtId id) { return size(id) - 1; }

  // Number of type-3 rules on the spine of a rank-1 nonterminal.
  BigCount spine_length(NtId id) {
    if (spine_len_.size() < g_.count()) spine_len_.resize(g_.count(), -1);
    if (spine_len_[id] >= 0) return spine_len_[id];
    const NormalRule& r = g_.rule(id);
    BigCount len = 1;
    if (r.type != RuleType::ContextNode) {
      NtId head = r.head, arg = r.arg;
      len = spine_length(head);
      len += spine_length(arg);
    }
    spine_len_[id] = len;
    return len;
  }

  void spine_leaves(NtId id, std::vector<char>& seen, std::vector<NtId>& out) {
    std::vector<NtId> stack{id};
    while (!stack.empty()) {
      NtId n = stack.back();
      stack.pop_back();
      if (n < seen.size() && seen[n]) continue;
      if (seen.size() <= n) seen.resize(g_.count(), 0);
      seen[n] = 1;
      const NormalRule& r = g_.rule(n);
      if (r.type == RuleType::ContextNode) {
        out.push_back(n);
      } else {
        stack.push_back(r.arg);
        stack.push_back(r.head);
      }
    }
  }

  // Longest spine prefix of `b` whose weight is at most `budget`: (length, weight).
  std::pair<BigCount, BigCount> prefix_within(NtId b, const BigCount& budget) {
    BigCount q = 0, left = budget;
    NtId n = b;
    for (;;) {
      const NormalRule& r = g_.rule(n);
      if (r.type == RuleType::ContextNode) {
        BigCount w = weight(n);
        if (w <= left) {
          q += 1;
          left -= w;
        }
        break;
      }
      BigCount wh = weight(r.head);
      if (wh <= left) {
        q += spine_length(r.head);
        left -= wh;
        n = r.arg;
      } else {
        n = r.head;
      }
    }
    return {q, budget - left};
  }

  // Interval index of the tree plugged into spine position k.
  std::size_t block(const BigCount& k) const {
    auto it = std::partition_point(breaks_.begin(), breaks_.end(), [&](const BigCount& kj) { return kj > k; });
    return static_cast<std::size_t>(it - breaks_.begin());
  }

  NtId reorder(NtId b, std::size_t i) {
    const NormalRule& r = g_.rule(b);
    std::vector<NtId> sorted = r.args;
    std::stable_sort(sorted.begin(), sorted.end(), [&](NtId x, NtId y) { return rank_.at(x) < rank_.at(y); });
    std::size_t nu = 0;
    for (NtId x : sorted)
      if (rank_.at(x) <= i) ++nu;
    if (sorted == r.args && nu == r.hole) return b;
    return g_.intern(NormalRule::context(r.label, std::move(sorted), nu));
  }

  NtId whole(NtId n, std::size_t i) {
    auto key = std::make_pair(n, i);
    if (auto it = whole_.find(key); it != whole_.end()) return it->second;
    NtId out;
    NormalRule r = g_.rule(n);
    if (r.type == RuleType::ContextNode) {
      out = reorder(n, i);
    } else {
      NtId h = whole(r.head, i);
      NtId c = whole(r.arg, i);
      out = h == r.head && c == r.arg ? n : g_.intern(NormalRule::compose(h, c));
    }
    whole_.emplace(key, out);
    return out;
  }

  // Reordered copy of spine positions [lo, hi] of `n`, whose first position is off + 1.
  std::optional<NtId> emit(NtId n, const BigCount& off, const BigCount& lo, const BigCount& hi) {
    BigCount first = off + 1;
    BigCount last = off + spine_length(n);
    if (last < lo || first > hi) return std::nullopt;
    if (lo <= first && last <= hi) {
      std::size_t b = block(first);
      if (b == block(last)) return whole(n, b);
    }
    NormalRule r = g_.rule(n);
    auto h = emit(r.head, off, lo, hi);
    auto c = emit(r.arg, off + spine_length(r.head), lo, hi);
    if (h && c) return g_.intern(NormalRule::compose(*h, *c));
    return h ? h : c;
  }

  // canon(t_k) under the breakpoints known so far.
  NtId canon_suffix(NtId b, NtId a, const BigCount& k, const BigCount& n) {
    if (k > n) return a;
    auto x = emit(b, 0, k, n);
    return g_.intern(NormalRule::apply(*x, a));
  }

  void spine_phase(NtId z) {
    const NtId b = g_.rule(z).head;
    const NtId a = g_.rule(z).arg;
    std::vector<char> seen;
    std::vector<NtId> leaves;
    spine_leaves(b, seen, leaves);
    std::vector<NtId> s;
    std::vector<char> in_s(g_.count(), 0);
    for (NtId leaf : leaves)
      for (NtId x : g_.rule(leaf).args)
        if (!in_s[x]) {
          in_s[x] = 1;
          s.push_back(x);
        }
    std::stable_sort(s.begin(), s.end(), [&](NtId x, NtId y) { return less(x, y); });
    rank_.clear();
    for (std::size_t i = 0; i < s.size(); ++i) rank_[s[i]] = i + 1;
    breaks_.clear();
    whole_.clear();

    const BigCount n = spine_length(b);
    const BigCount total = weight(b);
    const BigCount size_a = size(a);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const BigCount target = size(s[i]);
      BigCount budget = size_a + total - target;
      if (budget < 0) throw Error("canonization: argument larger than the tree containing it");
      auto [q, used] = prefix_within(b, budget);
      BigCount khat = q + 1;
      BigCount ki;
      if (!breaks_.empty() && khat > breaks_.back()) {
        ki = breaks_.back();
      } else if (size_a + total - used > target) {
        ki = khat;
      } else {
        NtId t = canon_suffix(b, a, khat, n);
        ki = values_.compare(t, s[i]) != Ordering::Less ? khat : khat - 1;
      }
      breaks_.push_back(ki);
    }
    if (options_.check_breakpoints) check(b, a, s, n);
    NtId x = *emit(b, 0, 1, n);
    g_.set_rule(z, NormalRule::apply(x, a));
  }

  void check(NtId b, NtId a, const std::vector<NtId>& s, const BigCount& n) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const BigCount& k = breaks_[i];
      if (values_.compare(canon_suffix(b, a, k, n), s[i]) == Ordering::Less)
        throw Error("canonization: breakpoint " + to_string(k) + " below its reference tree");
      if (k <= n && values_.compare(canon_suffix(b, a, k + 1, n), s[i]) != Ordering::Less)
        throw Error("canonization: breakpoint " + to_string(k) + " is not maximal");
    }
  }

  NormalGrammar& g_;
  const CanonOptions& options_;
  ValueOrder values_;
  GrammarStats stats_;
  std::size_t known_ = 0;
  std::vector<BigCount> spine_len_;
  std::map<NtId, std::size_t> rank_;
  std::vector<BigCount> breaks_;  // k_1 >= k_2 >= ...
  std::map<std::pair<NtId, std::size_t>, NtId> whole_;
};

}  // namespace

NormalGrammar canonize_all(const NormalGrammar& g, const std::vector<NtId>& roots, std::vector<NtId>& new_roots,
                           const CanonOptions& options) {
  NormalGrammar work = g;
  Canonizer(work, options).run(roots);
  std::vector<std::optional<NtId>> remap;
  NormalGrammar out = prune(work, roots, &remap);
  new_roots.clear();
  for (NtId r : roots) new_roots.push_back(*remap[r]);
  return out;
}

NormalGrammar canonize(const NormalGrammar& g, const CanonOptions& options) {
  std::vector<NtId> roots;
  return canonize_all(g, {g.start()}, roots, options);
}

NormalGrammar canon_grammar(const Grammar& g, const CanonOptions& options) {
  return canonize(dedup_equal(normalize(ensure_ranked(g)), options.policy), options);
}

NormalGrammar unranked(const NormalGrammar& g) {
  NormalGrammar out;
  for (NtId id = 0; id < g.count(); ++id) out.reserve_name(g.name(id));
  std::vector<std::optional<NtId>> map(g.count());
  for (NtId id : g.topological_order()) {
    NormalRule r = g.rule(id);
    if (r.type == RuleType::Node || r.type == RuleType::ContextNode) {
      if (auto split = split_rank(r.label)) r.label = std::string(split->base);
      for (auto& x : r.args) x = *map[x];
    } else {
      r.head = *map[r.head];
      r.arg = *map[r.arg];
    }
    map[id] = out.intern(r, g.name(id));
  }
  out.set_start(*map[g.start()]);
  return prune(out);
}

bool iso_rooted(const NormalGrammar& a, const NormalGrammar& b, const CanonOptions& options) {
  if (sizes(a)[a.start()] != sizes(b)[b.start()]) return false;
  NormalGrammar both;
  for (NtId id = 0; id < a.count(); ++id) both.reserve_name(a.name(id));
  std::vector<std::optional<NtId>> ma, mb;
  NtId ra = import_into(both, a, a.start(), ma);
  NtId rb = import_into(both, b, b.start(), mb);
  std::vector<std::optional<NtId>> remap;
  NormalGrammar deduped = dedup_equal(both, {ra, rb}, options.policy, &remap);
  std::vector<NtId> roots;
  NormalGrammar canon = canonize_all(deduped, {*remap[ra], *remap[rb]}, roots, options);
  if (roots[0] == roots[1]) return true;
  ValueOrder values(canon, options.policy, options.order);
  return values.equal(roots[0], roots[1]);
}

bool iso_rooted(const Grammar& a, const Grammar& b, const CanonOptions& options) {
  return iso_rooted(normalize(ensure_ranked(a)), normalize(ensure_ranked(b)), options);
}

}  // namespace treegram
