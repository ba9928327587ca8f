#include "treegram/dflr.hpp"

#include <map>
#include <utility>

namespace treegram {

void DflrSlps::build(NtId root) {
  if (first_.size() < g_.count()) {
    first_.resize(g_.count(), kNone);
    second_.resize(g_.count(), kNone);
  }
  std::vector<NtId> stack{root};
  while (!stack.empty()) {
    NtId id = stack.back();
    if (built(id)) {
      stack.pop_back();
      continue;
    }
    bool ready = true;
    for (NtId c : g_.children(id))
      if (!built(c)) {
        stack.push_back(c);
        ready = false;
      }
    if (!ready) continue;
    stack.pop_back();
    const NormalRule& r = g_.rule(id);
    auto sym = [](RuleId x) { return SlpStore::rule_symbol(x); };
    auto label = [&](std::size_t arity) {
      return mangle_ ? store_.terminal(mangle_rank(r.label, arity)) : store_.terminal(r.label);
    };
    switch (r.type) {
      case RuleType::Node: {
        std::vector<SlpSymbol> rhs{label(r.args.size())};
        for (NtId a : r.args) rhs.push_back(sym(first_[a]));
        first_[id] = store_.add(std::move(rhs));
        break;
      }
      case RuleType::Apply:
        first_[id] = store_.add({sym(first_[r.head]), sym(first_[r.arg]), sym(second_[r.head])});
        break;
      case RuleType::ContextNode: {
        std::vector<SlpSymbol> pre{label(r.args.size() + 1)}, suf;
        for (std::size_t i = 0; i < r.args.size(); ++i)
          (i < r.hole ? pre : suf).push_back(sym(first_[r.args[i]]));
        first_[id] = store_.add(std::move(pre));
        second_[id] = store_.add(std::move(suf));
        break;
      }
      case RuleType::Compose:
        first_[id] = store_.add({sym(first_[r.head]), sym(first_[r.arg])});
        second_[id] = store_.add({sym(second_[r.arg]), sym(second_[r.head])});
        break;
    }
  }
}

RuleId DflrSlps::tree(NtId a) {
  if (!built(a)) build(a);
  return first_[a];
}

RuleId DflrSlps::prefix(NtId b) {
  if (!built(b)) build(b);
  return first_[b];
}

RuleId DflrSlps::suffix(NtId b) {
  if (!built(b)) build(b);
  return second_[b];
}

Ordering ValueOrder::compare(NtId a, NtId b) {
  if (a == b) return Ordering::Equal;
  return cmp_.compare(slps_.tree(a), slps_.tree(b));
}

bool ValueOrder::equal(NtId a, NtId b) { return a == b || cmp_.equal(slps_.tree(a), slps_.tree(b)); }

bool ValueOrder::equal_contexts(NtId a, NtId b) {
  return a == b ||
         (cmp_.equal(slps_.prefix(a), slps_.prefix(b)) && cmp_.equal(slps_.suffix(a), slps_.suffix(b)));
}

Ordering compare_values(const NormalGrammar& g, NtId a, NtId b, const LabelOrder& ord,
                        const EqualityPolicy& policy) {
  return ValueOrder(g, policy, ord).compare(a, b);
}

NormalGrammar dedup_equal(const NormalGrammar& g, const std::vector<NtId>& roots, const EqualityPolicy& policy,
                          std::vector<std::optional<NtId>>* remap) {
  ValueOrder values(g, policy, {}, true);
  Fingerprinter prints(values.slps().store(), policy.seed, policy.prime_count == 0 ? 1 : policy.prime_count);
  auto& slps = values.slps();

  auto order = g.topological_order(roots);
  std::vector<NtId> rep(g.count());
  for (NtId i = 0; i < g.count(); ++i) rep[i] = i;
  using Key = std::pair<std::string, Fingerprinter::Print>;
  std::map<Key, std::vector<NtId>> buckets;
  for (NtId id : order) {
    Key key;
    if (g.rank(id) == 0) {
      RuleId r = slps.tree(id);
      key = {"0:" + to_string(values.slps().store().length(r)), prints.of(r)};
    } else {
      RuleId p = slps.prefix(id), s = slps.suffix(id);
      auto fp = prints.of(p);
      auto fs = prints.of(s);
      fp.insert(fp.end(), fs.begin(), fs.end());
      key = {"1:" + to_string(slps.store().length(p)) + ":" + to_string(slps.store().length(s)), std::move(fp)};
    }
    auto& bucket = buckets[key];
    for (NtId other : bucket) {
      bool same = g.rank(id) == 0 ? values.equal(id, other) : values.equal_contexts(id, other);
      if (same) {
        rep[id] = other;
        break;
      }
    }
    if (rep[id] == id) bucket.push_back(id);
  }

  NormalGrammar out;
  for (NtId id : order) out.reserve_name(g.name(id));
  for (const auto& l : g.labels()) out.reserve_name(l);
  std::vector<std::optional<NtId>> map(g.count());
  for (NtId id : order) {
    if (rep[id] != id) {
      map[id] = map[rep[id]];
      continue;
    }
    NormalRule r = g.rule(id);
    for (auto& a : r.args) a = *map[a];
    if (r.type == RuleType::Apply || r.type == RuleType::Compose) {
      r.head = *map[r.head];
      r.arg = *map[r.arg];
    }
    map[id] = out.intern(r, g.name(id));
  }
  std::vector<NtId> new_roots;
  for (NtId r : roots) new_roots.push_back(*map[r]);
  std::vector<std::optional<NtId>> pruned;
  NormalGrammar result = prune(out, new_roots, &pruned);
  if (remap) {
    remap->assign(g.count(), std::nullopt);
    for (NtId id : order) (*remap)[id] = pruned[*map[id]];
  }
  return result;
}

}  // namespace treegram
