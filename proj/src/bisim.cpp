#include "treegram/bisim.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "treegram/error.hpp"

namespace treegram {

namespace {

class Bisimulator {
 public:
  Bisimulator(const NormalGrammar& g, const CanonOptions& options) : g_(g), options_(options) {
    for (const auto& l : g.labels()) out_.reserve_name(l);
  }

  NormalGrammar run() {
    std::vector<std::optional<NtId>> map(g_.count());
    for (NtId id : g_.topological_order()) {
      NormalRule r = g_.rule(id);
      const std::string& name = g_.name(id);
      switch (r.type) {
        case RuleType::Node:
        case RuleType::ContextNode: {
          std::vector<NtId> args;
          std::size_t hole = 0;
          for (std::size_t i = 0; i < r.args.size(); ++i) {
            NtId a = *map[r.args[i]];
            if (std::find(args.begin(), args.end(), a) != args.end()) continue;
            args.push_back(a);
            if (i < r.hole) ++hole;
          }
          if (r.type == RuleType::Node) {
            map[id] = settle(out_.intern(NormalRule::node(r.label, args), name));
          } else {
            map[id] = out_.intern(NormalRule::context(r.label, args, hole), name);
          }
          break;
        }
        case RuleType::Compose:
          map[id] = out_.intern(NormalRule::compose(*map[r.head], *map[r.arg]), name);
          break;
        case RuleType::Apply:
          map[id] = settle(spine(*map[r.head], *map[r.arg], name));
          break;
      }
    }
    NormalGrammar result = out_;
    result.set_start(*map[g_.start()]);
    return prune(result);
  }

 private:
  // Merges a finished rank-0 nonterminal with an isomorphic earlier one.
  NtId settle(NtId z) {
    auto& bucket = by_size_[size(z)];
    for (NtId c : bucket)
      if (iso(c, z)) return c;
    bucket.push_back(z);
    return z;
  }

  // Z -> B(A): drop the y-child of a spine rule wherever the suffix below it
  // is bisimilar to one of its other children.
  NtId spine(NtId b, NtId a, const std::string& name) {
    std::set<BigCount> sizes;
    collect_sizes(b, sizes);
    BigCount n_spine = leaves(b);
    BigCount p = n_spine + 1;  // base position: t_p is known to be bcanonical
    NtId tp = a;
    BigCount sp = size(a);
    BigCount prefix_p = weight(b);  // weight of B_1 .. B_{p-1}
    for (const BigCount& n : sizes) {
      if (n < sp) continue;
      BigCount target = n - sp;
      if (target > prefix_p) break;
      auto q = leaves_with_weight(b, prefix_p - target);
      if (!q || *q == 0) continue;
      BigCount k = *q + 1;
      NtId bm = leaf_at(b, *q);
      const NormalRule rm = out_.rule(bm);
      std::optional<std::size_t> drop;
      NtId tk = k == p ? tp : out_.intern(NormalRule::apply(slice(b, k, p - 1), tp));
      for (std::size_t i = 0; i < rm.args.size() && !drop; ++i)
        if (size(rm.args[i]) == n && iso(rm.args[i], tk)) drop = i;
      if (!drop) continue;
      std::vector<NtId> args = rm.args;
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(*drop));
      std::size_t hole = rm.hole - (*drop < rm.hole ? 1 : 0);
      NtId cm = out_.intern(NormalRule::context(rm.label, args, hole));
      tp = out_.intern(NormalRule::apply(cm, tk));
      sp = size(tp);
      p = *q;
      prefix_p -= target + weight(bm);
    }
    if (p == 1) {
      // Whole spine rewritten: give the result the user's name when possible.
      const NormalRule r = out_.rule(tp);
      return out_.intern(r, name);
    }
    return out_.intern(NormalRule::apply(slice(b, 1, p - 1), tp), name);
  }

  void collect_sizes(NtId b, std::set<BigCount>& out) {
    std::set<NtId> seen;
    std::vector<NtId> stack{b};
    while (!stack.empty()) {
      NtId n = stack.back();
      stack.pop_back();
      if (!seen.insert(n).second) continue;
      const NormalRule& r = out_.rule(n);
      if (r.type == RuleType::Compose) {
        stack.push_back(r.head);
        stack.push_back(r.arg);
      } else {
        for (NtId x : r.args) out.insert(size(x));
      }
    }
  }

  // Number of type-3 leaves on the spine of a rank-1 nonterminal.
  const BigCount& leaves(NtId n) {
    if (auto it = leaves_.find(n); it != leaves_.end()) return it->second;
    const NormalRule& r = out_.rule(n);
    BigCount v = r.type == RuleType::ContextNode ? BigCount(1) : leaves(r.head) + leaves(r.arg);
    return leaves_[n] = v;
  }

  // |val| of rank-0 nonterminals; for rank-1 ones the size without the parameter.
  const BigCount& size(NtId n) {
    if (auto it = size_.find(n); it != size_.end()) return it->second;
    const NormalRule& r = out_.rule(n);
    BigCount v;
    if (r.type == RuleType::Node || r.type == RuleType::ContextNode) {
      v = 1;
      for (NtId x : r.args) v += size(x);
    } else {
      v = size(r.head) + size(r.arg);
    }
    return size_[n] = v;
  }
  const BigCount& weight(NtId n) { return size(n); }

  // q such that the first q leaves of b weigh exactly w, if any.
  std::optional<BigCount> leaves_with_weight(NtId b, BigCount w) {
    BigCount q = 0;
    NtId n = b;
    for (;;) {
      if (w == 0) return q;
      const NormalRule& r = out_.rule(n);
      if (r.type == RuleType::ContextNode) {
        if (w == size(n)) return q + 1;
        return std::nullopt;
      }
      if (w <= weight(r.head)) {
        n = r.head;
      } else {
        w -= weight(r.head);
        q += leaves(r.head);
        n = r.arg;
      }
    }
  }

  // The i-th type-3 leaf (1-based).
  NtId leaf_at(NtId b, BigCount i) {
    NtId n = b;
    while (out_.rule(n).type == RuleType::Compose) {
      const NormalRule& r = out_.rule(n);
      if (i <= leaves(r.head)) {
        n = r.head;
      } else {
        i -= leaves(r.head);
        n = r.arg;
      }
    }
    return n;
  }

  // Rank-1 nonterminal for leaves lo..hi (1-based, non-empty).
  NtId slice(NtId n, const BigCount& lo, const BigCount& hi) {
    if (lo == 1 && hi == leaves(n)) return n;
    const NormalRule r = out_.rule(n);
    BigCount left = leaves(r.head);
    if (hi <= left) return slice(r.head, lo, hi);
    if (lo > left) return slice(r.arg, lo - left, hi - left);
    NtId h = slice(r.head, lo, left);
    NtId a = slice(r.arg, 1, hi - left);
    return out_.intern(NormalRule::compose(h, a));
  }

  bool iso(NtId x, NtId y) {
    if (x == y) return true;
    if (size(x) != size(y)) return false;
    auto [it, fresh] = iso_memo_.try_emplace({std::min(x, y), std::max(x, y)}, false);
    if (!fresh) return it->second;
    return it->second = iso_rooted(ranked(sub(x)), ranked(sub(y)), options_);
  }

  NormalGrammar sub(NtId x) {
    std::vector<std::optional<NtId>> remap;
    NormalGrammar p = prune(out_, {x}, &remap);
    p.set_start(*remap[x]);
    return p;
  }

  const NormalGrammar& g_;
  const CanonOptions& options_;
  NormalGrammar out_;
  std::map<BigCount, std::vector<NtId>> by_size_;
  std::map<NtId, BigCount> leaves_, size_;
  std::map<std::pair<NtId, NtId>, bool> iso_memo_;
};

}  // namespace

NormalGrammar bcanon_grammar(const NormalGrammar& g, const CanonOptions& options) {
  return Bisimulator(g, options).run();
}

NormalGrammar bcanon_grammar(const Grammar& g, const CanonOptions& options) {
  return bcanon_grammar(normalize(g), options);
}

bool bisim_equal(const Grammar& a, const Grammar& b, const CanonOptions& options) {
  return iso_rooted(to_grammar(bcanon_grammar(a, options)), to_grammar(bcanon_grammar(b, options)), options);
}

}  // namespace treegram
