#include "treegram/normal_grammar.hpp"

#include <algorithm>
#include <functional>
#include <utility>

#include "treegram/error.hpp"

namespace treegram {

// ---------------------------------------------------------------------------
// NormalGrammar

std::optional<NtId> NormalGrammar::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::string NormalGrammar::key(const NormalRule& r) {
  std::string k;
  k += static_cast<char>('0' + static_cast<int>(r.type));
  k += std::to_string(r.label.size());
  k += ':';
  k += r.label;
  for (auto a : r.args) {
    k += ',';
    k += std::to_string(a);
  }
  k += '|';
  k += std::to_string(r.hole);
  k += '|';
  k += std::to_string(r.head);
  k += '|';
  k += std::to_string(r.arg);
  return k;
}

NtId NormalGrammar::intern(const NormalRule& rule, const std::string& preferred) {
  auto it = by_rule_.find(key(rule));
  if (it != by_rule_.end()) return it->second;
  std::string name;
  if (!preferred.empty() && is_identifier(preferred) && !by_name_.count(preferred) && !labels_.count(preferred) &&
      (rule.label.empty() || rule.label != preferred))
    name = preferred;
  return add(rule, name);
}

NtId NormalGrammar::add(const NormalRule& rule, const std::string& name) {
  auto id = static_cast<NtId>(rules_.size());
  std::string n = name.empty() ? names_alloc_.fresh() : name;
  if (!name.empty()) {
    if (by_name_.count(n) || labels_.count(n)) throw ValidationError("nonterminal name " + n + " is already in use");
    names_alloc_.reserve(n);
  }
  rules_.push_back(rule);
  names_.push_back(n);
  by_name_.emplace(n, id);
  by_rule_.emplace(key(rule), id);
  if (!rule.label.empty()) {
    names_alloc_.reserve(rule.label);
    labels_.insert(rule.label);
  }
  return id;
}

void NormalGrammar::set_rule(NtId id, const NormalRule& rule) {
  auto old = by_rule_.find(key(rules_[id]));
  if (old != by_rule_.end() && old->second == id) by_rule_.erase(old);
  rules_[id] = rule;
  by_rule_.emplace(key(rule), id);
  if (!rule.label.empty()) {
    names_alloc_.reserve(rule.label);
    labels_.insert(rule.label);
  }
}

void NormalGrammar::rename(NtId id, const std::string& name) {
  if (names_[id] == name) return;
  if (by_name_.count(name) || labels_.count(name))
    throw ValidationError("nonterminal name " + name + " is already in use");
  by_name_.erase(names_[id]);
  names_[id] = name;
  by_name_.emplace(name, id);
  names_alloc_.reserve(name);
}

std::vector<NtId> NormalGrammar::children(NtId id) const {
  const auto& r = rules_[id];
  switch (r.type) {
    case RuleType::Node:
    case RuleType::ContextNode:
      return r.args;
    case RuleType::Apply:
    case RuleType::Compose:
      return {r.head, r.arg};
  }
  return {};
}

std::vector<NtId> NormalGrammar::topological_order(const std::vector<NtId>& roots) const {
  std::vector<NtId> order;
  std::vector<char> state(rules_.size(), 0);
  for (NtId root : roots) {
    if (state[root]) continue;
    std::vector<std::pair<NtId, std::size_t>> stack{{root, 0}};
    state[root] = 1;
    while (!stack.empty()) {
      auto [v, next] = stack.back();
      auto kids = children(v);
      if (next < kids.size()) {
        ++stack.back().second;
        NtId w = kids[next];
        if (!state[w]) {
          state[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  return order;
}

std::vector<NtId> NormalGrammar::full_topological_order() const {
  std::vector<NtId> all(rules_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<NtId>(i);
  return topological_order(all);
}

std::size_t NormalGrammar::size() const {
  std::size_t total = 0;
  for (const auto& r : rules_) {
    switch (r.type) {
      case RuleType::Node: total += 1 + r.args.size(); break;
      case RuleType::Apply: total += 2; break;
      case RuleType::ContextNode: total += 2 + r.args.size(); break;
      case RuleType::Compose: total += 3; break;
    }
  }
  return total;
}

std::set<std::string> NormalGrammar::labels() const {
  std::set<std::string> out;
  for (const auto& r : rules_)
    if (r.type == RuleType::Node || r.type == RuleType::ContextNode) out.insert(r.label);
  return out;
}

// ---------------------------------------------------------------------------
// Contexts and mixed terms

NtId apply_context(NormalGrammar& g, ContextRef ctx, NtId arg) {
  switch (ctx.kind) {
    case ContextRef::Kind::Identity: return arg;
    case ContextRef::Kind::Constant: return ctx.id;
    case ContextRef::Kind::Nonterminal: return g.intern(NormalRule::apply(ctx.id, arg));
  }
  return arg;
}

ContextRef compose_contexts(NormalGrammar& g, ContextRef outer, ContextRef inner) {
  using K = ContextRef::Kind;
  if (outer.kind == K::Identity) return inner;
  if (outer.kind == K::Constant) return outer;
  if (inner.kind == K::Identity) return outer;
  if (inner.kind == K::Constant) return {K::Constant, apply_context(g, outer, inner.id)};
  return {K::Nonterminal, g.intern(NormalRule::compose(outer.id, inner.id))};
}

bool MixedTerm::has_hole() const {
  if (kind == Kind::Hole) return true;
  for (const auto& c : children)
    if (c.has_hole()) return true;
  return false;
}

MixedTerm rule_term(const NormalGrammar& g, NtId id) {
  const auto& r = g.rule(id);
  switch (r.type) {
    case RuleType::Node: {
      auto t = MixedTerm::terminal(r.label);
      for (auto a : r.args) t.children.push_back(MixedTerm::nonterminal(a));
      return t;
    }
    case RuleType::ContextNode: {
      auto t = MixedTerm::terminal(r.label);
      for (std::size_t i = 0; i <= r.args.size(); ++i) {
        if (i == r.hole) t.children.push_back(MixedTerm::hole());
        if (i < r.args.size()) t.children.push_back(MixedTerm::nonterminal(r.args[i]));
      }
      return t;
    }
    case RuleType::Apply:
      return MixedTerm::nonterminal(r.head, {MixedTerm::nonterminal(r.arg)});
    case RuleType::Compose:
      return MixedTerm::nonterminal(r.head, {MixedTerm::nonterminal(r.arg, {MixedTerm::hole()})});
  }
  return MixedTerm::hole();
}

NtId build_tree(NormalGrammar& g, const MixedTerm& t) {
  switch (t.kind) {
    case MixedTerm::Kind::Hole:
      throw ValidationError("unexpected hole in a tree term");
    case MixedTerm::Kind::Nonterminal: {
      if (g.rank(t.nt) == 0) {
        if (!t.children.empty()) throw ValidationError("rank-0 nonterminal " + g.name(t.nt) + " applied to an argument");
        return t.nt;
      }
      if (t.children.size() != 1) throw ValidationError("rank-1 nonterminal " + g.name(t.nt) + " needs one argument");
      NtId arg = build_tree(g, t.children[0]);
      return g.intern(NormalRule::apply(t.nt, arg));
    }
    case MixedTerm::Kind::Terminal: {
      std::vector<NtId> args;
      args.reserve(t.children.size());
      for (const auto& c : t.children) args.push_back(build_tree(g, c));
      return g.intern(NormalRule::node(t.label, std::move(args)));
    }
  }
  return 0;
}

ContextRef build_context(NormalGrammar& g, const MixedTerm& t) {
  using K = ContextRef::Kind;
  switch (t.kind) {
    case MixedTerm::Kind::Hole:
      if (!t.children.empty()) throw ValidationError("hole with children");
      return {K::Identity, 0};
    case MixedTerm::Kind::Nonterminal: {
      if (g.rank(t.nt) != 1 || t.children.size() != 1)
        throw ValidationError("the hole must lie below a rank-1 nonterminal application");
      return compose_contexts(g, {K::Nonterminal, t.nt}, build_context(g, t.children[0]));
    }
    case MixedTerm::Kind::Terminal: {
      std::vector<NtId> args;
      std::size_t hole = t.children.size();
      for (std::size_t i = 0; i < t.children.size(); ++i) {
        if (hole == t.children.size() && t.children[i].has_hole()) {
          hole = i;
          continue;
        }
        args.push_back(build_tree(g, t.children[i]));
      }
      if (hole == t.children.size()) throw ValidationError("context without hole");
      NtId node = g.intern(NormalRule::context(t.label, std::move(args), hole));
      return compose_contexts(g, {K::Nonterminal, node}, build_context(g, t.children[hole]));
    }
  }
  return {};
}

namespace {

class NormalEvaluator {
 public:
  explicit NormalEvaluator(const NormalGrammar& g) : g_(g), memo_(g.count()) {}

  Tree tree(NtId id) {
    if (memo_[id]) return *memo_[id];
    const auto& r = g_.rule(id);
    Tree out;
    if (r.type == RuleType::Node) {
      out.label = r.label;
      for (auto a : r.args) out.children.push_back(tree(a));
    } else {
      out = context(r.head, tree(r.arg));
    }
    memo_[id] = out;
    return out;
  }

  Tree context(NtId id, Tree arg) {
    const auto& r = g_.rule(id);
    if (r.type == RuleType::Compose) return context(r.head, context(r.arg, std::move(arg)));
    Tree out(r.label);
    for (std::size_t i = 0; i <= r.args.size(); ++i) {
      if (i == r.hole) out.children.push_back(std::move(arg));
      if (i < r.args.size()) out.children.push_back(tree(r.args[i]));
    }
    return out;
  }

  Tree term(const MixedTerm& t) {
    switch (t.kind) {
      case MixedTerm::Kind::Hole: throw ValidationError("cannot evaluate a hole");
      case MixedTerm::Kind::Nonterminal:
        if (t.children.empty()) return tree(t.nt);
        return context(t.nt, term(t.children[0]));
      case MixedTerm::Kind::Terminal: {
        Tree out(t.label);
        for (const auto& c : t.children) out.children.push_back(term(c));
        return out;
      }
    }
    return {};
  }

 private:
  const NormalGrammar& g_;
  std::vector<std::optional<Tree>> memo_;
};

BigCount term_size(const NormalGrammar& g, const std::vector<BigCount>& sz, const MixedTerm& t) {
  switch (t.kind) {
    case MixedTerm::Kind::Hole: return 1;
    case MixedTerm::Kind::Nonterminal:
      if (t.children.empty()) return sz[t.nt];
      return sz[t.nt] - 1 + term_size(g, sz, t.children[0]);
    case MixedTerm::Kind::Terminal: {
      BigCount total = 1;
      for (const auto& c : t.children) total += term_size(g, sz, c);
      return total;
    }
  }
  return 0;
}

}  // namespace

Tree eval_term(const NormalGrammar& g, const MixedTerm& t, const BigCount& max_nodes) {
  BigCount size = term_size(g, sizes(g), t);
  if (size > max_nodes)
    throw LimitError("tree has " + to_string(size) + " nodes, above the limit of " + to_string(max_nodes));
  NormalEvaluator ev(g);
  return ev.term(t);
}

std::string to_string(const NormalGrammar& g, const MixedTerm& t) {
  std::string out;
  switch (t.kind) {
    case MixedTerm::Kind::Hole: out = "y"; break;
    case MixedTerm::Kind::Nonterminal: out = g.name(t.nt); break;
    case MixedTerm::Kind::Terminal: out = quote_label(t.label); break;
  }
  if (t.marked) out += "*";
  if (!t.children.empty()) {
    out += '(';
    for (std::size_t i = 0; i < t.children.size(); ++i) {
      if (i) out += ',';
      out += to_string(g, t.children[i]);
    }
    out += ')';
  }
  return out;
}

Tree eval(const NormalGrammar& g, NtId id, const BigCount& max_nodes) {
  if (g.rank(id) != 0) throw ValidationError("cannot evaluate rank-1 nonterminal " + g.name(id));
  auto sz = sizes(g);
  if (sz[id] > max_nodes)
    throw LimitError("tree has " + to_string(sz[id]) + " nodes, above the limit of " + to_string(max_nodes));
  NormalEvaluator ev(g);
  return ev.tree(id);
}

std::vector<BigCount> sizes(const NormalGrammar& g) {
  std::vector<BigCount> out(g.count());
  for (NtId id : g.full_topological_order()) {
    const auto& r = g.rule(id);
    switch (r.type) {
      case RuleType::Node:
      case RuleType::ContextNode: {
        BigCount s = r.type == RuleType::Node ? 1 : 2;
        for (auto a : r.args) s += out[a];
        out[id] = std::move(s);
        break;
      }
      case RuleType::Apply:
      case RuleType::Compose:
        out[id] = out[r.head] + out[r.arg] - 1;
        break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

bool contains_label(const Tree& t, const std::string& label) {
  if (t.label == label) return true;
  for (const auto& c : t.children)
    if (contains_label(c, label)) return true;
  return false;
}

class Normalizer {
 public:
  Normalizer(const Grammar& src, NormalGrammar& out) : src_(src), out_(out) {}

  void run() {
    for (const auto& name : src_.topological_order()) {
      const Production& p = src_.at(name);
      auto before = static_cast<NtId>(out_.count());
      Entry e;
      if (p.params.empty()) {
        e.id = tree_of(p.rhs, nullptr);
        if (e.id >= before || !src_.is_nonterminal(out_.name(e.id))) out_.rename(e.id, p.name);
      } else {
        e.rank1 = true;
        const std::string& y = p.params[0];
        if (contains_label(p.rhs, y)) {
          e.ctx = context_of(p.rhs, y);
        } else {
          e.ctx = {ContextRef::Kind::Constant, tree_of(p.rhs, &y)};
        }
        if (e.ctx.kind == ContextRef::Kind::Nonterminal &&
            (e.ctx.id >= before || !src_.is_nonterminal(out_.name(e.ctx.id))))
          out_.rename(e.ctx.id, p.name);
      }
      entries_[p.name] = e;
    }
    out_.set_start(entries_.at(src_.start()).id);
  }

 private:
  struct Entry {
    bool rank1 = false;
    NtId id = 0;
    ContextRef ctx;
  };

  NtId tree_of(const Tree& node, const std::string* param) {
    if (param && node.label == *param) throw ValidationError("parameter outside its context path");
    auto it = entries_.find(node.label);
    if (it != entries_.end() && src_.is_nonterminal(node.label)) {
      const Entry& e = it->second;
      if (!e.rank1) return e.id;
      NtId arg = tree_of(node.children.at(0), param);
      return apply_context(out_, e.ctx, arg);
    }
    std::vector<NtId> args;
    args.reserve(node.children.size());
    for (const auto& c : node.children) args.push_back(tree_of(c, param));
    return out_.intern(NormalRule::node(node.label, std::move(args)));
  }

  ContextRef context_of(const Tree& node, const std::string& param) {
    if (node.label == param) return {ContextRef::Kind::Identity, 0};
    if (src_.is_nonterminal(node.label)) {
      const Entry& e = entries_.at(node.label);
      return compose_contexts(out_, e.ctx, context_of(node.children.at(0), param));
    }
    std::vector<NtId> args;
    std::size_t hole = node.children.size();
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      if (hole == node.children.size() && contains_label(node.children[i], param)) {
        hole = i;
        continue;
      }
      args.push_back(tree_of(node.children[i], &param));
    }
    NtId ctx = out_.intern(NormalRule::context(node.label, std::move(args), hole));
    return compose_contexts(out_, {ContextRef::Kind::Nonterminal, ctx}, context_of(node.children[hole], param));
  }

  const Grammar& src_;
  NormalGrammar& out_;
  std::map<std::string, Entry> entries_;
};

}  // namespace

NormalGrammar normalize(const Grammar& g) {
  if (!g.linear()) throw ValidationError("normalization needs a linear grammar");
  for (const auto& p : g.productions())
    if (p.params.size() > 1)
      throw ValidationError("nonterminal " + p.name + " has rank " + std::to_string(p.params.size()) +
                            "; normalization supports rank at most 1");
  NormalGrammar out;
  for (const auto& p : g.productions()) out.reserve_name(p.name);
  for (const auto& l : g.terminal_labels()) out.reserve_name(l);
  Normalizer(g, out).run();
  return prune(out);
}

Grammar to_grammar(const NormalGrammar& g) {
  std::set<std::string> taken = g.labels();
  auto order = g.topological_order();
  for (auto id : order) taken.insert(g.name(id));
  std::string y = "y";
  for (std::size_t i = 1; taken.count(y); ++i) y = "y" + std::to_string(i);

  std::vector<Production> prods;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NtId id = *it;
    const auto& r = g.rule(id);
    Production p;
    p.name = g.name(id);
    if (r.rank() == 1) p.params = {y};
    switch (r.type) {
      case RuleType::Node:
        p.rhs = Tree(r.label);
        for (auto a : r.args) p.rhs.children.emplace_back(g.name(a));
        break;
      case RuleType::ContextNode:
        p.rhs = Tree(r.label);
        for (std::size_t i = 0; i <= r.args.size(); ++i) {
          if (i == r.hole) p.rhs.children.emplace_back(y);
          if (i < r.args.size()) p.rhs.children.emplace_back(g.name(r.args[i]));
        }
        break;
      case RuleType::Apply:
        p.rhs = Tree(g.name(r.head), {Tree(g.name(r.arg))});
        break;
      case RuleType::Compose:
        p.rhs = Tree(g.name(r.head), {Tree(g.name(r.arg), {Tree(y)})});
        break;
    }
    prods.push_back(std::move(p));
  }
  return Grammar(GrammarKind::Slt, std::move(prods), g.name(g.start()));
}

NtId import_into(NormalGrammar& dst, const NormalGrammar& src, NtId root, std::vector<std::optional<NtId>>& memo) {
  if (memo.size() < src.count()) memo.resize(src.count());
  for (const auto& l : src.labels()) dst.reserve_name(l);
  for (NtId id : src.topological_order({root})) {
    if (memo[id]) continue;
    NormalRule r = src.rule(id);
    for (auto& a : r.args) a = *memo[a];
    if (r.type == RuleType::Apply || r.type == RuleType::Compose) {
      r.head = *memo[r.head];
      r.arg = *memo[r.arg];
    }
    memo[id] = dst.intern(r, src.name(id));
  }
  return *memo[root];
}

NormalGrammar prune(const NormalGrammar& g, const std::vector<NtId>& roots, std::vector<std::optional<NtId>>* remap) {
  NormalGrammar out;
  std::vector<std::optional<NtId>> memo;
  for (const auto& l : g.labels()) out.reserve_name(l);
  // Reserve every surviving name so that sharing never renames a kept rule.
  for (NtId id : g.topological_order(roots)) out.reserve_name(g.name(id));
  for (NtId root : roots) import_into(out, g, root, memo);
  out.set_start(roots.empty() ? 0 : *memo[roots.front()]);
  if (remap) *remap = std::move(memo);
  return out;
}

NormalGrammar ranked(const NormalGrammar& g) {
  NormalGrammar out;
  for (NtId id = 0; id < g.count(); ++id) out.reserve_name(g.name(id));
  for (NtId id = 0; id < g.count(); ++id) {
    NormalRule r = g.rule(id);
    if (r.type == RuleType::Node || r.type == RuleType::ContextNode) {
      if (!label_accepts_ranking(r.label))
        throw ValidationError("label '" + r.label + "' contains the reserved rank delimiter '#'");
      r.label = mangle_rank(r.label, r.args.size() + (r.type == RuleType::ContextNode ? 1 : 0));
    }
    out.add(r, g.name(id));
  }
  out.set_start(g.start());
  return out;
}

std::string to_string(const NormalGrammar& g) {
  std::string out;
  for (NtId id = 0; id < g.count(); ++id) {
    out += g.name(id);
    if (g.rank(id) == 1) out += "(y)";
    out += " = ";
    out += to_string(g, rule_term(g, id));
    if (id == g.start()) out += "    # start";
    out += '\n';
  }
  return out;
}

}  // namespace treegram
