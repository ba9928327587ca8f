#include "treegram/unrooted.hpp"

#include <map>

#include "treegram/error.hpp"
#include "treegram/stats.hpp"

namespace treegram {

// ---------------------------------------------------------------------------
// Paths

std::string format_path(const NormalGrammar& g, const CompressedPath& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += " / ";
    out += g.name(p[i].nt) + "@" + format_address(p[i].address);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

DeweyAddress parse_address(std::string_view text) {
  DeweyAddress out;
  if (text == "ε" || text == "e" || text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t dot = text.find('.', pos);
    if (dot == std::string_view::npos) dot = text.size();
    std::string_view part = text.substr(pos, dot - pos);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string_view::npos)
      throw SyntaxError("invalid address '" + std::string(text) + "'", 1, pos + 1);
    std::size_t step = std::stoul(std::string(part));
    if (step == 0) throw SyntaxError("address steps start at 1", 1, pos + 1);
    out.push_back(step);
    pos = dot + 1;
  }
  return out;
}

// Children of a rule's right-hand side read as a tree.
std::size_t rhs_children(const NormalRule& r) {
  switch (r.type) {
    case RuleType::Node: return r.args.size();
    case RuleType::ContextNode: return r.args.size() + 1;
    default: return 1;
  }
}

}  // namespace

CompressedPath parse_path(const NormalGrammar& g, std::string_view text) {
  CompressedPath out;
  std::size_t pos = 0;
  text = trim(text);
  while (pos <= text.size()) {
    std::size_t sep = text.find('/', pos);
    if (sep == std::string_view::npos) sep = text.size();
    std::string_view part = trim(text.substr(pos, sep - pos));
    std::size_t at = part.find('@');
    if (at == std::string_view::npos) throw SyntaxError("expected Name@address in path", 1, pos + 1);
    std::string name(trim(part.substr(0, at)));
    auto id = g.find(name);
    if (!id) throw ValidationError("unknown nonterminal " + name + " in path");
    out.push_back({*id, parse_address(trim(part.substr(at + 1)))});
    pos = sep + 1;
  }
  return out;
}

void validate_path(const NormalGrammar& g, const CompressedPath& p, bool full) {
  if (p.empty()) throw ValidationError("empty path");
  if (p.front().nt != g.start()) throw ValidationError("path must start at the start nonterminal");
  for (std::size_t i = 0; i < p.size(); ++i) {
    const NormalRule& r = g.rule(p[i].nt);
    const auto& u = p[i].address;
    if (u.size() > 1) throw ValidationError("address " + format_address(u) + " is too deep for a normal-form rule");
    bool last = i + 1 == p.size();
    if (u.empty()) {
      bool terminal_root = r.type == RuleType::Node || r.type == RuleType::ContextNode;
      if (!last) {
        if (terminal_root || p[i + 1].nt != r.head)
          throw ValidationError("step " + std::to_string(i + 1) + " does not lead to " + g.name(p[i + 1].nt));
      } else if (full && !terminal_root) {
        throw ValidationError("path ends at a nonterminal; it is partial");
      }
      continue;
    }
    std::size_t c = u[0];
    if (c > rhs_children(r)) throw ValidationError("address " + format_address(u) + " is not in the rule of " + g.name(p[i].nt));
    NtId target;
    if (r.type == RuleType::Apply || r.type == RuleType::Compose) {
      target = r.arg;
    } else if (r.type == RuleType::ContextNode && c == r.hole + 1) {
      throw ValidationError("address " + format_address(u) + " points at the parameter");
    } else {
      std::size_t j = r.type == RuleType::ContextNode && c > r.hole + 1 ? c - 2 : c - 1;
      target = r.args[j];
    }
    if (last) {
      if (full) throw ValidationError("path ends at nonterminal " + g.name(target) + "; it is partial");
    } else if (p[i + 1].nt != target) {
      throw ValidationError("step " + std::to_string(i + 1) + " does not lead to " + g.name(p[i + 1].nt));
    }
  }
}

MixedTerm plug(MixedTerm t, MixedTerm arg) {
  if (t.kind == MixedTerm::Kind::Hole) return arg;
  // Walk down to the hole's parent.
  MixedTerm* node = &t;
  for (;;) {
    MixedTerm* next = nullptr;
    for (auto& c : node->children) {
      if (c.kind == MixedTerm::Kind::Hole) {
        c = std::move(arg);
        return t;
      }
      if (!next && c.has_hole()) next = &c;
    }
    if (!next) throw ValidationError("term has no hole to plug");
    node = next;
  }
}

// ---------------------------------------------------------------------------
// Center search

namespace {

class CenterSearch {
 public:
  CenterSearch(const NormalGrammar& g, const CenterObserver& observer) : g_(g), stats_(g), observer_(observer) {}

  CompressedPath run() {
    const TreeStats& top = stats_.tree(g_.start());
    if (top.diameter % 2 != 0)
      throw Error("diameter " + to_string(top.diameter) + " is odd, so there are two centers; subdivide first");
    ContextStats left = identity_context();
    std::optional<TreeStats> right;
    NtId a = g_.start();
    CompressedPath path;
    MixedTerm left_term = MixedTerm::hole();
    std::optional<MixedTerm> right_term;
    for (;;) {
      if (observer_) observer_({left_term, a, right_term, path});
      const NormalRule& r = g_.rule(a);
      switch (r.type) {
        case RuleType::Apply:
        case RuleType::Compose: {
          ContextStats lb = compose(left, stats_.context(r.head));
          TreeStats c = r.type == RuleType::Apply ? stats_.tree(r.arg) : apply(stats_.context(r.arg), *right);
          if (lb.ecc <= c.height) {
            path.push_back({a, {1}});
            left = lb;
            if (observer_) left_term = plug(left_term, MixedTerm::nonterminal(r.head, {MixedTerm::hole()}));
            a = r.arg;
          } else {
            path.push_back({a, {}});
            if (observer_) {
              right_term = r.type == RuleType::Apply ? MixedTerm::nonterminal(r.arg)
                                                     : MixedTerm::nonterminal(r.arg, {*right_term});
            }
            right = c;
            a = r.head;
          }
          break;
        }
        case RuleType::Node:
        case RuleType::ContextNode: {
          bool hole = r.type == RuleType::ContextNode;
          std::optional<std::size_t> found;
          ContextStats found_left;
          for (std::size_t j = 0; j < r.args.size(); ++j) {
            std::vector<const TreeStats*> others;
            for (std::size_t o = 0; o <= r.args.size(); ++o) {
              if (hole && o == r.hole) others.push_back(&*right);
              if (o < r.args.size() && o != j) others.push_back(&stats_.tree(r.args[o]));
            }
            ContextStats ti = compose(left, hole_node_stats(others));
            if (ti.ecc <= stats_.tree(r.args[j]).height) {
              found = j;
              found_left = ti;
              break;
            }
          }
          if (!found) {
            path.push_back({a, {}});
            return path;
          }
          std::size_t j = *found;
          std::size_t child = j + 1 + (hole && j >= r.hole ? 1 : 0);
          path.push_back({a, {child}});
          if (observer_) {
            MixedTerm piece = MixedTerm::terminal(r.label);
            for (std::size_t o = 0; o <= r.args.size(); ++o) {
              if (hole && o == r.hole) piece.children.push_back(*right_term);
              if (o == j) piece.children.push_back(MixedTerm::hole());
              else if (o < r.args.size()) piece.children.push_back(MixedTerm::nonterminal(r.args[o]));
            }
            left_term = plug(left_term, piece);
            right_term.reset();
          }
          left = found_left;
          right.reset();
          a = r.args[j];
          break;
        }
      }
    }
  }

 private:
  const NormalGrammar& g_;
  GrammarStats stats_;
  const CenterObserver& observer_;
};

}  // namespace

CompressedPath find_center(const NormalGrammar& g, const CenterObserver& observer) {
  return CenterSearch(g, observer).run();
}

// ---------------------------------------------------------------------------
// Addresses

namespace {

class AddressBuilder {
 public:
  AddressBuilder(const NormalGrammar& g, SlpStore& store) : g_(g), store_(store) {}

  // Address of the hole inside val(id), for rank-1 nonterminals.
  RuleId hole_address(NtId id) {
    if (auto it = memo_.find(id); it != memo_.end()) return it->second;
    std::vector<NtId> stack{id};
    while (!stack.empty()) {
      NtId n = stack.back();
      if (memo_.count(n)) {
        stack.pop_back();
        continue;
      }
      const NormalRule& r = g_.rule(n);
      if (r.type == RuleType::ContextNode) {
        memo_[n] = store_.add({step(r.hole + 1)});
        stack.pop_back();
        continue;
      }
      auto h = memo_.find(r.head);
      auto c = memo_.find(r.arg);
      if (h != memo_.end() && c != memo_.end()) {
        memo_[n] = store_.add({SlpStore::rule_symbol(h->second), SlpStore::rule_symbol(c->second)});
        stack.pop_back();
        continue;
      }
      if (h == memo_.end()) stack.push_back(r.head);
      if (c == memo_.end()) stack.push_back(r.arg);
    }
    return memo_.at(id);
  }

  SlpSymbol step(std::size_t i) { return store_.terminal(std::to_string(i)); }

 private:
  const NormalGrammar& g_;
  SlpStore& store_;
  std::map<NtId, RuleId> memo_;
};

}  // namespace

ResolvedAddress resolve_path(const NormalGrammar& g, const CompressedPath& p) {
  validate_path(g, p, false);
  ResolvedAddress out;
  AddressBuilder addresses(g, out.store);
  std::vector<SlpSymbol> parts;
  for (const auto& s : p) {
    if (s.address.empty()) continue;
    const NormalRule& r = g.rule(s.nt);
    if (r.type == RuleType::Apply || r.type == RuleType::Compose)
      parts.push_back(SlpStore::rule_symbol(addresses.hole_address(r.head)));
    else
      parts.push_back(addresses.step(s.address[0]));
  }
  out.root = out.store.add(parts);
  return out;
}

DeweyAddress ResolvedAddress::expand(const BigCount& max_depth) const {
  DeweyAddress out;
  for (const auto& s : slp_expand(store, root, max_depth)) out.push_back(std::stoul(s));
  return out;
}

std::string ResolvedAddress::to_string(std::size_t max_steps) const {
  if (depth() > max_steps) return "<address of depth " + treegram::to_string(depth()) + ">";
  return format_address(expand());
}

// ---------------------------------------------------------------------------
// Expansion and re-rooting

namespace {

// s(p) for the suffix of p starting at index i, with the terminal it reaches marked.
MixedTerm path_term(const NormalGrammar& g, const CompressedPath& p, std::size_t i) {
  const PathStep& s = p[i];
  MixedTerm t = rule_term(g, s.nt);
  if (i + 1 == p.size()) {
    t.marked = true;
    return t;
  }
  const NormalRule& r = g.rule(s.nt);
  MixedTerm rest = path_term(g, p, i + 1);
  if (s.address.empty()) {
    // A -> B(C) or B(C(y)): s(p') is B's expansion; plug the argument into its hole.
    MixedTerm arg = r.type == RuleType::Apply ? MixedTerm::nonterminal(r.arg)
                                              : MixedTerm::nonterminal(r.arg, {MixedTerm::hole()});
    return plug(std::move(rest), std::move(arg));
  }
  if (r.type == RuleType::Apply) return MixedTerm::nonterminal(r.head, {std::move(rest)});
  if (r.type == RuleType::Compose) return MixedTerm::nonterminal(r.head, {std::move(rest)});
  t.children[s.address[0] - 1] = std::move(rest);
  return t;
}

bool find_marked(const MixedTerm& t, DeweyAddress& out) {
  if (t.marked) return true;
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    out.push_back(i + 1);
    if (find_marked(t.children[i], out)) return true;
    out.pop_back();
  }
  return false;
}

}  // namespace

Expansion expand_path(const NormalGrammar& g, const CompressedPath& p) {
  validate_path(g, p, true);
  MixedTerm t = path_term(g, p, 0);
  while (t.kind == MixedTerm::Kind::Nonterminal) {
    MixedTerm body = rule_term(g, t.nt);
    t = t.children.empty() ? std::move(body) : plug(std::move(body), std::move(t.children[0]));
  }
  Expansion e;
  if (!find_marked(t, e.u)) throw Error("expansion lost the marked node");
  const MixedTerm* m = &t;
  for (auto step : e.u) m = &m->children[step - 1];
  e.sigma = m->label;
  e.delta = t.label;
  e.tree = std::move(t);
  return e;
}

NtId primed(NormalGrammar& g, NtId b) {
  std::map<NtId, NtId> memo;
  std::vector<NtId> stack{b};
  while (!stack.empty()) {
    NtId n = stack.back();
    if (memo.count(n)) {
      stack.pop_back();
      continue;
    }
    NormalRule r = g.rule(n);
    if (r.type == RuleType::ContextNode) {
      memo[n] = n;
      stack.pop_back();
      continue;
    }
    if (r.type != RuleType::Compose) throw ValidationError("rooty expects a rank-1 nonterminal");
    auto h = memo.find(r.head);
    auto c = memo.find(r.arg);
    if (h != memo.end() && c != memo.end()) {
      memo[n] = g.intern(NormalRule::compose(c->second, h->second));
      stack.pop_back();
      continue;
    }
    if (h == memo.end()) stack.push_back(r.head);
    if (c == memo.end()) stack.push_back(r.arg);
  }
  return memo.at(b);
}

MixedTerm rooty(NormalGrammar& g, const MixedTerm& context) {
  MixedTerm acc = MixedTerm::hole();
  const MixedTerm* node = &context;
  while (node->kind != MixedTerm::Kind::Hole) {
    std::size_t k = 0;
    while (k < node->children.size() && !node->children[k].has_hole()) ++k;
    if (k == node->children.size()) throw ValidationError("rooty expects a context with one hole");
    MixedTerm piece;
    if (node->kind == MixedTerm::Kind::Nonterminal) {
      piece = MixedTerm::nonterminal(primed(g, node->nt), {MixedTerm::hole()});
    } else {
      piece = MixedTerm::terminal(node->label);
      for (std::size_t i = 0; i < node->children.size(); ++i)
        piece.children.push_back(i == k ? MixedTerm::hole() : node->children[i]);
    }
    acc = plug(std::move(piece), std::move(acc));
    node = &node->children[k];
  }
  return acc;
}

NormalGrammar reroot(const NormalGrammar& g, const CompressedPath& p) {
  Expansion e = expand_path(g, p);
  if (e.u.empty()) return g;
  NormalGrammar out = g;
  const MixedTerm& t = e.tree;
  std::size_t i = e.u[0];
  MixedTerm rest = MixedTerm::terminal(t.label);
  for (std::size_t j = 0; j < t.children.size(); ++j)
    if (j + 1 != i) rest.children.push_back(t.children[j]);

  // t' runs from the root's i-th child down to the marked node.
  MixedTerm context = t.children[i - 1];
  MixedTerm* node = &context;
  for (std::size_t d = 1; d < e.u.size(); ++d) node = &node->children[e.u[d] - 1];
  MixedTerm marked = std::move(*node);
  *node = MixedTerm::hole();

  MixedTerm top = MixedTerm::terminal(marked.label, std::move(marked.children));
  top.children.push_back(plug(rooty(out, context), std::move(rest)));
  out.set_start(build_tree(out, top));
  return prune(out);
}

bool iso_unrooted(const Grammar& a, const Grammar& b, const CanonOptions& options) {
  auto rooted = [&](const Grammar& g) {
    NormalGrammar n = normalize(even_grammar(g));
    return to_grammar(reroot(n, find_center(n)));
  };
  return iso_rooted(rooted(a), rooted(b), options);
}

}  // namespace treegram
