#include "treegram/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>
#include <utility>

#include "treegram/error.hpp"

namespace treegram {

std::string NameAllocator::fresh(const std::string& prefix) {
  for (;;) {
    std::string name = prefix + std::to_string(++counter_);
    if (taken_.insert(name).second) return name;
  }
}

// ---------------------------------------------------------------------------
// Validation

namespace {

enum class NodeKind { Terminal, Nonterminal, Parameter };

struct RhsContext {
  const std::map<std::string, std::size_t, std::less<>>& index;
  const std::vector<Production>& productions;
  const std::vector<std::string>& params;

  NodeKind kind(const std::string& label) const {
    if (std::find(params.begin(), params.end(), label) != params.end()) return NodeKind::Parameter;
    if (index.count(label)) return NodeKind::Nonterminal;
    return NodeKind::Terminal;
  }
};

void check_rhs(const Tree& node, const RhsContext& ctx, const std::string& owner,
               std::vector<std::size_t>& param_uses, std::vector<std::string>& callees) {
  switch (ctx.kind(node.label)) {
    case NodeKind::Parameter: {
      if (!node.is_leaf())
        throw ValidationError("production " + owner + ": parameter '" + node.label + "' has children");
      auto pos = std::find(ctx.params.begin(), ctx.params.end(), node.label) - ctx.params.begin();
      ++param_uses[static_cast<std::size_t>(pos)];
      return;
    }
    case NodeKind::Nonterminal: {
      const auto& callee = ctx.productions[ctx.index.find(node.label)->second];
      if (callee.params.size() != node.children.size())
        throw ValidationError("production " + owner + ": nonterminal " + node.label + " has rank " +
                              std::to_string(callee.params.size()) + " but is applied to " +
                              std::to_string(node.children.size()) + " argument(s)");
      callees.push_back(node.label);
      break;
    }
    case NodeKind::Terminal:
      break;
  }
  for (const auto& c : node.children) check_rhs(c, ctx, owner, param_uses, callees);
}

}  // namespace

Grammar::Grammar(GrammarKind kind, std::vector<Production> productions, std::string start)
    : kind_(kind) {
  if (productions.empty()) throw ValidationError("grammar has no productions");
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < productions.size(); ++i) {
    const auto& p = productions[i];
    if (!is_identifier(p.name)) throw ValidationError("invalid nonterminal name '" + p.name + "'");
    if (!index.emplace(p.name, i).second)
      throw ValidationError("duplicate left-hand side for nonterminal " + p.name);
  }
  if (start.empty()) start = productions.front().name;
  auto start_it = index.find(start);
  if (start_it == index.end()) throw ValidationError("start symbol " + start + " has no production");
  if (!productions[start_it->second].params.empty())
    throw ValidationError("start symbol " + start + " must have rank 0");

  std::vector<std::vector<std::size_t>> callees(productions.size());
  for (std::size_t i = 0; i < productions.size(); ++i) {
    const auto& p = productions[i];
    for (std::size_t a = 0; a < p.params.size(); ++a) {
      if (!is_identifier(p.params[a]))
        throw ValidationError("production " + p.name + ": invalid parameter name '" + p.params[a] + "'");
      if (index.count(p.params[a]))
        throw ValidationError("production " + p.name + ": parameter '" + p.params[a] +
                              "' clashes with a nonterminal");
      for (std::size_t b = 0; b < a; ++b)
        if (p.params[a] == p.params[b])
          throw ValidationError("production " + p.name + ": parameter '" + p.params[a] + "' declared twice");
    }
    RhsContext ctx{index, productions, p.params};
    std::vector<std::size_t> uses(p.params.size(), 0);
    std::vector<std::string> names;
    check_rhs(p.rhs, ctx, p.name, uses, names);
    for (std::size_t a = 0; a < uses.size(); ++a) {
      if (uses[a] > 1) {
        if (kind == GrammarKind::Slt)
          throw ValidationError("production " + p.name + ": parameter '" + p.params[a] +
                                "' occurs more than once in an slt grammar");
        linear_ = false;
      }
    }
    for (const auto& n : names) callees[i].push_back(index.find(n)->second);
  }

  // Cycle check (iterative DFS, colours 0 = new, 1 = open, 2 = done).
  std::vector<int> colour(productions.size(), 0);
  for (std::size_t root = 0; root < productions.size(); ++root) {
    if (colour[root]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    colour[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < callees[v].size()) {
        std::size_t w = callees[v][next++];
        if (colour[w] == 1)
          throw ValidationError("cycle among nonterminals through " + productions[w].name);
        if (colour[w] == 0) {
          colour[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        colour[v] = 2;
        stack.pop_back();
      }
    }
  }

  // Keep only productions reachable from the start symbol, in input order.
  std::vector<bool> reachable(productions.size(), false);
  std::vector<std::size_t> work{start_it->second};
  reachable[start_it->second] = true;
  while (!work.empty()) {
    std::size_t v = work.back();
    work.pop_back();
    for (auto w : callees[v])
      if (!reachable[w]) {
        reachable[w] = true;
        work.push_back(w);
      }
  }
  start_ = start;
  for (std::size_t i = 0; i < productions.size(); ++i) {
    if (!reachable[i]) continue;
    index_.emplace(productions[i].name, productions_.size());
    productions_.push_back(std::move(productions[i]));
  }
  if (kind_ == GrammarKind::Slt) linear_ = true;
}

const Production* Grammar::find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &productions_[it->second];
}

const Production& Grammar::at(std::string_view name) const {
  const auto* p = find(name);
  if (!p) throw ValidationError("unknown nonterminal " + std::string(name));
  return *p;
}

std::vector<std::string> Grammar::topological_order() const {
  std::vector<std::string> order;
  std::map<std::string, int, std::less<>> state;
  for (const auto& root : productions_) {
    if (state[root.name]) continue;
    // Post-order over the call graph.
    std::vector<std::pair<const Production*, std::vector<const Tree*>>> stack;
    auto push = [&](const Production* p) {
      state[p->name] = 1;
      stack.push_back({p, {&p->rhs}});
    };
    push(&root);
    while (!stack.empty()) {
      auto& [prod, nodes] = stack.back();
      if (nodes.empty()) {
        state[prod->name] = 2;
        order.push_back(prod->name);
        stack.pop_back();
        continue;
      }
      const Tree* node = nodes.back();
      nodes.pop_back();
      for (const auto& c : node->children) nodes.push_back(&c);
      const Production* callee = find(node->label);
      if (callee && !state[callee->name]) push(callee);
    }
  }
  return order;
}

namespace {

void collect_terminals(const Tree& node, const Grammar& g, const Production& p, std::set<std::string>& out) {
  bool is_param = std::find(p.params.begin(), p.params.end(), node.label) != p.params.end();
  if (!is_param && !g.is_nonterminal(node.label)) out.insert(node.label);
  for (const auto& c : node.children) collect_terminals(c, g, p, out);
}

}  // namespace

std::set<std::string> Grammar::terminal_labels() const {
  std::set<std::string> out;
  for (const auto& p : productions_) collect_terminals(p.rhs, *this, p, out);
  return out;
}

std::size_t Grammar::size() const {
  std::size_t total = 0;
  for (const auto& p : productions_) total += tree_size(p.rhs);
  return total;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

class LineReader {
 public:
  LineReader(std::string_view line, std::size_t number) : line_(line), number_(number) {}

  void skip_ws() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < line_.size() && line_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  std::string identifier() {
    skip_ws();
    std::size_t b = pos_;
    while (pos_ < line_.size()) {
      auto u = static_cast<unsigned char>(line_[pos_]);
      bool ok = std::isalpha(u) || u == '_' || (pos_ > b && std::isdigit(u));
      if (!ok) break;
      ++pos_;
    }
    if (b == pos_) fail("expected an identifier");
    return std::string(line_.substr(b, pos_ - b));
  }
  std::size_t pos() const { return pos_; }
  std::string_view rest() const { return line_.substr(pos_); }
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, number_, pos_ + 1); }

 private:
  std::string_view line_;
  std::size_t number_;
  std::size_t pos_ = 0;
};

}  // namespace

Grammar parse_grammar(std::string_view text) {
  std::vector<std::pair<std::string_view, std::size_t>> lines;
  {
    std::size_t number = 1, b = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i == text.size() || text[i] == '\n') {
        std::string_view line = text.substr(b, i - b);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        std::string t = trim(line);
        if (!t.empty() && t[0] != '#') lines.emplace_back(line, number);
        ++number;
        b = i + 1;
      }
    }
  }
  if (lines.empty()) throw SyntaxError("empty input, expected 'slt v1' or 'st v1'", 1, 1);

  GrammarKind kind;
  {
    std::string header = trim(lines.front().first);
    std::istringstream words(header);
    std::string w1, w2, extra;
    words >> w1 >> w2 >> extra;
    if ((w1 != "slt" && w1 != "st") || w2 != "v1" || !extra.empty())
      throw SyntaxError("expected header 'slt v1' or 'st v1'", lines.front().second, 1);
    kind = w1 == "slt" ? GrammarKind::Slt : GrammarKind::St;
  }

  std::string start;
  std::vector<Production> productions;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto [line, number] = lines[li];
    LineReader r(line, number);
    std::string name = r.identifier();
    if (name == "start" && productions.empty() && start.empty()) {
      r.skip_ws();
      if (r.pos() < line.size() && line[r.pos()] != '=' && line[r.pos()] != '(') {
        start = r.identifier();
        r.skip_ws();
        if (r.pos() != line.size()) r.fail("unexpected text after start symbol");
        continue;
      }
    }
    Production p;
    p.name = std::move(name);
    if (r.eat('(')) {
      if (!r.eat(')')) {
        do {
          p.params.push_back(r.identifier());
        } while (r.eat(','));
        r.expect(')');
      }
    }
    if (kind == GrammarKind::Slt && p.params.size() > 1)
      throw ValidationError("line " + std::to_string(number) + ": slt nonterminal " + p.name +
                            " has rank " + std::to_string(p.params.size()) + "; at most 1 is supported");
    r.expect('=');
    std::size_t offset = r.pos();
    try {
      p.rhs = parse_term(r.rest());
    } catch (const SyntaxError& e) {
      throw SyntaxError(e.detail(), number, offset + e.column());
    }
    productions.push_back(std::move(p));
  }
  if (productions.empty()) throw ValidationError("grammar has no productions");
  return Grammar(kind, std::move(productions), start);
}

namespace {

void write_term(const Tree& t, std::string& out) {
  // Iterative to cope with very deep right-hand sides.
  struct Frame {
    const Tree* node;
    std::size_t next;
  };
  std::vector<Frame> stack{{&t, 0}};
  out += quote_label(t.label);
  while (!stack.empty()) {
    auto& f = stack.back();
    if (f.node->children.empty()) {
      stack.pop_back();
      continue;
    }
    if (f.next == f.node->children.size()) {
      out += ')';
      stack.pop_back();
      continue;
    }
    out += f.next == 0 ? '(' : ',';
    const Tree* child = &f.node->children[f.next++];
    out += quote_label(child->label);
    stack.push_back({child, 0});
  }
}

}  // namespace

std::string write_grammar(const Grammar& g) {
  std::string out = g.kind() == GrammarKind::Slt ? "slt v1\n" : "st v1\n";
  out += "start " + g.start() + "\n";
  for (const auto& p : g.productions()) {
    out += p.name;
    if (!p.params.empty()) {
      out += '(';
      for (std::size_t i = 0; i < p.params.size(); ++i) {
        if (i) out += ',';
        out += p.params[i];
      }
      out += ')';
    }
    out += " = ";
    write_term(p.rhs, out);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sizes and evaluation

namespace {

struct Affine {
  BigCount constant;
  std::vector<BigCount> coeff;  // one per parameter of the enclosing production
};

Affine affine_of(const Tree& node, const Production& owner, const Grammar& g,
                 const std::map<std::string, Affine, std::less<>>& done) {
  Affine out{0, std::vector<BigCount>(owner.params.size(), 0)};
  auto param = std::find(owner.params.begin(), owner.params.end(), node.label);
  if (param != owner.params.end()) {
    out.coeff[static_cast<std::size_t>(param - owner.params.begin())] = 1;
    return out;
  }
  const Production* callee = g.find(node.label);
  if (!callee) {
    out.constant = 1;
    for (const auto& c : node.children) {
      Affine a = affine_of(c, owner, g, done);
      out.constant += a.constant;
      for (std::size_t j = 0; j < out.coeff.size(); ++j) out.coeff[j] += a.coeff[j];
    }
    return out;
  }
  const Affine& f = done.find(callee->name)->second;
  out.constant = f.constant;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (f.coeff[i] == 0) continue;
    Affine a = affine_of(node.children[i], owner, g, done);
    out.constant += f.coeff[i] * a.constant;
    for (std::size_t j = 0; j < out.coeff.size(); ++j) out.coeff[j] += f.coeff[i] * a.coeff[j];
  }
  return out;
}

class Evaluator {
 public:
  explicit Evaluator(const Grammar& g) : g_(g) {}

  Tree call(const Production& p, const std::vector<Tree>& args) {
    if (p.params.empty()) {
      auto it = memo_.find(p.name);
      if (it != memo_.end()) return it->second;
      Tree t = instantiate(p.rhs, p, args);
      memo_.emplace(p.name, t);
      return t;
    }
    return instantiate(p.rhs, p, args);
  }

 private:
  Tree instantiate(const Tree& node, const Production& owner, const std::vector<Tree>& args) {
    auto param = std::find(owner.params.begin(), owner.params.end(), node.label);
    if (param != owner.params.end()) return args[static_cast<std::size_t>(param - owner.params.begin())];
    std::vector<Tree> kids;
    kids.reserve(node.children.size());
    for (const auto& c : node.children) kids.push_back(instantiate(c, owner, args));
    if (const Production* callee = g_.find(node.label)) return call(*callee, kids);
    return Tree(node.label, std::move(kids));
  }

  const Grammar& g_;
  std::map<std::string, Tree, std::less<>> memo_;
};

}  // namespace

BigCount size_of(const Grammar& g, std::string_view nonterminal) {
  std::map<std::string, Affine, std::less<>> done;
  for (const auto& name : g.topological_order()) {
    const Production& p = g.at(name);
    done.emplace(name, affine_of(p.rhs, p, g, done));
  }
  const Affine& f = done.at(std::string(nonterminal));
  BigCount total = f.constant;
  for (const auto& c : f.coeff) total += c;
  return total;
}

Tree eval(const Grammar& g, const BigCount& max_nodes) {
  BigCount size = size_of(g, g.start());
  if (size > max_nodes)
    throw LimitError("tree has " + to_string(size) + " nodes, above the limit of " + to_string(max_nodes));
  Evaluator ev(g);
  return ev.call(g.at(g.start()), {});
}

// ---------------------------------------------------------------------------
// Transformations

namespace {

template <typename F>
Tree map_terminals(const Tree& node, const Grammar& g, const Production& owner, F&& f) {
  std::vector<Tree> kids;
  kids.reserve(node.children.size());
  for (const auto& c : node.children) kids.push_back(map_terminals(c, g, owner, f));
  bool is_param = std::find(owner.params.begin(), owner.params.end(), node.label) != owner.params.end();
  if (is_param || g.is_nonterminal(node.label)) return Tree(node.label, std::move(kids));
  return f(node.label, std::move(kids));
}

template <typename F>
Grammar map_grammar(const Grammar& g, F&& f) {
  std::vector<Production> out;
  for (const auto& p : g.productions()) out.push_back({p.name, p.params, map_terminals(p.rhs, g, p, f)});
  return Grammar(g.kind(), std::move(out), g.start());
}

}  // namespace

Grammar ranked_grammar(const Grammar& g) {
  return map_grammar(g, [](const std::string& label, std::vector<Tree> kids) {
    if (!label_accepts_ranking(label))
      throw ValidationError("label '" + label + "' contains the reserved rank delimiter '#'");
    std::string ranked = mangle_rank(label, kids.size());
    return Tree(std::move(ranked), std::move(kids));
  });
}

bool is_ranked(const Grammar& g) {
  bool all = true;
  map_grammar(g, [&](const std::string& label, std::vector<Tree> kids) {
    auto r = split_rank(label);
    if (!r || r->rank != kids.size()) all = false;
    return Tree(label, std::move(kids));
  });
  return all;
}

Grammar ensure_ranked(const Grammar& g) { return is_ranked(g) ? g : ranked_grammar(g); }

Grammar even_grammar(const Grammar& g) {
  return map_grammar(g, [](const std::string& label, std::vector<Tree> kids) {
    for (auto& k : kids) k = Tree(std::string(kSubdivisionLabel), {std::move(k)});
    return Tree(label, std::move(kids));
  });
}

Grammar tree_to_dag(const Tree& t) {
  std::set<std::string> labels;
  std::vector<const Tree*> order;  // post-order
  {
    std::vector<std::pair<const Tree*, bool>> stack{{&t, false}};
    while (!stack.empty()) {
      auto [node, expanded] = stack.back();
      stack.pop_back();
      if (expanded) {
        order.push_back(node);
        continue;
      }
      labels.insert(node->label);
      stack.emplace_back(node, true);
      for (std::size_t i = node->children.size(); i-- > 0;) stack.emplace_back(&node->children[i], false);
    }
  }
  NameAllocator names(labels);
  std::string root_name = labels.count("S") ? names.fresh() : "S";
  names.reserve(root_name);

  std::map<std::pair<std::string, std::vector<std::size_t>>, std::size_t> ids;
  std::map<const Tree*, std::size_t> id_of;
  std::vector<Production> productions;
  for (const Tree* node : order) {
    std::vector<std::size_t> kid_ids;
    for (const auto& c : node->children) kid_ids.push_back(id_of[&c]);
    auto key = std::make_pair(node->label, kid_ids);
    auto it = ids.find(key);
    if (it == ids.end()) {
      Tree rhs(node->label);
      for (auto k : kid_ids) rhs.children.emplace_back(productions[k].name);
      std::string name = node == &t ? root_name : names.fresh();
      it = ids.emplace(std::move(key), productions.size()).first;
      productions.push_back({std::move(name), {}, std::move(rhs)});
    }
    id_of[node] = it->second;
  }
  std::string start = productions[id_of[&t]].name;
  return Grammar(GrammarKind::Slt, std::move(productions), start);
}

Grammar tree_grammar(const Tree& t) {
  std::set<std::string> labels;
  std::vector<const Tree*> stack{&t};
  while (!stack.empty()) {
    const Tree* n = stack.back();
    stack.pop_back();
    labels.insert(n->label);
    for (const auto& c : n->children) stack.push_back(&c);
  }
  NameAllocator names(labels);
  std::string name = labels.count("S") ? names.fresh() : "S";
  return Grammar(GrammarKind::Slt, {{name, {}, t}}, name);
}

}  // namespace treegram
