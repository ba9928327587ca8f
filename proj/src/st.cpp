#include "treegram/st.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>

#include "treegram/bisim.hpp"
#include "treegram/error.hpp"

namespace treegram {

// ---------------------------------------------------------------------------
// Expansion

namespace {

class DagBuilder {
 public:
  DagBuilder(const Grammar& g, const ExpansionBudget& budget) : g_(g), budget_(budget) {}

  Grammar run() {
    std::size_t root = instantiate(g_.at(g_.start()), {});
    std::set<std::string> labels = g_.terminal_labels();
    NameAllocator names(labels);
    std::string root_name = labels.count("S") ? names.fresh() : "S";
    names.reserve(root_name);
    std::vector<std::string> name(nodes_.size());
    std::vector<Production> productions;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      name[i] = i == root ? root_name : names.fresh();
      Tree rhs(nodes_[i].first);
      for (auto k : nodes_[i].second) rhs.children.emplace_back(name[k]);
      productions.push_back({name[i], {}, std::move(rhs)});
    }
    return Grammar(GrammarKind::Slt, std::move(productions), root_name);
  }

 private:
  using Node = std::pair<std::string, std::vector<std::size_t>>;

  std::size_t node(const std::string& label, std::vector<std::size_t> kids) {
    Node key{label, std::move(kids)};
    if (auto it = ids_.find(key); it != ids_.end()) return it->second;
    if (nodes_.size() >= budget_.max_nodes)
      throw LimitError("dag expansion exceeds " + std::to_string(budget_.max_nodes) + " nodes (" +
                       std::to_string(nodes_.size()) + " built)");
    nodes_.push_back(key);
    return ids_[std::move(key)] = nodes_.size() - 1;
  }

  std::size_t instantiate(const Production& p, const std::vector<std::size_t>& args) {
    auto key = std::make_pair(p.name, args);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (++count_[p.name] > budget_.max_instantiations)
      throw LimitError("nonterminal " + p.name + " needs more than " + std::to_string(budget_.max_instantiations) +
                       " instantiations (" + std::to_string(nodes_.size()) + " dag nodes built)");
    std::size_t id = build(p, p.rhs, args);
    memo_.emplace(std::move(key), id);
    return id;
  }

  std::size_t build(const Production& p, const Tree& t, const std::vector<std::size_t>& args) {
    if (t.children.empty()) {
      auto it = std::find(p.params.begin(), p.params.end(), t.label);
      if (it != p.params.end()) return args[static_cast<std::size_t>(it - p.params.begin())];
    }
    std::vector<std::size_t> kids;
    kids.reserve(t.children.size());
    for (const auto& c : t.children) kids.push_back(build(p, c, args));
    if (const Production* callee = g_.find(t.label)) return instantiate(*callee, kids);
    return node(t.label, std::move(kids));
  }

  const Grammar& g_;
  const ExpansionBudget& budget_;
  std::vector<Node> nodes_;
  std::map<Node, std::size_t> ids_;
  std::map<std::pair<std::string, std::vector<std::size_t>>, std::size_t> memo_;
  std::map<std::string, std::size_t> count_;
};

}  // namespace

Grammar st_to_dag(const Grammar& g, const ExpansionBudget& budget) { return DagBuilder(g, budget).run(); }

bool iso_st(const Grammar& a, const Grammar& b, const ExpansionBudget& budget, const CanonOptions& options) {
  return iso_rooted(st_to_dag(a, budget), st_to_dag(b, budget), options);
}

bool bisim_st(const Grammar& a, const Grammar& b, const ExpansionBudget& budget, const CanonOptions& options) {
  return bisim_equal(st_to_dag(a, budget), st_to_dag(b, budget), options);
}

// ---------------------------------------------------------------------------
// QBF

namespace {

struct Raw {
  enum class Kind { Var, Not, And, Or } kind = Kind::Var;
  std::string var;
  std::size_t column = 0;
  std::vector<Raw> children;
};

class QbfParser {
 public:
  explicit QbfParser(std::string_view text) : s_(text) {}

  Qbf run() {
    Qbf f;
    std::map<std::string, std::size_t> bound;
    for (;;) {
      std::size_t save = pos_;
      std::string q = ident();
      if (q == "A" || q == "E") {
        std::string v = ident();
        if (!v.empty() && peek() == '.') {
          ++pos_;
          if (bound.count(v)) throw ValidationError("variable " + v + " is bound twice");
          bound[v] = f.prefix.size();
          f.prefix.push_back({q == "A", v});
          continue;
        }
      }
      pos_ = save;
      break;
    }
    Raw m = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    f.matrix = nnf(m, false, bound);
    return f;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  [[noreturn]] void fail(const std::string& what) { throw SyntaxError(what, 1, pos_ + 1); }

  std::string ident() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  Raw expr() {
    Raw left = term();
    while (peek() == '|') {
      ++pos_;
      Raw r{Raw::Kind::Or, {}, 0, {std::move(left), term()}};
      left = std::move(r);
    }
    return left;
  }

  Raw term() {
    Raw left = factor();
    while (peek() == '&') {
      ++pos_;
      Raw r{Raw::Kind::And, {}, 0, {std::move(left), factor()}};
      left = std::move(r);
    }
    return left;
  }

  Raw factor() {
    char c = peek();
    if (c == '!') {
      ++pos_;
      return Raw{Raw::Kind::Not, {}, 0, {factor()}};
    }
    if (c == '(') {
      ++pos_;
      Raw r = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return r;
    }
    std::size_t column = pos_ + 1;
    std::string v = ident();
    if (v.empty()) fail(c ? "unexpected '" + std::string(1, c) + "'" : "unexpected end of formula");
    return Raw{Raw::Kind::Var, v, column, {}};
  }

  static Qbf::Node nnf(const Raw& r, bool neg, const std::map<std::string, std::size_t>& bound) {
    using K = Qbf::Node::Kind;
    switch (r.kind) {
      case Raw::Kind::Var: {
        auto it = bound.find(r.var);
        if (it == bound.end()) throw ValidationError("free variable " + r.var + " at column " + std::to_string(r.column));
        return {K::Literal, it->second, neg, {}};
      }
      case Raw::Kind::Not:
        return nnf(r.children[0], !neg, bound);
      default: {
        bool is_and = (r.kind == Raw::Kind::And) != neg;
        return {is_and ? K::And : K::Or, 0, false,
                {nnf(r.children[0], neg, bound), nnf(r.children[1], neg, bound)}};
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string node_string(const Qbf& f, const Qbf::Node& n) {
  if (n.kind == Qbf::Node::Kind::Literal) return (n.negated ? "!" : "") + f.prefix[n.var].var;
  const char* op = n.kind == Qbf::Node::Kind::And ? " & " : " | ";
  return "(" + node_string(f, n.children[0]) + op + node_string(f, n.children[1]) + ")";
}

bool holds(const Qbf::Node& n, std::uint32_t bits) {
  switch (n.kind) {
    case Qbf::Node::Kind::Literal: return (((bits >> n.var) & 1u) != 0) != n.negated;
    case Qbf::Node::Kind::And: return holds(n.children[0], bits) && holds(n.children[1], bits);
    case Qbf::Node::Kind::Or: return holds(n.children[0], bits) || holds(n.children[1], bits);
  }
  return false;
}

bool eval_from(const Qbf& f, std::size_t i, std::uint32_t bits) {
  if (i == f.prefix.size()) return holds(f.matrix, bits);
  bool zero = eval_from(f, i + 1, bits);
  if (f.prefix[i].forall ? !zero : zero) return zero;
  return eval_from(f, i + 1, bits | (1u << i));
}

void variables(const Qbf::Node& n, std::set<std::size_t>& out) {
  if (n.kind == Qbf::Node::Kind::Literal) out.insert(n.var);
  for (const auto& c : n.children) variables(c, out);
}

class GadgetWriter {
 public:
  GadgetWriter(const Qbf& f, LiteralGadget gadget) : f_(f), gadget_(gadget) {}

  std::pair<Grammar, Grammar> run() {
    std::set<std::size_t> vars;
    variables(f_.matrix, vars);
    std::size_t top = matrix(f_.matrix);
    // Quantifiers from the innermost outwards: level i binds variable i.
    for (std::size_t i = f_.prefix.size(); i-- > 0;) {
      std::vector<std::size_t> inner, outer;
      for (auto v : vars)
        if (v <= i) inner.push_back(v);
      for (auto v : inner)
        if (v < i) outer.push_back(v);
      auto call = [&](char side, std::size_t target, const char* value) {
        std::vector<Tree> args;
        for (auto v : inner) args.push_back(v == i ? Tree(value) : Tree(param(v)));
        return Tree(std::string(1, side) + std::to_string(target), std::move(args));
      };
      auto ab = [](Tree x, Tree y) { return Tree("f", {Tree("a", {std::move(x)}), Tree("b", {std::move(y)})}); };
      std::size_t k = next_++;
      if (f_.prefix[i].forall) {
        emit('A', k, outer, ab(call('A', top, "0"), call('A', top, "1")));
        emit('B', k, outer, ab(call('B', top, "0"), call('B', top, "1")));
      } else {
        emit('A', k, outer,
             Tree("f", {ab(call('A', top, "0"), call('B', top, "1")), ab(call('B', top, "0"), call('A', top, "1"))}));
        emit('B', k, outer,
             Tree("f", {ab(call('A', top, "0"), call('A', top, "1")), ab(call('B', top, "0"), call('B', top, "1"))}));
      }
      top = k;
      vars.erase(i);
    }
    std::string a = "A" + std::to_string(top), b = "B" + std::to_string(top);
    return {Grammar(GrammarKind::St, productions_, a), Grammar(GrammarKind::St, productions_, b)};
  }

 private:
  static std::string param(std::size_t v) { return "v" + std::to_string(v); }

  void emit(char side, std::size_t k, const std::vector<std::size_t>& vars, Tree rhs) {
    std::vector<std::string> params;
    for (auto v : vars) params.push_back(param(v));
    productions_.push_back({std::string(1, side) + std::to_string(k), std::move(params), std::move(rhs)});
  }

  Tree call(char side, std::size_t k, const std::vector<std::size_t>& vars) {
    std::vector<Tree> args;
    for (auto v : vars) args.emplace_back(param(v));
    return Tree(std::string(1, side) + std::to_string(k), std::move(args));
  }

  // Returns the index k of A_k / B_k for the subformula.
  std::size_t matrix(const Qbf::Node& n) {
    std::set<std::size_t> vs;
    variables(n, vs);
    std::vector<std::size_t> vars(vs.begin(), vs.end());
    if (n.kind == Qbf::Node::Kind::Literal) {
      std::size_t k = next_++;
      Tree z(param(n.var));
      std::string c = n.negated ? "0" : "1";
      emit('A', k, vars, Tree("f", {z, Tree(c)}));
      if (gadget_ == LiteralGadget::Paper)
        emit('B', k, vars, Tree("f", {Tree(c), z}));
      else
        emit('B', k, vars, Tree("f", {Tree(c), Tree(c)}));
      return k;
    }
    std::size_t l = matrix(n.children[0]);
    std::size_t r = matrix(n.children[1]);
    std::vector<std::size_t> lv, rv;
    {
      std::set<std::size_t> s;
      variables(n.children[0], s);
      lv.assign(s.begin(), s.end());
      s.clear();
      variables(n.children[1], s);
      rv.assign(s.begin(), s.end());
    }
    auto ab = [](Tree x, Tree y) { return Tree("f", {Tree("a", {std::move(x)}), Tree("b", {std::move(y)})}); };
    std::size_t k = next_++;
    if (n.kind == Qbf::Node::Kind::And) {
      emit('A', k, vars, ab(call('A', l, lv), call('A', r, rv)));
      emit('B', k, vars, ab(call('B', l, lv), call('B', r, rv)));
    } else {
      emit('A', k, vars, Tree("f", {ab(call('A', l, lv), call('B', r, rv)), ab(call('B', l, lv), call('A', r, rv))}));
      emit('B', k, vars, Tree("f", {ab(call('A', l, lv), call('A', r, rv)), ab(call('B', l, lv), call('B', r, rv))}));
    }
    return k;
  }

  const Qbf& f_;
  LiteralGadget gadget_;
  std::vector<Production> productions_;
  std::size_t next_ = 0;
};

}  // namespace

Qbf qbf_parse(std::string_view text) { return QbfParser(text).run(); }

std::string to_string(const Qbf& f) {
  std::string out;
  for (const auto& q : f.prefix) out += std::string(q.forall ? "A " : "E ") + q.var + ". ";
  std::string m = node_string(f, f.matrix);
  if (m.size() > 1 && m.front() == '(') m = m.substr(1, m.size() - 2);
  return out + m;
}

bool qbf_eval(const Qbf& f) {
  if (f.prefix.size() > 24) throw LimitError("qbf_eval handles at most 24 variables, got " + std::to_string(f.prefix.size()));
  return eval_from(f, 0, 0);
}

std::pair<Grammar, Grammar> qbf_to_st(const Qbf& f, LiteralGadget gadget) { return GadgetWriter(f, gadget).run(); }

}  // namespace treegram
