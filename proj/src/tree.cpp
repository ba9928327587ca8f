#include "treegram/tree.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "treegram/error.hpp"

namespace treegram {

std::string format_address(const DeweyAddress& address) {
  if (address.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < address.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(address[i]);
  }
  return out;
}

namespace {

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  Tree parse() {
    skip_ws();
    if (at_end()) fail("empty input");
    Tree t = term();
    skip_ws();
    if (!at_end()) fail("unexpected trailing input");
    return t;
  }

 private:
  Tree term() {
    // Iterative so that deep chains do not exhaust the stack.
    struct Frame {
      Tree node;
    };
    std::vector<Frame> stack;
    stack.push_back({Tree(symbol())});
    for (;;) {
      skip_ws();
      if (peek() == '(') {
        advance();
        skip_ws();
        stack.push_back({Tree(symbol())});
        continue;
      }
      // The current top is complete.
      for (;;) {
        if (stack.size() == 1) return std::move(stack.back().node);
        Tree done = std::move(stack.back().node);
        stack.pop_back();
        stack.back().node.children.push_back(std::move(done));
        skip_ws();
        if (peek() == ',') {
          advance();
          skip_ws();
          stack.push_back({Tree(symbol())});
          break;
        }
        if (peek() == ')') {
          advance();
          continue;
        }
        fail(at_end() ? "unexpected end of input, expected ',' or ')'" : "expected ',' or ')'");
      }
    }
  }

  std::string symbol() {
    if (at_end()) fail("unexpected end of input, expected a symbol");
    char c = peek();
    if (c == '\'') {
      advance();
      std::string out;
      while (!at_end() && peek() != '\'') {
        out += peek();
        advance();
      }
      if (at_end()) fail("unterminated quoted symbol");
      advance();
      if (out.empty()) fail("empty quoted symbol");
      return out;
    }
    auto u = static_cast<unsigned char>(c);
    if (!(std::isalpha(u) || c == '_')) fail(std::string("unexpected character '") + c + "'");
    std::string out;
    while (!at_end()) {
      auto v = static_cast<unsigned char>(peek());
      if (!(std::isalnum(v) || v == '_')) break;
      out += peek();
      advance();
    }
    return out;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, line_, column_); }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

void write_term(const Tree& t, std::string& out) {
  out += quote_label(t.label);
  if (t.children.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i) out += ',';
    write_term(t.children[i], out);
  }
  out += ')';
}

}  // namespace

Tree parse_term(std::string_view text) { return TermParser(text).parse(); }

std::string to_string(const Tree& t) {
  std::string out;
  write_term(t, out);
  return out;
}

std::size_t tree_size(const Tree& t) {
  std::size_t n = 0;
  std::vector<const Tree*> stack{&t};
  while (!stack.empty()) {
    const Tree* cur = stack.back();
    stack.pop_back();
    ++n;
    for (const auto& c : cur->children) stack.push_back(&c);
  }
  return n;
}

std::size_t tree_height(const Tree& t) {
  std::size_t best = 0;
  std::vector<std::pair<const Tree*, std::size_t>> stack{{&t, 0}};
  while (!stack.empty()) {
    auto [cur, depth] = stack.back();
    stack.pop_back();
    best = std::max(best, depth);
    for (const auto& c : cur->children) stack.emplace_back(&c, depth + 1);
  }
  return best;
}

std::vector<std::string> dflr(const Tree& t) {
  std::vector<std::string> out;
  std::vector<const Tree*> stack{&t};
  while (!stack.empty()) {
    const Tree* cur = stack.back();
    stack.pop_back();
    out.push_back(cur->label);
    for (auto it = cur->children.rbegin(); it != cur->children.rend(); ++it) stack.push_back(&*it);
  }
  return out;
}

Tree ranked_tree(const Tree& t) {
  if (!label_accepts_ranking(t.label))
    throw ValidationError("label '" + t.label + "' contains the reserved rank delimiter");
  Tree out(mangle_rank(t.label, t.children.size()));
  out.children.reserve(t.children.size());
  for (const auto& c : t.children) out.children.push_back(ranked_tree(c));
  return out;
}

Ordering llex_compare(const std::vector<std::string>& a, const std::vector<std::string>& b,
                      const LabelOrder& ord) {
  if (a.size() != b.size()) return a.size() < b.size() ? Ordering::Less : Ordering::Greater;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    int c = ord.compare(a[i], b[i]);
    if (c != 0) return to_ordering(c);
  }
  return Ordering::Equal;
}

Ordering llex_compare_trees(const Tree& s, const Tree& t, const LabelOrder& ord) {
  return llex_compare(dflr(s), dflr(t), ord);
}

bool has_address(const Tree& t, const DeweyAddress& address) {
  const Tree* cur = &t;
  for (std::size_t step : address) {
    if (step == 0 || step > cur->children.size()) return false;
    cur = &cur->children[step - 1];
  }
  return true;
}

const Tree& subtree_at(const Tree& t, const DeweyAddress& address) {
  const Tree* cur = &t;
  for (std::size_t step : address) {
    if (step == 0 || step > cur->children.size())
      throw ValidationError("address " + format_address(address) + " is not a node of the tree");
    cur = &cur->children[step - 1];
  }
  return *cur;
}

}  // namespace treegram
