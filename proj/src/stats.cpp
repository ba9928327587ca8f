#include "treegram/stats.hpp"

#include <algorithm>

#include "treegram/error.hpp"
#include "treegram/oracles.hpp"

namespace treegram {

namespace {

// Diameter of a node whose children have the given heights and diameters.
BigCount node_diameter(const std::vector<std::pair<const BigCount*, const BigCount*>>& kids) {
  BigCount best = 0, top1 = 0, top2 = 0;
  for (auto [h, d] : kids) {
    if (*d > best) best = *d;
    BigCount reach = *h + 1;
    if (reach > top1) {
      top2 = top1;
      top1 = reach;
    } else if (reach > top2) {
      top2 = reach;
    }
  }
  return std::max(best, BigCount(top1 + top2));
}

}  // namespace

TreeStats node_stats(const std::vector<const TreeStats*>& children) {
  TreeStats out;
  BigCount max_h = -1;
  std::vector<std::pair<const BigCount*, const BigCount*>> kids;
  for (const auto* c : children) {
    out.size += c->size;
    if (c->height > max_h) max_h = c->height;
    kids.emplace_back(&c->height, &c->diameter);
  }
  out.height = max_h + 1;
  out.diameter = node_diameter(kids);
  return out;
}

ContextStats hole_node_stats(const std::vector<const TreeStats*>& children) {
  ContextStats out;
  out.size = 2;
  out.rty = 1;
  BigCount max_h = -1;
  static const BigCount zero = 0;
  std::vector<std::pair<const BigCount*, const BigCount*>> kids{{&zero, &zero}};
  for (const auto* c : children) {
    out.size += c->size;
    if (c->height > max_h) max_h = c->height;
    kids.emplace_back(&c->height, &c->diameter);
  }
  out.ecc = max_h + 2;
  if (out.ecc < 1) out.ecc = 1;
  out.height = 1 + std::max(BigCount(0), max_h);
  out.diameter = node_diameter(kids);
  return out;
}

ContextStats compose(const ContextStats& outer, const ContextStats& inner) {
  ContextStats out;
  out.size = outer.size + inner.size - 1;
  out.rty = outer.rty + inner.rty;
  out.ecc = std::max(inner.ecc, BigCount(outer.ecc + inner.rty));
  out.height = std::max(outer.height, BigCount(outer.rty + inner.height));
  out.diameter = std::max({outer.diameter, inner.diameter, BigCount(outer.ecc + inner.height)});
  return out;
}

TreeStats apply(const ContextStats& ctx, const TreeStats& arg) {
  TreeStats out;
  out.size = ctx.size - 1 + arg.size;
  out.height = std::max(ctx.height, BigCount(ctx.rty + arg.height));
  out.diameter = std::max({ctx.diameter, arg.diameter, BigCount(ctx.ecc + arg.height)});
  return out;
}

void GrammarStats::update(const NormalGrammar& g) {
  std::size_t n = g.count();
  std::size_t old = trees_.size();
  if (old == n) return;
  trees_.resize(n);
  contexts_.resize(n);
  ranks_.resize(n);
  done_.resize(n, 0);
  std::vector<NtId> fresh;
  for (std::size_t i = old; i < n; ++i) fresh.push_back(static_cast<NtId>(i));
  for (NtId id : g.topological_order(fresh)) {
    if (done_[id]) continue;
    const auto& r = g.rule(id);
    ranks_[id] = static_cast<char>(r.rank());
    std::vector<const TreeStats*> kids;
    switch (r.type) {
      case RuleType::Node:
        for (auto a : r.args) kids.push_back(&trees_[a]);
        trees_[id] = node_stats(kids);
        break;
      case RuleType::ContextNode:
        for (auto a : r.args) kids.push_back(&trees_[a]);
        contexts_[id] = hole_node_stats(kids);
        break;
      case RuleType::Apply:
        trees_[id] = apply(contexts_[r.head], trees_[r.arg]);
        break;
      case RuleType::Compose:
        contexts_[id] = compose(contexts_[r.head], contexts_[r.arg]);
        break;
    }
    done_[id] = 1;
  }
}

std::variant<TreeStats, ContextStats> mixed_stats(const GrammarStats& stats, const MixedTerm& t) {
  switch (t.kind) {
    case MixedTerm::Kind::Hole:
      return identity_context();
    case MixedTerm::Kind::Nonterminal: {
      if (t.children.empty()) return stats.tree(t.nt);
      auto inner = mixed_stats(stats, t.children[0]);
      const ContextStats& ctx = stats.context(t.nt);
      if (auto* c = std::get_if<ContextStats>(&inner)) return compose(ctx, *c);
      return apply(ctx, std::get<TreeStats>(inner));
    }
    case MixedTerm::Kind::Terminal: {
      std::vector<TreeStats> trees;
      std::optional<ContextStats> below;
      trees.reserve(t.children.size());
      for (const auto& c : t.children) {
        auto s = mixed_stats(stats, c);
        if (auto* ctx = std::get_if<ContextStats>(&s)) {
          if (below) throw ValidationError("mixed term has more than one hole");
          below = *ctx;
        } else {
          trees.push_back(std::get<TreeStats>(s));
        }
      }
      std::vector<const TreeStats*> ptrs;
      for (const auto& s : trees) ptrs.push_back(&s);
      if (!below) return node_stats(ptrs);
      return compose(hole_node_stats(ptrs), *below);
    }
  }
  return TreeStats{};
}

TreeStats explicit_tree_stats(const Tree& t) {
  return {tree_size(t), tree_height(t), explicit_diameter(t)};
}

ContextStats explicit_context_stats(const Tree& t, const std::string& hole) {
  DeweyAddress y = find_label(t, hole);
  ContextStats out;
  out.size = tree_size(t);
  out.rty = y.size();
  out.ecc = explicit_eccentricity(t, y);
  out.height = tree_height(t);
  out.diameter = explicit_diameter(t);
  return out;
}

}  // namespace treegram
