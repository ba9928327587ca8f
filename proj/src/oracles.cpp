#include "treegram/oracles.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <utility>

#include "treegram/error.hpp"

namespace treegram {

namespace {

struct CanonNode {
  Tree tree;
  std::vector<std::string> traversal;
};

CanonNode canon_rec(const Tree& t, const LabelOrder& ord) {
  std::vector<CanonNode> kids;
  kids.reserve(t.children.size());
  for (const auto& c : t.children) kids.push_back(canon_rec(c, ord));
  std::stable_sort(kids.begin(), kids.end(), [&](const CanonNode& a, const CanonNode& b) {
    return llex_compare(a.traversal, b.traversal, ord) == Ordering::Less;
  });
  CanonNode out{Tree(t.label), {t.label}};
  for (auto& k : kids) {
    out.traversal.insert(out.traversal.end(), k.traversal.begin(), k.traversal.end());
    out.tree.children.push_back(std::move(k.tree));
  }
  return out;
}

// Flattened view of a tree as an undirected graph.
struct Graph {
  std::vector<std::string> label;
  std::vector<DeweyAddress> address;
  std::vector<std::vector<std::size_t>> adj;
  std::vector<std::vector<std::size_t>> children;
};

Graph flatten(const Tree& t) {
  Graph g;
  std::vector<std::pair<const Tree*, std::size_t>> stack;  // node, parent (npos for root)
  constexpr auto none = static_cast<std::size_t>(-1);
  stack.emplace_back(&t, none);
  std::vector<DeweyAddress> pending{{}};
  while (!stack.empty()) {
    auto [cur, parent] = stack.back();
    stack.pop_back();
    DeweyAddress addr = std::move(pending.back());
    pending.pop_back();
    std::size_t id = g.label.size();
    g.label.push_back(cur->label);
    g.address.push_back(addr);
    g.adj.emplace_back();
    g.children.emplace_back();
    if (parent != none) {
      g.adj[id].push_back(parent);
      g.adj[parent].push_back(id);
      g.children[parent].push_back(id);
    }
    for (std::size_t i = cur->children.size(); i-- > 0;) {
      stack.emplace_back(&cur->children[i], id);
      DeweyAddress child = addr;
      child.push_back(i + 1);
      pending.push_back(std::move(child));
    }
  }
  return g;
}

std::vector<std::size_t> bfs_distances(const Graph& g, std::size_t from) {
  std::vector<std::size_t> dist(g.label.size(), static_cast<std::size_t>(-1));
  std::queue<std::size_t> q;
  dist[from] = 0;
  q.push(from);
  while (!q.empty()) {
    auto v = q.front();
    q.pop();
    for (auto w : g.adj[v]) {
      if (dist[w] == static_cast<std::size_t>(-1)) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

std::size_t index_of(const Graph& g, const DeweyAddress& u) {
  for (std::size_t i = 0; i < g.address.size(); ++i)
    if (g.address[i] == u) return i;
  throw ValidationError("address " + format_address(u) + " is not a node of the tree");
}

Tree rooted_copy(const Graph& g, std::size_t v, std::size_t parent) {
  Tree out(g.label[v]);
  for (auto w : g.adj[v])
    if (w != parent) out.children.push_back(rooted_copy(g, w, v));
  return out;
}

}  // namespace

Tree ahu_canon(const Tree& t, const LabelOrder& ord) { return canon_rec(t, ord).tree; }

std::string iso_key(const Tree& t) {
  std::vector<std::string> kids;
  kids.reserve(t.children.size());
  for (const auto& c : t.children) kids.push_back(iso_key(c));
  std::sort(kids.begin(), kids.end());
  std::string out = std::to_string(t.label.size()) + ":" + t.label + "(";
  for (const auto& k : kids) out += k;
  out += ")";
  return out;
}

bool brute_force_iso(const Tree& s, const Tree& t) {
  if (s.label != t.label || s.children.size() != t.children.size()) return false;
  std::size_t k = s.children.size();
  std::vector<bool> used(k, false);
  // Match children of s in order against unused children of t.
  auto match = [&](auto&& self, std::size_t i) -> bool {
    if (i == k) return true;
    for (std::size_t j = 0; j < k; ++j) {
      if (used[j] || !brute_force_iso(s.children[i], t.children[j])) continue;
      used[j] = true;
      if (self(self, i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  return match(match, 0);
}

bool brute_force_unrooted_iso(const Tree& s, const Tree& t) {
  if (tree_size(s) != tree_size(t)) return false;
  for (const auto& u : all_addresses(t))
    if (brute_force_iso(s, naive_reroot(t, u))) return true;
  return false;
}

Tree naive_even(const Tree& t) {
  Tree out(t.label);
  for (const auto& c : t.children)
    out.children.push_back(Tree(std::string(kSubdivisionLabel), {naive_even(c)}));
  return out;
}

DeweyAddress naive_center(const Tree& t) {
  Graph g = flatten(t);
  std::size_t n = g.label.size();
  std::vector<std::size_t> degree(n);
  std::vector<bool> removed(n, false);
  std::vector<std::size_t> layer;
  for (std::size_t v = 0; v < n; ++v) {
    degree[v] = g.adj[v].size();
    if (degree[v] <= 1) layer.push_back(v);
  }
  std::size_t remaining = n;
  while (remaining > 2) {
    std::vector<std::size_t> next;
    for (auto v : layer) {
      removed[v] = true;
      --remaining;
    }
    for (auto v : layer)
      for (auto w : g.adj[v])
        if (!removed[w] && --degree[w] == 1) next.push_back(w);
    layer = std::move(next);
  }
  if (remaining == 2) throw ValidationError("two centers; subdivide first");
  for (std::size_t v = 0; v < n; ++v)
    if (!removed[v]) return g.address[v];
  throw ValidationError("empty tree");
}

Tree naive_reroot(const Tree& t, const DeweyAddress& u) {
  if (!has_address(t, u))
    throw ValidationError("address " + format_address(u) + " is not a node of the tree");
  // Chain of ancestors from the root down to u.
  std::vector<const Tree*> chain{&t};
  for (std::size_t step : u) chain.push_back(&chain.back()->children[step - 1]);

  // Rebuild bottom-up along the reversed path: `above` is the re-rooted
  // remainder hanging below the current ancestor.
  Tree above;
  bool have_above = false;
  for (std::size_t depth = 0; depth < u.size(); ++depth) {
    const Tree& node = *chain[depth];
    std::size_t slot = u[depth] - 1;
    Tree rebuilt(node.label);
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      if (i == slot) {
        if (have_above) rebuilt.children.push_back(std::move(above));
      } else {
        rebuilt.children.push_back(node.children[i]);
      }
    }
    above = std::move(rebuilt);
    have_above = true;
  }
  Tree result = *chain.back();
  if (have_above) result.children.push_back(std::move(above));
  return result;
}

Tree naive_bcanon(const Tree& t, const LabelOrder& ord) {
  std::vector<Tree> kept;
  std::vector<std::string> keys;
  for (const auto& c : t.children) {
    Tree b = naive_bcanon(c, ord);
    std::string key = iso_key(b);
    if (std::find(keys.begin(), keys.end(), key) != keys.end()) continue;
    keys.push_back(std::move(key));
    kept.push_back(std::move(b));
  }
  std::stable_sort(kept.begin(), kept.end(), [&](const Tree& a, const Tree& b) {
    return llex_compare_trees(a, b, ord) == Ordering::Less;
  });
  return Tree(t.label, std::move(kept));
}

bool naive_bisim(const Tree& s, const Tree& t) {
  Graph a = flatten(s);
  Graph b = flatten(t);
  std::size_t offset = a.label.size();
  std::size_t n = offset + b.label.size();
  std::vector<std::string> label(n);
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t v = 0; v < offset; ++v) {
    label[v] = a.label[v];
    succ[v] = a.children[v];
  }
  for (std::size_t v = 0; v < b.label.size(); ++v) {
    label[offset + v] = b.label[v];
    for (auto w : b.children[v]) succ[offset + v].push_back(offset + w);
  }

  std::vector<std::size_t> block(n);
  {
    std::map<std::string, std::size_t> ids;
    for (std::size_t v = 0; v < n; ++v) block[v] = ids.emplace(label[v], ids.size()).first->second;
  }
  std::size_t count = 0;
  for (;;) {
    std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::size_t> sig;
      for (auto w : succ[v]) sig.push_back(block[w]);
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      next[v] = ids.emplace(std::make_pair(block[v], std::move(sig)), ids.size()).first->second;
    }
    block = std::move(next);
    if (ids.size() == count) break;
    count = ids.size();
  }
  return block[0] == block[offset];
}

std::size_t explicit_diameter(const Tree& t) {
  Graph g = flatten(t);
  auto d0 = bfs_distances(g, 0);
  std::size_t far = static_cast<std::size_t>(std::max_element(d0.begin(), d0.end()) - d0.begin());
  auto d1 = bfs_distances(g, far);
  return *std::max_element(d1.begin(), d1.end());
}

std::size_t explicit_eccentricity(const Tree& t, const DeweyAddress& u) {
  Graph g = flatten(t);
  auto d = bfs_distances(g, index_of(g, u));
  return *std::max_element(d.begin(), d.end());
}

std::vector<DeweyAddress> all_addresses(const Tree& t) { return flatten(t).address; }

DeweyAddress find_label(const Tree& t, const std::string& label) {
  Graph g = flatten(t);
  for (std::size_t v = 0; v < g.label.size(); ++v)
    if (g.label[v] == label) return g.address[v];
  throw ValidationError("label '" + label + "' does not occur in the tree");
}

}  // namespace treegram
