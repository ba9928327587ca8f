#include "treegram/random.hpp"

#include <algorithm>
#include <random>

#include "treegram/error.hpp"

namespace treegram {

namespace {

class Picker {
 public:
  explicit Picker(std::mt19937_64& rng) : rng_(rng) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  // Prefers nonterminals nobody refers to yet so that most survive pruning,
  // otherwise recent ones so that values grow with the grammar.
  NtId pick(const std::vector<NtId>& pool, std::vector<char>& used) {
    std::vector<NtId> fresh;
    for (NtId id : pool)
      if (!used[id]) fresh.push_back(id);
    NtId id;
    if (!fresh.empty() && chance(0.5)) {
      id = fresh[below(fresh.size())];
    } else {
      std::size_t back = std::geometric_distribution<std::size_t>(0.35)(rng_);
      id = pool[pool.size() - 1 - std::min(back, pool.size() - 1)];
    }
    used[id] = 1;
    return id;
  }

 private:
  std::mt19937_64& rng_;
};

}  // namespace

NormalGrammar gen_random(std::uint64_t seed, const RandomParams& params) {
  if (params.nonterminals == 0) throw ValidationError("gen_random needs at least one nonterminal");
  if (params.labels.empty()) throw ValidationError("gen_random needs at least one label");
  std::mt19937_64 rng(seed);
  Picker pick(rng);
  NormalGrammar g;
  for (const auto& l : params.labels) g.reserve_name(l);
  std::vector<NtId> trees, contexts;
  std::vector<char> used;
  auto label = [&] { return params.labels[pick.below(params.labels.size())]; };
  auto arity = [&] { return trees.empty() || pick.chance(0.15) ? 0 : 1 + pick.below(params.max_arity); };
  auto args = [&](std::size_t k) {
    std::vector<NtId> out;
    for (std::size_t i = 0; i < k && !trees.empty(); ++i) out.push_back(pick.pick(trees, used));
    return out;
  };

  for (std::size_t n = 0; n < params.nonterminals; ++n) {
    bool last = n + 1 == params.nonterminals;
    std::size_t kind;
    if (trees.empty())
      kind = pick.chance(0.5) && !last ? 3 : 1;
    else if (last)
      kind = contexts.empty() ? 1 : 2;
    else {
      std::size_t roll = pick.below(100);
      kind = roll < 30 ? 1 : roll < 55 ? 2 : roll < 80 ? 3 : 4;
      if ((kind == 2 || kind == 4) && contexts.empty()) kind = 3;
    }
    NormalRule r;
    switch (kind) {
      case 1: {
        auto a = args(arity());
        if (last && !trees.empty() && std::find(a.begin(), a.end(), trees.back()) == a.end()) a.push_back(trees.back());
        r = NormalRule::node(label(), std::move(a));
        break;
      }
      case 2: {
        // The start applies the newest context so that the largest values survive.
        NtId head = last ? contexts.back() : pick.pick(contexts, used);
        r = NormalRule::apply(head, last ? trees.back() : pick.pick(trees, used));
        break;
      }
      case 3: {
        auto a = args(arity());
        std::size_t hole = pick.below(a.size() + 1);
        r = NormalRule::context(label(), std::move(a), hole);
        break;
      }
      default: {
        NtId head = pick.pick(contexts, used);
        r = NormalRule::compose(head, pick.pick(contexts, used));
        break;
      }
    }
    NtId id = g.intern(r);
    if (id >= used.size()) used.resize(id + 1, 0);
    if (id + 1 == g.count()) (r.rank() == 0 ? trees : contexts).push_back(id);
    if (r.rank() == 0) g.set_start(id);
  }
  return prune(g);
}

}  // namespace treegram
