#include "treegram/slp.hpp"

#include <algorithm>
#include <random>

#include "treegram/error.hpp"

namespace treegram {

std::uint32_t LabelInterner::id(std::string_view label) {
  auto it = ids_.find(std::string(label));
  if (it != ids_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(labels_.size());
  labels_.emplace_back(label);
  ids_.emplace(labels_.back(), id);
  return id;
}

RuleId SlpStore::add(std::vector<SlpSymbol> rhs) {
  BigCount len = 0;
  for (auto s : rhs) {
    if (!is_terminal(s) && static_cast<std::size_t>(s) >= rules_.size())
      throw ValidationError("slp rule refers to a rule that does not exist yet");
    if (is_terminal(s))
      len += 1;
    else
      len += lengths_[static_cast<RuleId>(s)];
  }
  rules_.push_back(std::move(rhs));
  lengths_.push_back(std::move(len));
  return static_cast<RuleId>(rules_.size() - 1);
}

std::string SlpStore::dump(RuleId root) const {
  std::vector<char> seen(rules_.size(), 0);
  std::vector<RuleId> order;
  std::vector<RuleId> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    RuleId r = stack.back();
    stack.pop_back();
    order.push_back(r);
    for (auto s : rules_[r])
      if (!is_terminal(s) && !seen[static_cast<RuleId>(s)]) {
        seen[static_cast<RuleId>(s)] = 1;
        stack.push_back(static_cast<RuleId>(s));
      }
  }
  std::sort(order.begin(), order.end());
  std::string out;
  for (RuleId r : order) {
    out += "R" + std::to_string(r) + " =";
    for (auto s : rules_[r]) {
      out += ' ';
      out += is_terminal(s) ? quote_label(label(s)) : "R" + std::to_string(s);
    }
    out += '\n';
  }
  return out;
}

namespace {

SlpSymbol slice_symbol(SlpStore& s, SlpSymbol sym, const BigCount& l, const BigCount& r) {
  if (l == 1 && r == s.length_of(sym)) return sym;
  auto rule = static_cast<RuleId>(sym);
  // Copy: adding rules may reallocate the store.
  std::vector<SlpSymbol> rhs = s.rhs(rule);
  BigCount offset = 0;
  std::size_t a = rhs.size(), b = rhs.size();
  BigCount off_a, off_b;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    BigCount len = s.length_of(rhs[i]);
    if (a == rhs.size() && l <= offset + len) {
      a = i;
      off_a = offset;
    }
    if (r <= offset + len) {
      b = i;
      off_b = offset;
      break;
    }
    offset += len;
  }
  if (a == b) return slice_symbol(s, rhs[a], l - off_a, r - off_a);
  std::vector<SlpSymbol> parts;
  parts.push_back(slice_symbol(s, rhs[a], l - off_a, s.length_of(rhs[a])));
  for (std::size_t i = a + 1; i < b; ++i) parts.push_back(rhs[i]);
  parts.push_back(slice_symbol(s, rhs[b], 1, r - off_b));
  return SlpStore::rule_symbol(s.add(std::move(parts)));
}

}  // namespace

RuleId slp_slice(SlpStore& s, RuleId root, const BigCount& l, const BigCount& r) {
  const BigCount& len = s.length(root);
  if (l < 1 || r > len || l > r + 1)
    throw ValidationError("slice [" + to_string(l) + "," + to_string(r) + "] out of range for length " +
                          to_string(len));
  if (l == r + 1) return s.add({});
  SlpSymbol sym = slice_symbol(s, SlpStore::rule_symbol(root), l, r);
  if (SlpStore::is_terminal(sym)) return s.add({sym});
  return static_cast<RuleId>(sym);
}

SlpSymbol slp_symbol_at(const SlpStore& s, RuleId root, const BigCount& i) {
  if (i < 1 || i > s.length(root))
    throw ValidationError("position " + to_string(i) + " out of range for length " + to_string(s.length(root)));
  RuleId rule = root;
  BigCount rem = i;
  for (;;) {
    for (auto sym : s.rhs(rule)) {
      BigCount len = s.length_of(sym);
      if (rem > len) {
        rem -= len;
        continue;
      }
      if (SlpStore::is_terminal(sym)) return sym;
      rule = static_cast<RuleId>(sym);
      break;
    }
  }
}

std::vector<std::string> slp_expand(const SlpStore& s, RuleId root, const BigCount& max_length) {
  if (s.length(root) > max_length)
    throw LimitError("string has length " + to_string(s.length(root)) + ", above the limit of " +
                     to_string(max_length));
  std::vector<std::string> out;
  SlpCursor cur(s, root);
  SlpSymbol sym;
  while (cur.next(sym)) out.push_back(s.label(sym));
  return out;
}

bool SlpCursor::next(SlpSymbol& out) {
  while (!stack_.empty()) {
    auto& f = stack_.back();
    const auto& rhs = store_.rhs(f.rule);
    if (f.index == rhs.size()) {
      stack_.pop_back();
      continue;
    }
    SlpSymbol sym = rhs[f.index++];
    if (SlpStore::is_terminal(sym)) {
      out = sym;
      return true;
    }
    stack_.push_back({static_cast<RuleId>(sym), 0});
  }
  return false;
}

// ---------------------------------------------------------------------------
// Fingerprints

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

u64 splitmix(u64 x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Fingerprinter::Fingerprinter(const SlpStore& store, std::uint64_t seed, unsigned prime_count)
    : store_(store), seed_(seed) {
  if (prime_count == 0) throw ValidationError("fingerprinting needs at least one prime");
  std::mt19937_64 rng(splitmix(seed ^ 0x5eedf00dULL));
  while (primes_.size() < prime_count) {
    u64 candidate = (rng() >> 2) | (1ULL << 61) | 1ULL;
    if (!is_prime_u64(candidate)) continue;
    primes_.push_back(candidate);
    bases_.push_back(2 + rng() % (candidate - 3));
  }
}

std::uint64_t Fingerprinter::terminal_value(std::size_t k, std::uint32_t label_id) const {
  u64 h = splitmix(seed_ ^ splitmix((static_cast<u64>(k) << 32) ^ label_id));
  return 1 + h % (primes_[k] - 1);
}

void Fingerprinter::extend() {
  std::size_t n = store_.rule_count();
  std::size_t p = primes_.size();
  if (computed_ == n) return;
  hash_.resize(n * p);
  power_.resize(n * p);
  for (std::size_t r = computed_; r < n; ++r) {
    for (std::size_t k = 0; k < p; ++k) {
      u64 m = primes_[k];
      u64 h = 0, pw = 1;
      for (auto sym : store_.rhs(static_cast<RuleId>(r))) {
        u64 hs, ps;
        if (SlpStore::is_terminal(sym)) {
          hs = terminal_value(k, SlpStore::terminal_id(sym));
          ps = bases_[k];
        } else {
          hs = hash_[static_cast<std::size_t>(sym) * p + k];
          ps = power_[static_cast<std::size_t>(sym) * p + k];
        }
        h = (mulmod(h, ps, m) + hs) % m;
        pw = mulmod(pw, ps, m);
      }
      hash_[r * p + k] = h;
      power_[r * p + k] = pw;
    }
  }
  computed_ = n;
}

Fingerprinter::Print Fingerprinter::of(RuleId r) {
  extend();
  std::size_t p = primes_.size();
  return Print(hash_.begin() + static_cast<std::ptrdiff_t>(r * p),
               hash_.begin() + static_cast<std::ptrdiff_t>((r + 1) * p));
}

Fingerprinter::Print Fingerprinter::prefix(RuleId r, const BigCount& n) {
  extend();
  std::size_t p = primes_.size();
  Print h(p, 0);
  BigCount rem = n;
  RuleId rule = r;
  while (rem > 0) {
    bool descended = false;
    for (auto sym : store_.rhs(rule)) {
      BigCount len = store_.length_of(sym);
      if (len <= rem) {
        for (std::size_t k = 0; k < p; ++k) {
          u64 hs, ps;
          if (SlpStore::is_terminal(sym)) {
            hs = terminal_value(k, SlpStore::terminal_id(sym));
            ps = bases_[k];
          } else {
            hs = hash_[static_cast<std::size_t>(sym) * p + k];
            ps = power_[static_cast<std::size_t>(sym) * p + k];
          }
          h[k] = (mulmod(h[k], ps, primes_[k]) + hs) % primes_[k];
        }
        rem -= len;
        if (rem == 0) break;
        continue;
      }
      rule = static_cast<RuleId>(sym);
      descended = true;
      break;
    }
    if (!descended) break;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Comparison

SlpComparator::SlpComparator(SlpStore& store, EqualityPolicy policy, LabelOrder order)
    : store_(store), policy_(std::move(policy)), order_(std::move(order)) {}

Fingerprinter& SlpComparator::prints() {
  if (!prints_) prints_ = std::make_unique<Fingerprinter>(store_, policy_.seed, policy_.prime_count);
  return *prints_;
}

bool SlpComparator::use_exact(const BigCount& length) const {
  switch (policy_.mode) {
    case EqualityPolicy::Mode::Fingerprint: return false;
    case EqualityPolicy::Mode::Hybrid: return length <= policy_.exact_threshold;
    case EqualityPolicy::Mode::Exact:
      if (length > policy_.exact_threshold)
        throw LimitError("exact comparison of strings of length " + to_string(length) + " exceeds the limit of " +
                         to_string(policy_.exact_threshold));
      return true;
  }
  return true;
}

Ordering SlpComparator::exact_compare(RuleId a, RuleId b, bool equality_only) {
  SlpCursor ca(store_, a), cb(store_, b);
  SlpSymbol x, y;
  for (;;) {
    bool more_a = ca.next(x);
    bool more_b = cb.next(y);
    if (!more_a || !more_b) return Ordering::Equal;  // lengths are equal
    if (x == y) continue;
    if (equality_only) return Ordering::Less;
    return to_ordering(order_.compare(store_.label(x), store_.label(y)));
  }
}

bool SlpComparator::equal(RuleId a, RuleId b) {
  if (a == b) return true;
  const BigCount& len = store_.length(a);
  if (len != store_.length(b)) return false;
  if (use_exact(len)) return exact_compare(a, b, true) == Ordering::Equal;
  return prints().of(a) == prints().of(b);
}

Ordering SlpComparator::compare(RuleId a, RuleId b) {
  if (a == b) return Ordering::Equal;
  const BigCount& la = store_.length(a);
  const BigCount& lb = store_.length(b);
  if (la != lb) return la < lb ? Ordering::Less : Ordering::Greater;
  if (use_exact(la)) return exact_compare(a, b, false);
  auto& fp = prints();
  if (fp.of(a) == fp.of(b)) return Ordering::Equal;
  // Binary search for the first mismatch: prefixes of length lo agree, of length hi differ.
  BigCount lo = 0, hi = la;
  while (hi - lo > 1) {
    BigCount mid = (lo + hi) / 2;
    if (fp.prefix(a, mid) == fp.prefix(b, mid))
      lo = mid;
    else
      hi = mid;
  }
  SlpSymbol x = slp_symbol_at(store_, a, hi);
  SlpSymbol y = slp_symbol_at(store_, b, hi);
  if (x == y) throw Error("fingerprint collision while locating a mismatch; retry with another seed");
  return to_ordering(order_.compare(store_.label(x), store_.label(y)));
}

bool slp_equal(SlpStore& s, RuleId a, RuleId b, const EqualityPolicy& policy) {
  return SlpComparator(s, policy).equal(a, b);
}

Ordering slp_compare_llex(SlpStore& s, RuleId a, RuleId b, const LabelOrder& ord, const EqualityPolicy& policy) {
  return SlpComparator(s, policy, ord).compare(a, b);
}

}  // namespace treegram
