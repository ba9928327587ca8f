#include "treegram/label.hpp"

#include <cctype>

namespace treegram {

std::string mangle_rank(std::string_view label, std::size_t child_count) {
  std::string out(label);
  out += kRankDelimiter;
  out += std::to_string(child_count);
  return out;
}

std::optional<RankedLabel> split_rank(std::string_view label) {
  auto pos = label.rfind(kRankDelimiter);
  if (pos == std::string_view::npos || pos + 1 >= label.size()) return std::nullopt;
  std::size_t rank = 0;
  for (std::size_t i = pos + 1; i < label.size(); ++i) {
    char c = label[i];
    if (c < '0' || c > '9') return std::nullopt;
    rank = rank * 10 + static_cast<std::size_t>(c - '0');
  }
  return RankedLabel{label.substr(0, pos), rank};
}

bool label_accepts_ranking(std::string_view label) {
  return label == kSubdivisionLabel || label.find(kRankDelimiter) == std::string_view::npos;
}

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  auto head = static_cast<unsigned char>(text[0]);
  if (!(std::isalpha(head) || head == '_')) return false;
  for (char c : text.substr(1)) {
    auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || u == '_')) return false;
  }
  return true;
}

std::string quote_label(std::string_view label) {
  if (is_identifier(label)) return std::string(label);
  std::string out;
  out.reserve(label.size() + 2);
  out += '\'';
  out += label;
  out += '\'';
  return out;
}

namespace {

int standard_compare(std::string_view a, std::string_view b) {
  auto ra = split_rank(a);
  auto rb = split_rank(b);
  std::string_view base_a = ra ? ra->base : a;
  std::string_view base_b = rb ? rb->base : b;
  if (int c = base_a.compare(base_b); c != 0) return c < 0 ? -1 : 1;
  long rank_a = ra ? static_cast<long>(ra->rank) : -1;
  long rank_b = rb ? static_cast<long>(rb->rank) : -1;
  if (rank_a != rank_b) return rank_a < rank_b ? -1 : 1;
  int c = a.compare(b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace

LabelOrder::LabelOrder() : compare_(standard_compare) {}

}  // namespace treegram
