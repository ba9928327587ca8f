#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace treegram {

/// Label that marks subdivision nodes inserted by even().
inline constexpr std::string_view kSubdivisionLabel = "#";

/// Separator between a label and its mangled child count.
inline constexpr char kRankDelimiter = '#';

/// Appends the child count: ("f", 2) -> "f#2".
std::string mangle_rank(std::string_view label, std::size_t child_count);

/// Splits "f#2" into ("f", 2). Labels without a numeric suffix return nullopt.
struct RankedLabel {
  std::string_view base;
  std::size_t rank;
};
std::optional<RankedLabel> split_rank(std::string_view label);

/// Whether a user-supplied label may be rank-mangled. The delimiter is
/// reserved; the bare subdivision label is the one exception.
bool label_accepts_ranking(std::string_view label);

/// Identifiers match [A-Za-z_][A-Za-z0-9_]*.
bool is_identifier(std::string_view text);

/// Renders a label for the term syntax, quoting it when it is not an identifier.
std::string quote_label(std::string_view label);

/// Total order on labels shared by every comparison-based operation.
class LabelOrder {
 public:
  using Compare = std::function<int(std::string_view, std::string_view)>;

  /// Bytewise on the base text, then by mangled rank (unranked first), then
  /// bytewise on the full text.
  LabelOrder();
  explicit LabelOrder(Compare compare) : compare_(std::move(compare)) {}

  int compare(std::string_view a, std::string_view b) const { return compare_(a, b); }
  bool less(std::string_view a, std::string_view b) const { return compare_(a, b) < 0; }

 private:
  Compare compare_;
};

/// Three-way result used across the library.
enum class Ordering { Less = -1, Equal = 0, Greater = 1 };

inline Ordering to_ordering(int c) {
  return c < 0 ? Ordering::Less : (c > 0 ? Ordering::Greater : Ordering::Equal);
}

inline const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::Less: return "Less";
    case Ordering::Equal: return "Equal";
    case Ordering::Greater: return "Greater";
  }
  return "?";
}

}  // namespace treegram
