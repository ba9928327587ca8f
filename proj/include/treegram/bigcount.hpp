#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace treegram {

/// Exact non-negative counts (sizes, heights, positions). Signed so that the
/// empty-maximum convention of -1 can be represented directly.
using BigCount = boost::multiprecision::cpp_int;

inline std::string to_string(const BigCount& value) { return value.str(); }

/// 2^exponent.
inline BigCount pow2(unsigned exponent) {
  BigCount result = 1;
  result <<= exponent;
  return result;
}

}  // namespace treegram
