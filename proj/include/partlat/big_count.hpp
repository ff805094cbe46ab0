#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace partlat {

/// Exact counts. Signed so that differences (supermodularity gaps,
/// inclusion-exclusion partial sums) stay in the same type.
using BigCount = boost::multiprecision::cpp_int;

inline BigCount ipow(std::uint64_t base, std::uint64_t exponent) {
  return boost::multiprecision::pow(BigCount(base), static_cast<unsigned>(exponent));
}

inline BigCount binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigCount r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

/// C(n, k) saturated at UINT64_MAX, for ceiling checks.
inline std::uint64_t binomial_saturated(std::uint64_t n, std::uint64_t k) {
  BigCount r = binomial(n, k);
  if (r > BigCount(UINT64_MAX)) return UINT64_MAX;
  return r.convert_to<std::uint64_t>();
}

inline std::string to_string(const BigCount& v) { return v.str(); }

inline std::optional<std::uint64_t> to_u64(const BigCount& v) {
  if (v < 0 || v > BigCount(UINT64_MAX)) return std::nullopt;
  return v.convert_to<std::uint64_t>();
}

}  // namespace partlat
