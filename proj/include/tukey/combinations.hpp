#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "tukey/errors.hpp"

namespace tukey {

/// A strictly increasing tuple of distinct point indices in {0..n-1}.
/// The unit of combinatorial enumeration; arity is p-2 or p-1 in practice.
struct Combination {
  std::vector<std::int32_t> indices;

  Combination() = default;
  explicit Combination(std::vector<std::int32_t> idx) : indices(std::move(idx)) {}

  std::size_t arity() const { return indices.size(); }

  bool operator==(const Combination& other) const = default;
  bool operator<(const Combination& other) const { return indices < other.indices; }

  /// Validates strict increase and the index range [0, n).
  static Combination checked(std::vector<std::int32_t> idx, std::int32_t n) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] < 0 || idx[i] >= n) throw input_error("combination index out of range");
      if (i > 0 && idx[i] <= idx[i - 1]) throw input_error("combination indices must strictly increase");
    }
    return Combination(std::move(idx));
  }
};

struct CombinationHash {
  std::size_t operator()(const Combination& c) const {
    std::size_t h = 0x9e3779b97f4a7c15ull ^ c.indices.size();
    for (std::int32_t v : c.indices) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// C(n, k) in saturating 64-bit arithmetic.
inline std::uint64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (r > kMax / num) return kMax;  // saturate
    r = r * num / static_cast<std::uint64_t>(i);
  }
  return r;
}

/// Writes the lexicographically first k-combination {0,1,..,k-1} into idx.
inline void first_combination(std::span<std::int32_t> idx) {
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::int32_t>(i);
}

/// Advances idx to its lexicographic successor among k-subsets of {0..n-1}.
/// Returns false when idx was the last combination (idx is left unchanged).
inline bool next_combination(std::span<std::int32_t> idx, std::int32_t n) {
  const std::int32_t k = static_cast<std::int32_t>(idx.size());
  std::int32_t i = k - 1;
  while (i >= 0 && idx[i] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (std::int32_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

/// Lexicographic rank of a k-combination among k-subsets of {0..n-1}.
inline std::uint64_t combination_rank(std::span<const std::int32_t> idx, std::int32_t n) {
  const std::int32_t k = static_cast<std::int32_t>(idx.size());
  std::uint64_t rank = 0;
  std::int32_t prev = -1;
  for (std::int32_t i = 0; i < k; ++i) {
    for (std::int32_t v = prev + 1; v < idx[i]; ++v) {
      rank += binomial(n - 1 - v, k - 1 - i);
    }
    prev = idx[i];
  }
  return rank;
}

/// Inverse of combination_rank: writes the combination of the given rank.
inline void combination_unrank(std::uint64_t rank, std::int32_t n, std::span<std::int32_t> idx) {
  const std::int32_t k = static_cast<std::int32_t>(idx.size());
  std::int32_t v = 0;
  for (std::int32_t i = 0; i < k; ++i) {
    for (;; ++v) {
      const std::uint64_t block = binomial(n - 1 - v, k - 1 - i);
      if (rank < block) break;
      rank -= block;
    }
    idx[i] = v++;
  }
}

}  // namespace tukey
