#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "tukey/combinations.hpp"
#include "tukey/geometry.hpp"
#include "tukey/subspace.hpp"

namespace tukey {

/// Exact sample Tukey depth of the query point, reported as an integer
/// numerator over the total observation count (removed coincident points
/// included). The witness direction recounts to exactly the numerator;
/// the witness combination spans the minimizing projection.
struct DepthResult {
  std::int32_t numerator = 0;
  std::int32_t n = 0;
  Combination witness_combination;
  std::vector<double> witness_direction;

  double depth() const { return static_cast<double>(numerator) / n; }
};

struct RcomStats {
  std::uint64_t combinations_visited = 0;
};

namespace detail {

struct RcomLocal {
  std::int32_t best_nu = 0;
  std::vector<std::int32_t> best_combo;
  std::uint64_t visited = 0;
  std::exception_ptr error;
};

inline void rcom_scan_range(const PointCloud& cloud, const Tolerance& tol, std::uint64_t begin,
                            std::uint64_t end, RcomLocal& local) {
  local.best_nu = cloud.rows() + 1;
  if (begin >= end) return;
  const std::int32_t k = cloud.dim() - 2;
  std::vector<std::int32_t> idx(k);
  combination_unrank(begin, cloud.rows(), idx);
  try {
    for (std::uint64_t r = begin; r < end; ++r) {
      const SubspaceSweep sweep = subspace_sweep(cloud, idx, tol);
      ++local.visited;
      if (sweep.nu < local.best_nu) {
        local.best_nu = sweep.nu;
        local.best_combo.assign(idx.begin(), idx.end());
      }
      if (r + 1 < end) next_combination(idx, cloud.rows());
    }
  } catch (...) {
    local.error = std::current_exception();
  }
}

}  // namespace detail

/// Exact depth for p >= 3 by minimizing the bivariate depth over all
/// C(n, p-2) complement projections. Combinations are visited in
/// lexicographic order; ties keep the lexicographically first witness, so
/// the result is identical for any thread count.
inline DepthResult depth_rcom(const PointCloud& cloud, const Tolerance& tol = {}, int threads = 1,
                              RcomStats* stats = nullptr) {
  if (cloud.dim() < 3) throw input_error("depth_rcom requires dimension >= 3");
  if (cloud.rows() <= cloud.dim()) {
    throw degenerate_input_error("need more observations than dimensions");
  }
  const std::int32_t n = cloud.rows();
  const std::int32_t k = cloud.dim() - 2;
  const std::uint64_t total = binomial(n, k);

  std::uint64_t workers = 1;
  if (threads > 1) workers = std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), total);

  std::vector<detail::RcomLocal> locals(workers);
  if (workers == 1) {
    detail::rcom_scan_range(cloud, tol, 0, total, locals[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = total * w / workers;
      const std::uint64_t end = total * (w + 1) / workers;
      pool.emplace_back(detail::rcom_scan_range, std::cref(cloud), std::cref(tol), begin, end,
                        std::ref(locals[w]));
    }
    for (auto& t : pool) t.join();
  }

  // Chunks are contiguous in rank order, so taking the first strict
  // improvement across chunks reproduces the single-threaded winner.
  detail::RcomLocal best;
  best.best_nu = n + 1;
  std::uint64_t visited = 0;
  for (auto& local : locals) {
    if (local.error) std::rethrow_exception(local.error);
    visited += local.visited;
    if (local.best_nu < best.best_nu) {
      best.best_nu = local.best_nu;
      best.best_combo = local.best_combo;
    }
  }
  if (stats) stats->combinations_visited = visited;

  const SubspaceSweep winner = subspace_sweep(cloud, best.best_combo, tol);
  std::vector<double> base(cloud.dim());
  for (std::int32_t j = 0; j < cloud.dim(); ++j) {
    base[j] = winner.planar.witness_direction[0] * winner.basis.e1[j] +
              winner.planar.witness_direction[1] * winner.basis.e2[j];
  }
  const std::int32_t strict_count = winner.nu - k;  // members tilt off the boundary

  DepthResult out;
  out.numerator = winner.nu - k + cloud.zero_count();
  out.n = cloud.total_points();
  out.witness_combination = Combination(std::move(best.best_combo));
  out.witness_direction = tilt_off_members(cloud, out.witness_combination.indices, base,
                                           strict_count, tol);
  return out;
}

}  // namespace tukey
