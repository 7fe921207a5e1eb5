#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "tukey/combinations.hpp"
#include "tukey/geometry.hpp"
#include "tukey/rcom.hpp"
#include "tukey/rng.hpp"
#include "tukey/subspace.hpp"

namespace tukey {

/// Unit normal of the hyperplane through the origin and the p-1 points of
/// the generating combination.
struct CriticalDirection {
  std::vector<double> u;
  Combination combo;
};

inline CriticalDirection critical_direction(const PointCloud& cloud, const Combination& combo,
                                            const Tolerance& tol = {}) {
  if (combo.arity() != static_cast<std::size_t>(cloud.dim() - 1)) {
    throw input_error("critical direction needs a combination of arity p-1");
  }
  auto basis = orthonormal_complement(cloud, combo.indices, tol);
  return CriticalDirection{std::move(basis[0]), combo};
}

/// Cost guard: the exhaustive oracle refuses instances whose combination
/// scan would exceed about 1e9 point classifications unless forced.
inline bool oracle_within_guard(std::int32_t n, std::int32_t p) {
  const std::uint64_t combos = binomial(n, p - 1);
  return combos <= 1000000000ull / std::max<std::int32_t>(n, 1);
}

/// Ground-truth depth by enumerating every critical direction: for each
/// (p-1)-point combination the normal through the origin is computed and
/// the smaller strict side count taken. Exact for data in general
/// position; a non-member point on any critical hyperplane raises
/// general_position_error.
inline DepthResult depth_critical(const PointCloud& cloud, const Tolerance& tol = {},
                                  bool force = false) {
  const std::int32_t n = cloud.rows();
  const std::int32_t p = cloud.dim();
  if (p < 2) throw input_error("depth_critical requires dimension >= 2");
  if (n < p) throw degenerate_input_error("need at least p observations");
  if (!force && !oracle_within_guard(n, p)) {
    throw oracle_guard_error("instance exceeds the oracle cost guard; pass force to override");
  }

  const std::int32_t k = p - 1;
  std::vector<std::int32_t> idx(k);
  first_combination(idx);
  std::int32_t best = n + 1;
  std::vector<std::int32_t> best_combo;
  int best_side = 1;
  std::vector<std::uint8_t> is_member(n, 0);
  do {
    for (std::int32_t j : idx) is_member[j] = 1;
    auto basis = orthonormal_complement(cloud, idx, tol);
    const std::vector<double>& u = basis[0];
    std::int32_t neg = 0, pos = 0;
    for (std::int32_t i = 0; i < n; ++i) {
      const double d = dot(u, cloud.row(i));
      if (is_member[i]) {
        // Sanity of the null vector; failures indicate ill conditioning.
        if (std::abs(d) > tol.eps * cloud.row_norm(i)) {
          for (std::int32_t j : idx) is_member[j] = 0;
          throw general_position_error(
              "combination " + index_list({idx.begin(), idx.end()}) +
                  " is too ill-conditioned for a reliable critical direction",
              {idx.begin(), idx.end()});
        }
        continue;
      }
      // Under general position only the members lie on the hyperplane;
      // everything else is counted by its true sign.
      if (std::abs(d) <= tol.collinearity_eps() * cloud.row_norm(i)) {
        std::vector<std::int32_t> offending(idx.begin(), idx.end());
        offending.push_back(i);
        for (std::int32_t j : idx) is_member[j] = 0;
        throw general_position_error(
            "observation " + std::to_string(i) + " lies on the hyperplane through combination " +
                index_list({idx.begin(), idx.end()}),
            std::move(offending));
      }
      if (d < 0.0) {
        ++neg;
      } else {
        ++pos;
      }
    }
    const std::int32_t side_min = std::min(neg, pos);
    if (side_min < best) {
      best = side_min;
      best_combo.assign(idx.begin(), idx.end());
      best_side = (neg <= pos) ? 1 : -1;
    }
    for (std::int32_t j : idx) is_member[j] = 0;
  } while (next_combination(idx, n));

  auto basis = orthonormal_complement(cloud, best_combo, tol);
  std::vector<double> base = basis[0];
  if (best_side < 0) {
    for (double& v : base) v = -v;
  }
  DepthResult out;
  out.numerator = best + cloud.zero_count();
  out.n = cloud.total_points();
  out.witness_combination = Combination(best_combo);
  out.witness_direction = tilt_off_members(cloud, best_combo, base, best, tol);
  return out;
}

/// Randomized upper bound: the minimum closed-halfspace count over
/// `trials` uniformly random unit directions. Always at least the exact
/// numerator; bit-reproducible for a fixed seed.
inline std::int32_t depth_random_upper(const PointCloud& cloud, std::int32_t trials,
                                       std::uint64_t seed, const Tolerance& tol = {}) {
  if (trials < 1) throw input_error("depth_random_upper needs at least one trial");
  Rng rng(seed);
  const std::int32_t n = cloud.rows();
  const std::int32_t p = cloud.dim();
  std::vector<double> u(p);
  std::int32_t best = n;
  for (std::int32_t t = 0; t < trials; ++t) {
    double nrm = 0.0;
    do {
      for (std::int32_t j = 0; j < p; ++j) u[j] = rng.normal();
      nrm = norm(u);
    } while (nrm < 1e-12);
    for (std::int32_t j = 0; j < p; ++j) u[j] /= nrm;
    std::int32_t count = 0;
    for (std::int32_t i = 0; i < n; ++i) {
      if (tol.sign(dot(u, cloud.row(i)), cloud.row_norm(i)) <= 0) ++count;
    }
    best = std::min(best, count);
  }
  return best + cloud.zero_count();
}

}  // namespace tukey
