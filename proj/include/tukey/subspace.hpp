#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tukey/bivariate.hpp"
#include "tukey/geometry.hpp"

namespace tukey {

/// Result of projecting the cloud onto the orthogonal complement of a
/// (p-2)-point combination and sweeping the plane.
///
/// nu is the subspace depth numerator in whole-cloud units: the minimum
/// closed-halfplane count over the cloud's rows, where the combination
/// members project to zero and therefore always count.
struct SubspaceSweep {
  std::int32_t nu = 0;
  BivariateDepth planar;  // witnesses carry cloud row indices
  ComplementBasis basis;
};

/// Projects onto the complement of the combination and computes the
/// bivariate depth of the origin there.
///
/// Raises general_position_error when the projected data betray a
/// degeneracy of the original cloud: a non-member row projecting to zero
/// (p-1 dependent observations) or two rows collinear with the projected
/// origin (p observations on a hyperplane through the query).
inline SubspaceSweep subspace_sweep(const PointCloud& cloud, std::span<const std::int32_t> combo,
                                    const Tolerance& tol = {}) {
  SubspaceSweep out;
  auto vecs = orthonormal_complement(cloud, combo, tol);
  out.basis = ComplementBasis{std::move(vecs[0]), std::move(vecs[1])};

  const std::int32_t n = cloud.rows();
  std::vector<double> y(static_cast<std::size_t>(n) * 2);
  std::vector<double> scales(n);
  for (std::int32_t i = 0; i < n; ++i) {
    std::span<const double> x = cloud.row(i);
    y[2 * static_cast<std::size_t>(i)] = dot(out.basis.e1, x);
    y[2 * static_cast<std::size_t>(i) + 1] = dot(out.basis.e2, x);
    scales[i] = cloud.row_norm(i);
  }

  // Exactly the combination members may project to zero.
  const auto is_zero = [&](std::int32_t i) {
    return std::hypot(y[2 * static_cast<std::size_t>(i)], y[2 * static_cast<std::size_t>(i) + 1]) <=
           tol.eps * scales[i];
  };
  for (std::int32_t j : combo) {
    if (!is_zero(j)) {
      throw general_position_error(
          "combination " + index_list({combo.begin(), combo.end()}) +
              " is too ill-conditioned for a reliable complement projection",
          {combo.begin(), combo.end()});
    }
  }

  try {
    out.planar = depth2_core(y, scales, tol, /*strict_ties=*/true);
  } catch (const general_position_error& e) {
    std::vector<std::int32_t> offending(combo.begin(), combo.end());
    offending.insert(offending.end(), e.offending_indices.begin(), e.offending_indices.end());
    throw general_position_error(std::string(e.what()) + " under combination " +
                                     index_list({combo.begin(), combo.end()}),
                                 std::move(offending));
  }

  const std::int32_t expected_m = n - static_cast<std::int32_t>(combo.size());
  if (out.planar.m != expected_m) {
    for (std::int32_t i = 0; i < n; ++i) {
      if (is_zero(i) && std::find(combo.begin(), combo.end(), i) == combo.end()) {
        std::vector<std::int32_t> offending(combo.begin(), combo.end());
        offending.push_back(i);
        throw general_position_error("observation " + std::to_string(i) +
                                         " lies in the span of combination " +
                                         index_list({combo.begin(), combo.end()}),
                                     std::move(offending));
      }
    }
  }
  out.nu = out.planar.numerator;
  return out;
}

namespace detail {

/// Least-squares combination w of the member rows with w.x_j = 1 for every
/// member j, via the members' Gram system.
inline std::vector<double> unit_dot_direction(const PointCloud& cloud,
                                              std::span<const std::int32_t> members) {
  const std::int32_t r = static_cast<std::int32_t>(members.size());
  const std::int32_t p = cloud.dim();
  std::vector<double> g(static_cast<std::size_t>(r) * r);
  for (std::int32_t i = 0; i < r; ++i)
    for (std::int32_t j = 0; j < r; ++j)
      g[static_cast<std::size_t>(i) * r + j] = dot(cloud.row(members[i]), cloud.row(members[j]));
  std::vector<double> c(r, 1.0);
  // Gaussian elimination with partial pivoting on the tiny Gram system.
  for (std::int32_t k = 0; k < r; ++k) {
    std::int32_t piv = k;
    for (std::int32_t i = k + 1; i < r; ++i)
      if (std::abs(g[static_cast<std::size_t>(i) * r + k]) >
          std::abs(g[static_cast<std::size_t>(piv) * r + k]))
        piv = i;
    if (g[static_cast<std::size_t>(piv) * r + k] == 0.0) {
      throw general_position_error("combination " + index_list({members.begin(), members.end()}) +
                                       " selects linearly dependent observations",
                                   {members.begin(), members.end()});
    }
    if (piv != k) {
      for (std::int32_t j = 0; j < r; ++j)
        std::swap(g[static_cast<std::size_t>(k) * r + j], g[static_cast<std::size_t>(piv) * r + j]);
      std::swap(c[k], c[piv]);
    }
    for (std::int32_t i = k + 1; i < r; ++i) {
      const double f = g[static_cast<std::size_t>(i) * r + k] / g[static_cast<std::size_t>(k) * r + k];
      for (std::int32_t j = k; j < r; ++j)
        g[static_cast<std::size_t>(i) * r + j] -= f * g[static_cast<std::size_t>(k) * r + j];
      c[i] -= f * c[k];
    }
  }
  for (std::int32_t k = r - 1; k >= 0; --k) {
    for (std::int32_t j = k + 1; j < r; ++j) c[k] -= g[static_cast<std::size_t>(k) * r + j] * c[j];
    c[k] /= g[static_cast<std::size_t>(k) * r + k];
  }
  std::vector<double> w(p, 0.0);
  for (std::int32_t i = 0; i < r; ++i) {
    std::span<const double> x = cloud.row(members[i]);
    for (std::int32_t j = 0; j < p; ++j) w[j] += c[i] * x[j];
  }
  return w;
}

inline std::int32_t closed_count(const PointCloud& cloud, std::span<const double> u,
                                 const Tolerance& tol) {
  std::int32_t count = 0;
  for (std::int32_t i = 0; i < cloud.rows(); ++i) {
    if (tol.sign(dot(u, cloud.row(i)), cloud.row_norm(i)) <= 0) ++count;
  }
  return count;
}

}  // namespace detail

/// Tilts a minimizing direction off the hyperplane members so that every
/// member classifies strictly positive while all other sign
/// classifications are preserved. The returned unit direction recounts to
/// exactly expected_count over the cloud rows.
///
/// base must already face the minimal side (members classify zero against
/// it). Under general position a suitable tilt always exists; the ladder
/// of magnitudes below is belt and braces against unlucky margins.
inline std::vector<double> tilt_off_members(const PointCloud& cloud,
                                            std::span<const std::int32_t> members,
                                            std::span<const double> base,
                                            std::int32_t expected_count, const Tolerance& tol) {
  const std::int32_t p = cloud.dim();
  std::vector<double> w = detail::unit_dot_direction(cloud, members);

  // Safe upper bound: do not disturb any nonzero classification.
  double delta_hi = std::numeric_limits<double>::infinity();
  double delta_lo = 0.0;
  for (std::int32_t i = 0; i < cloud.rows(); ++i) {
    const double di = dot(base, cloud.row(i));
    const double ti = dot(w, cloud.row(i));
    const bool member = std::find(members.begin(), members.end(), i) != members.end();
    if (member) {
      delta_lo = std::max(delta_lo, 4.0 * (tol.eps * cloud.row_norm(i) + std::abs(di)));
    } else if (ti != 0.0) {
      const double margin = std::abs(di) - 2.0 * tol.eps * cloud.row_norm(i);
      if (margin > 0.0) delta_hi = std::min(delta_hi, 0.25 * margin / std::abs(ti));
    }
  }
  double delta0 = delta_lo;
  if (delta_hi > delta_lo && std::isfinite(delta_hi)) delta0 = std::sqrt(delta_lo * delta_hi);
  if (delta0 <= 0.0) delta0 = 1e-6;

  std::vector<double> u(p);
  for (int attempt = 0; attempt < 31; ++attempt) {
    // Ladder around the starting magnitude: 0, -1, +1, -2, +2, ... in
    // factors of 8.
    const int k = (attempt + 1) / 2 * ((attempt % 2) ? -1 : 1);
    const double delta = delta0 * std::pow(8.0, k);
    for (std::int32_t j = 0; j < p; ++j) u[j] = base[j] + delta * w[j];
    const double nu = norm(u);
    if (nu > 0.0) {
      for (std::int32_t j = 0; j < p; ++j) u[j] /= nu;
      if (detail::closed_count(cloud, u, tol) == expected_count) return u;
    }
  }
  throw std::logic_error("failed to realize a witness direction; data are near-degenerate");
}

}  // namespace tukey
