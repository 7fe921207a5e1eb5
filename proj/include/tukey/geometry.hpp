#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "tukey/combinations.hpp"
#include "tukey/errors.hpp"
#include "tukey/tolerance.hpp"

namespace tukey {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// Immutable n x p coordinate table, already centered at the query point.
/// Rows that coincided with the query are removed at construction and
/// remembered in zero_count; downstream depth numerators add them back.
class PointCloud {
 public:
  PointCloud(std::vector<double> coords, std::int32_t n, std::int32_t p, std::int32_t zero_count)
      : coords_(std::move(coords)), norms_(n), n_(n), p_(p), zero_count_(zero_count) {
    for (std::int32_t i = 0; i < n_; ++i) norms_[i] = norm(row(i));
  }

  std::int32_t rows() const { return n_; }
  std::int32_t dim() const { return p_; }
  std::int32_t zero_count() const { return zero_count_; }
  /// Observation count including the removed coincident points.
  std::int32_t total_points() const { return n_ + zero_count_; }

  std::span<const double> row(std::int32_t i) const {
    return {coords_.data() + static_cast<std::size_t>(i) * p_, static_cast<std::size_t>(p_)};
  }
  double row_norm(std::int32_t i) const { return norms_[i]; }

 private:
  std::vector<double> coords_;  // row-major
  std::vector<double> norms_;
  std::int32_t n_;
  std::int32_t p_;
  std::int32_t zero_count_;
};

/// Shifts raw observations by -z and drops rows whose shifted norm falls
/// inside the tolerance band (they coincide with the query point).
///
/// raw is row-major with n rows of p entries. Throws input_error on
/// non-finite data and degenerate_input_error when every row coincides
/// with z (the depth is trivially n/n; the caller reports it).
inline PointCloud center_at(std::span<const double> raw, std::span<const double> z,
                            const Tolerance& tol = {}) {
  const std::size_t p = z.size();
  if (p < 2) throw input_error("dimension must be at least 2");
  if (raw.size() % p != 0) throw input_error("raw matrix shape does not match z");
  const std::size_t n = raw.size() / p;
  if (n < 1) throw input_error("need at least one observation");
  for (double v : raw)
    if (!std::isfinite(v)) throw input_error("non-finite coordinate in data");
  for (double v : z)
    if (!std::isfinite(v)) throw input_error("non-finite coordinate in query point");

  const double z_norm = norm(z);
  std::vector<double> coords;
  coords.reserve(raw.size());
  std::int32_t removed = 0;
  std::vector<double> shifted(p);
  for (std::size_t i = 0; i < n; ++i) {
    double row_scale = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      shifted[j] = raw[i * p + j] - z[j];
      row_scale += raw[i * p + j] * raw[i * p + j];
    }
    const double scale = std::max(std::sqrt(row_scale), z_norm);
    if (norm(shifted) <= tol.eps * scale) {
      ++removed;
    } else {
      coords.insert(coords.end(), shifted.begin(), shifted.end());
    }
  }
  const std::int32_t kept = static_cast<std::int32_t>(n) - removed;
  if (kept == 0) throw degenerate_input_error("all observations coincide with the query point");
  return PointCloud(std::move(coords), kept, static_cast<std::int32_t>(p), removed);
}

/// Two orthonormal p-vectors spanning the orthogonal complement of the
/// span of a (p-2)-point combination.
struct ComplementBasis {
  std::vector<double> e1;
  std::vector<double> e2;
};

namespace detail {

inline void subtract_projection(std::span<double> v, std::span<const double> q) {
  const double c = dot(v, q);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
}

inline void normalize(std::span<double> v) {
  const double nv = norm(v);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] /= nv;
}

}  // namespace detail

/// Orthonormal basis of the orthogonal complement of the span of the
/// selected rows. Returns p - arity vectors, each of length p.
///
/// The combination rows are orthonormalized first (modified Gram-Schmidt);
/// a relative residual below tol.eps flags the rows as linearly dependent
/// and raises general_position_error naming the combination. The
/// complement vectors are built by orthogonalizing the standard basis
/// against the row span and keeping the largest-residual survivors, which
/// makes the basis choice deterministic.
inline std::vector<std::vector<double>> orthonormal_complement(const PointCloud& cloud,
                                                               std::span<const std::int32_t> combo,
                                                               const Tolerance& tol = {}) {
  const std::int32_t p = cloud.dim();
  const std::int32_t r = static_cast<std::int32_t>(combo.size());
  if (r >= p) throw input_error("combination arity must be below the dimension");
  for (std::int32_t j : combo) {
    if (j < 0 || j >= cloud.rows()) throw input_error("combination index out of range");
  }

  std::vector<std::vector<double>> q;
  q.reserve(r);
  for (std::int32_t i = 0; i < r; ++i) {
    std::span<const double> x = cloud.row(combo[i]);
    std::vector<double> v(x.begin(), x.end());
    for (const auto& prev : q) detail::subtract_projection(v, prev);
    if (norm(v) <= tol.eps * cloud.row_norm(combo[i])) {
      throw general_position_error(
          "combination " + index_list({combo.begin(), combo.end()}) +
              " selects linearly dependent observations",
          {combo.begin(), combo.end()});
    }
    detail::normalize(v);
    q.push_back(std::move(v));
  }

  // Residuals of the standard basis against the row span, largest first.
  std::vector<std::vector<double>> residuals(p);
  std::vector<std::pair<double, std::int32_t>> order(p);
  for (std::int32_t k = 0; k < p; ++k) {
    std::vector<double> v(p, 0.0);
    v[k] = 1.0;
    for (const auto& prev : q) detail::subtract_projection(v, prev);
    order[k] = {norm(v), k};
    residuals[k] = std::move(v);
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  std::vector<std::vector<double>> basis;
  basis.reserve(p - r);
  for (const auto& [res, k] : order) {
    if (static_cast<std::int32_t>(basis.size()) == p - r) break;
    std::vector<double> v = residuals[k];
    for (const auto& prev : basis) detail::subtract_projection(v, prev);
    const double nv = norm(v);
    if (nv <= 1e-12) continue;
    detail::normalize(v);
    // One re-orthogonalization pass keeps the basis orthonormal to 1e-14.
    for (const auto& prev : q) detail::subtract_projection(v, prev);
    for (const auto& prev : basis) detail::subtract_projection(v, prev);
    detail::normalize(v);
    basis.push_back(std::move(v));
  }
  if (static_cast<std::int32_t>(basis.size()) != p - r) {
    throw general_position_error("failed to complete complement basis for combination " +
                                     index_list({combo.begin(), combo.end()}),
                                 {combo.begin(), combo.end()});
  }
  return basis;
}

/// Complement basis for a (p-2)-point combination, p >= 3.
inline ComplementBasis complement_basis(const PointCloud& cloud, const Combination& combo,
                                        const Tolerance& tol = {}) {
  if (cloud.dim() < 3) throw input_error("complement_basis requires dimension >= 3");
  if (combo.arity() != static_cast<std::size_t>(cloud.dim() - 2)) {
    throw input_error("combination arity must be p-2");
  }
  auto basis = orthonormal_complement(cloud, combo.indices, tol);
  return ComplementBasis{std::move(basis[0]), std::move(basis[1])};
}

/// Projects every row onto the complement plane: y_i = (e1.x_i, e2.x_i).
/// Output is row-major n x 2, in row order.
inline std::vector<double> project2(const PointCloud& cloud, const ComplementBasis& basis) {
  std::vector<double> y(static_cast<std::size_t>(cloud.rows()) * 2);
  for (std::int32_t i = 0; i < cloud.rows(); ++i) {
    std::span<const double> x = cloud.row(i);
    y[2 * static_cast<std::size_t>(i)] = dot(basis.e1, x);
    y[2 * static_cast<std::size_t>(i) + 1] = dot(basis.e2, x);
  }
  return y;
}

}  // namespace tukey
