#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "tukey/errors.hpp"
#include "tukey/tolerance.hpp"

namespace tukey {

/// Exact Tukey depth of the origin for a planar point set.
///
/// numerator/n is the minimum over all unit directions u of
/// #{i : u.y_i <= 0}/n; points at the origin always count. witnesses are
/// the nonzero points whose line through the origin bounds a minimizing
/// closed halfplane (the set the adaptive search expands on).
struct BivariateDepth {
  std::int32_t numerator = 0;  // M_min + (n - m)
  std::int32_t n = 0;          // total points including zeros
  std::int32_t m = 0;          // nonzero point count
  std::vector<std::int32_t> witnesses;
  std::array<double, 2> witness_direction{1.0, 0.0};
};

namespace detail {

inline constexpr double kPi = std::numbers::pi;

/// Angle in [0, pi) at which the rotating direction becomes normal to the
/// line through the origin and (x, y).
inline double folded_critical_angle(double x, double y) {
  double t = std::atan2(y, x) + 0.5 * kPi;  // in (-pi/2, 3*pi/2]
  if (t >= kPi) t -= kPi;
  if (t < 0.0) t += kPi;
  if (t >= kPi) t = 0.0;
  return t;
}

struct SweepPoint {
  double angle;
  std::int32_t idx;  // original position in Y
};

}  // namespace detail

/// Circular-sequence sweep for the depth of the origin in the plane.
///
/// scales optionally supplies a per-point reference norm for the zero
/// classification (used when Y is a projection of higher-dimensional
/// points); when empty a point is zero only if it is exactly (0,0).
/// strict_ties raises general_position_error when two distinct nonzero
/// points lie on a common line through the origin, which in projected
/// data signals a general-position violation of the original cloud.
///
/// One sort of length m; everything else is linear in m.
inline BivariateDepth depth2_core(std::span<const double> y, std::span<const double> scales,
                                  const Tolerance& tol, bool strict_ties) {
  if (y.size() % 2 != 0) throw input_error("planar point list must have 2 columns");
  const std::int32_t n = static_cast<std::int32_t>(y.size() / 2);
  if (n == 0) throw degenerate_input_error("empty planar point set");
  if (!scales.empty() && scales.size() != static_cast<std::size_t>(n)) {
    throw input_error("scale list does not match the point count");
  }
  for (double v : y)
    if (!std::isfinite(v)) throw input_error("non-finite coordinate in planar point set");

  BivariateDepth out;
  out.n = n;

  std::vector<double> nrm(n);
  std::vector<detail::SweepPoint> pts;
  pts.reserve(n);
  for (std::int32_t i = 0; i < n; ++i) {
    const double a = y[2 * static_cast<std::size_t>(i)];
    const double b = y[2 * static_cast<std::size_t>(i) + 1];
    nrm[i] = std::hypot(a, b);
    const double scale = scales.empty() ? nrm[i] : scales[i];
    if (nrm[i] <= tol.eps * scale) continue;  // coincides with the origin
    pts.push_back({detail::folded_critical_angle(a, b), i});
  }
  const std::int32_t m = static_cast<std::int32_t>(pts.size());
  out.m = m;
  if (m == 0) {
    out.numerator = n;  // every closed halfplane contains all points
    return out;
  }

  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    if (a.angle != b.angle) return a.angle < b.angle;
    return a.idx < b.idx;
  });

  // Two points share a critical angle iff their lines through the origin
  // coincide, detected by the relative cross product rather than the
  // rounded angles themselves. The threshold sits at the resolution where
  // double precision can still order the angles; anything farther apart is
  // handled exactly as two distinct arcs.
  auto same_line = [&](std::int32_t i, std::int32_t j) {
    const double cross = y[2 * static_cast<std::size_t>(i)] * y[2 * static_cast<std::size_t>(j) + 1] -
                         y[2 * static_cast<std::size_t>(i) + 1] * y[2 * static_cast<std::size_t>(j)];
    return std::abs(cross) <= tol.collinearity_eps() * nrm[i] * nrm[j];
  };

  std::vector<std::vector<std::int32_t>> block;  // members, original indices
  std::vector<double> block_angle;
  for (std::int32_t k = 0; k < m; ++k) {
    if (k > 0 && same_line(pts[k - 1].idx, pts[k].idx)) {
      block.back().push_back(pts[k].idx);
    } else {
      block.push_back({pts[k].idx});
      block_angle.push_back(pts[k].angle);
    }
  }
  // Folded angles wrap at pi: merge the last block into the first when
  // their lines coincide.
  if (block.size() >= 2 && same_line(pts[m - 1].idx, pts[0].idx)) {
    block.front().insert(block.front().begin(), block.back().begin(), block.back().end());
    block.pop_back();
    block_angle.pop_back();
  }
  const std::int32_t d = static_cast<std::int32_t>(block.size());

  if (strict_ties) {
    for (const auto& blk : block) {
      if (blk.size() >= 2) {
        throw general_position_error(
            "projected points " + std::to_string(blk[0]) + " and " + std::to_string(blk[1]) +
                " are collinear with the origin",
            {blk[0], blk[1]});
      }
    }
  }

  // Dichotomy bits at the midpoint of the wrap arc (block[d-1], block[0]+pi).
  // Every later state is reached by flipping whole blocks, so each count is
  // exact for some direction strictly between critical angles.
  const double phi0 = 0.5 * (block_angle[d - 1] + block_angle[0] + detail::kPi);
  const double ux = std::cos(phi0), uy = std::sin(phi0);
  std::vector<std::uint8_t> bit(n, 0);
  std::int32_t s1 = 0;
  for (const auto& pt : pts) {
    const double v = ux * y[2 * static_cast<std::size_t>(pt.idx)] +
                     uy * y[2 * static_cast<std::size_t>(pt.idx) + 1];
    if (v > 0.0) {
      bit[pt.idx] = 1;
      ++s1;
    }
  }

  // arc a is the open interval (angle[a], angle[(a+1) % d]); the sweep
  // starts inside arc d-1 and flipping block a enters arc a.
  std::vector<std::int32_t> arc_s1(d);
  arc_s1[d - 1] = s1;
  std::int32_t m_min = std::min(s1, m - s1);

  auto probe_at_angle = [&](std::int32_t a, std::int32_t cur_s1) {
    // Boundary-inclusive count at the critical angle itself: block members
    // sit on the halfplane boundary and count on both sides.
    std::int32_t on_pos = 0;
    for (std::int32_t idx : block[a]) on_pos += bit[idx];
    const std::int32_t b = static_cast<std::int32_t>(block[a].size());
    const std::int32_t pos_excl = cur_s1 - on_pos;
    const std::int32_t neg_excl = m - cur_s1 - (b - on_pos);
    m_min = std::min(m_min, std::min(pos_excl, neg_excl) + b);
  };

  probe_at_angle(d - 1, s1);
  for (std::int32_t a = 0; a + 1 < d; ++a) {
    probe_at_angle(a, s1);
    for (std::int32_t idx : block[a]) {
      if (bit[idx]) {
        bit[idx] = 0;
        --s1;
      } else {
        bit[idx] = 1;
        ++s1;
      }
    }
    arc_s1[a] = s1;
    m_min = std::min(m_min, std::min(s1, m - s1));
  }

  out.numerator = m_min + (n - m);

  // Witnesses: members of every block bounding a minimizing arc.
  auto arc_count = [&](std::int32_t a) { return std::min(arc_s1[a], m - arc_s1[a]); };
  for (std::int32_t a = 0; a < d; ++a) {
    if (arc_count(a) != m_min) continue;
    const std::int32_t right = (a + 1) % d;
    out.witnesses.insert(out.witnesses.end(), block[a].begin(), block[a].end());
    out.witnesses.insert(out.witnesses.end(), block[right].begin(), block[right].end());
  }
  std::sort(out.witnesses.begin(), out.witnesses.end());
  out.witnesses.erase(std::unique(out.witnesses.begin(), out.witnesses.end()), out.witnesses.end());

  // Direction attaining the minimum: midpoint of the first minimizing arc
  // in evaluation order (the wrap arc first, then arcs 0..d-2).
  std::int32_t best_arc = d - 1;
  if (arc_count(d - 1) != m_min) {
    for (std::int32_t a = 0; a + 1 < d; ++a) {
      if (arc_count(a) == m_min) {
        best_arc = a;
        break;
      }
    }
  }
  const double lo = block_angle[best_arc];
  const double hi_raw = block_angle[(best_arc + 1) % d];
  const double hi = (best_arc + 1 < d) ? hi_raw : hi_raw + detail::kPi;
  const double phi = 0.5 * (lo + hi);
  // The sweep state holds S1 for the direction at phi on the wrap arc but
  // for the antipode of phi on every flipped arc; orient accordingly, then
  // face away from the strictly-positive side when it is the smaller one.
  double wx = std::cos(phi), wy = std::sin(phi);
  if (best_arc != d - 1) {
    wx = -wx;
    wy = -wy;
  }
  if (arc_s1[best_arc] <= m - arc_s1[best_arc]) {
    wx = -wx;
    wy = -wy;
  }
  out.witness_direction = {wx, wy};
  return out;
}

/// Exact Tukey depth of the origin for 2-D points; zeros are points that
/// are exactly (0,0). See depth2_core for the sweep mechanics.
inline BivariateDepth depth2_origin(std::span<const double> y, const Tolerance& tol = {}) {
  return depth2_core(y, {}, tol, /*strict_ties=*/false);
}

/// Independent quadratic oracle for depth2_origin: evaluates the closed
/// halfplane count with plain comparisons at every critical angle, its
/// antipode, and the midpoints between consecutive sorted angles.
inline std::int32_t sweep_brute_check(std::span<const double> y) {
  if (y.size() % 2 != 0) throw input_error("planar point list must have 2 columns");
  const std::int32_t n = static_cast<std::int32_t>(y.size() / 2);
  if (n == 0) throw degenerate_input_error("empty planar point set");

  std::vector<double> angles;
  angles.reserve(n);
  for (std::int32_t i = 0; i < n; ++i) {
    const double a = y[2 * static_cast<std::size_t>(i)];
    const double b = y[2 * static_cast<std::size_t>(i) + 1];
    if (a == 0.0 && b == 0.0) continue;
    angles.push_back(detail::folded_critical_angle(a, b));
  }
  std::sort(angles.begin(), angles.end());

  std::vector<double> candidates;
  candidates.push_back(0.0);  // covers the all-zero case
  for (std::size_t k = 0; k < angles.size(); ++k) {
    candidates.push_back(angles[k]);
    const double next = (k + 1 < angles.size()) ? angles[k + 1] : angles[0] + detail::kPi;
    candidates.push_back(0.5 * (angles[k] + next));
  }

  std::int32_t best = n;
  for (double phi : candidates) {
    for (int side = 0; side < 2; ++side) {
      const double ux = (side == 0) ? std::cos(phi) : -std::cos(phi);
      const double uy = (side == 0) ? std::sin(phi) : -std::sin(phi);
      std::int32_t count = 0;
      for (std::int32_t i = 0; i < n; ++i) {
        const double v = ux * y[2 * static_cast<std::size_t>(i)] +
                         uy * y[2 * static_cast<std::size_t>(i) + 1];
        if (v <= 0.0) ++count;
      }
      best = std::min(best, count);
    }
  }
  return best;
}

}  // namespace tukey
