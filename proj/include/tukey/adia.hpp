#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tukey/combinations.hpp"
#include "tukey/geometry.hpp"
#include "tukey/rcom.hpp"
#include "tukey/subspace.hpp"

namespace tukey {

struct AdiaOptions {
  /// Verify during the run that every child subspace numerator is at most
  /// its parent's stored value (the descent property the pruning relies
  /// on); a violation throws std::logic_error.
  bool check_descent = false;
};

struct AdiaStats {
  std::uint64_t pops = 0;         // frontier pops, resumed entries included
  std::uint64_t expansions = 0;   // distinct combinations expanded
  std::uint64_t sweeps = 0;       // bivariate sweeps actually computed
  std::uint64_t pushes = 0;       // visited insertions
  std::uint64_t envelope_size = 0;
  std::uint64_t final_sweep_combos = 0;
  std::int32_t initial_bound = 0;  // seed subspace numerator
};

struct FrontierEntry {
  Combination combo;
  std::int32_t resume_child = 0;  // first unprocessed sub-combination
};

/// The search state of the adaptive iterative algorithm: a permanent map
/// of visited (p-1)-combinations with the subspace numerator of the
/// parent that generated each, a LIFO frontier of combinations pending
/// expansion, and the nonincreasing incumbent bound (in subspace
/// numerator units, i.e. depth numerator + (p-2)).
///
/// Visited entries are never deleted; pruning removes frontier entries
/// only, so a pruned combination can never be re-admitted and the search
/// terminates after at most C(n, p-1) expansions.
class FrontierRegistry {
 public:
  explicit FrontierRegistry(std::int32_t incumbent) : incumbent_(incumbent) {}

  bool known(const Combination& combo) const { return visited_.contains(combo); }

  std::int32_t stored(const Combination& combo) const {
    auto it = visited_.find(combo);
    if (it == visited_.end()) throw std::logic_error("combination not in the visited map");
    return it->second;
  }

  /// Inserts into the visited map; returns false if already present.
  bool record(const Combination& combo, std::int32_t nu) {
    return visited_.emplace(combo, nu).second;
  }

  /// Frontier push; the combination must already be recorded.
  void push(FrontierEntry entry) {
    if (!known(entry.combo)) throw std::logic_error("push of an unrecorded combination");
    frontier_.push_back(std::move(entry));
  }

  std::optional<FrontierEntry> pop() {
    if (frontier_.empty()) return std::nullopt;
    FrontierEntry e = std::move(frontier_.back());
    frontier_.pop_back();
    return e;
  }

  std::int32_t incumbent() const { return incumbent_; }

  /// Lowers the incumbent; returns true when it actually decreased.
  bool lower_incumbent(std::int32_t nu) {
    if (nu >= incumbent_) return false;
    incumbent_ = nu;
    return true;
  }

  /// Removes every frontier entry whose stored numerator strictly exceeds
  /// the incumbent. Entries at exactly the bound can still tie the
  /// minimum and stay.
  void prune() {
    std::erase_if(frontier_, [&](const FrontierEntry& e) { return stored(e.combo) > incumbent_; });
  }

  /// Visits every unpruned entry (stored numerator within the incumbent
  /// bound); feeds the final envelope sweep.
  template <typename F>
  void for_each_active(F&& f) const {
    for (const auto& [combo, nu] : visited_) {
      if (nu <= incumbent_) f(combo, nu);
    }
  }

  std::size_t frontier_size() const { return frontier_.size(); }
  std::size_t visited_size() const { return visited_.size(); }

 private:
  std::unordered_map<Combination, std::int32_t, CombinationHash> visited_;
  std::vector<FrontierEntry> frontier_;
  std::int32_t incumbent_;
};

struct InitialScan {
  std::int32_t subspace_numerator = 0;  // d0 in subspace units
  Combination seed;                     // arity p-1
  Combination parent;                   // arity p-2, the seed minus its completion
};

/// Step-2 bootstrap: scans the 2n directions +-x_j/|x_j| for the smallest
/// closed-halfspace count, seeds a (p-2)-combination from the points with
/// the smallest nonnegative projections onto that direction, and
/// completes it with the bivariate witness of its subspace sweep.
inline InitialScan initial_scan(const PointCloud& cloud, const Tolerance& tol = {}) {
  const std::int32_t n = cloud.rows();
  const std::int32_t p = cloud.dim();
  if (p < 3) throw input_error("initial_scan requires dimension >= 3");
  if (n <= p) throw degenerate_input_error("need more observations than dimensions");

  // Best of the 2n data-point directions.
  std::int32_t best_count = n + 1;
  std::int32_t best_j = 0;
  int best_sign = 1;
  std::vector<double> u(p);
  for (std::int32_t j = 0; j < n; ++j) {
    std::span<const double> xj = cloud.row(j);
    const double nj = cloud.row_norm(j);
    for (std::int32_t t = 0; t < p; ++t) u[t] = xj[t] / nj;
    std::int32_t neg = 0, pos = 0, zero = 0;
    for (std::int32_t i = 0; i < n; ++i) {
      const int s = tol.sign(dot(u, cloud.row(i)), cloud.row_norm(i));
      if (s < 0) ++neg;
      else if (s > 0) ++pos;
      else ++zero;
    }
    if (neg + zero < best_count) {
      best_count = neg + zero;
      best_j = j;
      best_sign = 1;
    }
    if (pos + zero < best_count) {
      best_count = pos + zero;
      best_j = j;
      best_sign = -1;
    }
  }

  std::span<const double> xj = cloud.row(best_j);
  for (std::int32_t t = 0; t < p; ++t) u[t] = best_sign * xj[t] / cloud.row_norm(best_j);

  struct Proj {
    double value;
    std::int32_t idx;
    int sign;
  };
  std::vector<Proj> proj(n);
  for (std::int32_t i = 0; i < n; ++i) {
    const double v = dot(u, cloud.row(i));
    proj[i] = {v, i, tol.sign(v, cloud.row_norm(i))};
  }
  std::sort(proj.begin(), proj.end(), [](const Proj& a, const Proj& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.idx < b.idx;
  });

  std::vector<std::int32_t> parent;
  parent.reserve(p - 2);
  for (const Proj& pr : proj) {
    if (pr.sign >= 0) parent.push_back(pr.idx);
    if (static_cast<std::int32_t>(parent.size()) == p - 2) break;
  }
  if (static_cast<std::int32_t>(parent.size()) < p - 2) {
    // Not enough nonnegative projections; fall back to the smallest
    // magnitudes. The seed only needs to be a valid combination.
    std::sort(proj.begin(), proj.end(), [](const Proj& a, const Proj& b) {
      if (std::abs(a.value) != std::abs(b.value)) return std::abs(a.value) < std::abs(b.value);
      return a.idx < b.idx;
    });
    parent.clear();
    for (std::int32_t i = 0; i < p - 2; ++i) parent.push_back(proj[i].idx);
  }
  std::sort(parent.begin(), parent.end());

  const SubspaceSweep sweep = subspace_sweep(cloud, parent, tol);
  InitialScan out;
  out.subspace_numerator = sweep.nu;
  out.parent = Combination(parent);
  std::vector<std::int32_t> seed = parent;
  seed.push_back(sweep.planar.witnesses.front());
  std::sort(seed.begin(), seed.end());
  out.seed = Combination(std::move(seed));
  return out;
}

/// Driver for one full adaptive iterative search. The expansion and the
/// final envelope sweep are exposed so that they can be exercised and
/// instrumented in isolation.
class AdiaSearch {
 public:
  AdiaSearch(const PointCloud& cloud, const Tolerance& tol, AdiaOptions opts = {},
             AdiaStats* stats = nullptr)
      : cloud_(cloud), tol_(tol), opts_(opts), stats_(stats), registry_(cloud.rows() + 1) {}

  FrontierRegistry& registry() { return registry_; }
  std::int32_t best_nu() const { return best_nu_; }
  const Combination& best_combo() const { return best_combo_; }

  const SubspaceSweep& sweep_for(const Combination& combo) {
    auto it = memo_.find(combo);
    if (it != memo_.end()) return it->second;
    if (stats_) ++stats_->sweeps;
    return memo_.emplace(combo, subspace_sweep(cloud_, combo.indices, tol_)).first->second;
  }

  /// Bootstrap: seed the registry and the incumbent from the initial scan.
  void seed() {
    const InitialScan is = initial_scan(cloud_, tol_);
    best_nu_ = is.subspace_numerator;
    best_combo_ = is.parent;
    sweep_for(is.parent);  // warm the memo; initial_scan swept it already
    registry_.lower_incumbent(best_nu_);
    registry_.record(is.seed, is.subspace_numerator);
    registry_.push({is.seed, 0});
    if (stats_) stats_->initial_bound = is.subspace_numerator;
  }

  /// Expansion of one popped combination: sweeps each sub-combination,
  /// records and enqueues its witness completions, and on an incumbent
  /// improvement re-pushes the remainder of this combination and stops so
  /// pruning can run. Returns true when the incumbent improved.
  bool expand(const FrontierEntry& entry) {
    const std::int32_t arity = static_cast<std::int32_t>(entry.combo.arity());
    const std::int32_t parent_value = registry_.stored(entry.combo);
    std::vector<std::pair<Combination, std::int32_t>> batch;
    bool improved = false;

    std::vector<std::int32_t> child(entry.combo.indices.size() - 1);
    for (std::int32_t c = entry.resume_child; c < arity; ++c) {
      for (std::int32_t t = 0, w = 0; t < arity; ++t) {
        if (t != c) child[w++] = entry.combo.indices[t];
      }
      const Combination child_combo{std::vector<std::int32_t>(child)};
      const SubspaceSweep& sweep = sweep_for(child_combo);
      if (opts_.check_descent && sweep.nu > parent_value) {
        throw std::logic_error("descent violation: child subspace numerator " +
                               std::to_string(sweep.nu) + " exceeds parent value " +
                               std::to_string(parent_value));
      }
      for (std::int32_t w : sweep.planar.witnesses) {
        std::vector<std::int32_t> completed = child_combo.indices;
        completed.insert(std::upper_bound(completed.begin(), completed.end(), w), w);
        Combination candidate{std::move(completed)};
        if (registry_.record(candidate, sweep.nu)) {
          if (stats_) ++stats_->pushes;
          if (sweep.nu <= registry_.incumbent()) batch.emplace_back(std::move(candidate), sweep.nu);
        }
      }
      if (sweep.nu < best_nu_) {
        best_nu_ = sweep.nu;
        best_combo_ = child_combo;
        registry_.lower_incumbent(sweep.nu);
        improved = true;
        if (c + 1 < arity) registry_.push({entry.combo, c + 1});
        break;
      }
    }

    // Low stored values pushed last so the LIFO frontier chases them first.
    std::stable_sort(batch.begin(), batch.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (auto& [combo, nu] : batch) registry_.push({std::move(combo), 0});
    return improved;
  }

  /// Final envelope pass: enumerate (p-2)-combinations among the points
  /// lying on or cut off by the hyperplanes of the unpruned visited
  /// combinations. Returns the final depth numerator including the
  /// zero-row adjustment.
  std::int32_t final_sweep() {
    const std::int32_t p = cloud_.dim();
    std::vector<std::int32_t> envelope;
    registry_.for_each_active([&](const Combination& combo, std::int32_t) {
      auto basis = orthonormal_complement(cloud_, combo.indices, tol_);
      const std::vector<double>& u = basis[0];
      std::int32_t neg = 0, pos = 0;
      for (std::int32_t i = 0; i < cloud_.rows(); ++i) {
        const int s = tol_.sign(dot(u, cloud_.row(i)), cloud_.row_norm(i));
        if (s < 0) ++neg;
        else if (s > 0) ++pos;
      }
      const int cut_sign = (neg <= pos) ? -1 : 1;
      for (std::int32_t i = 0; i < cloud_.rows(); ++i) {
        const int s = tol_.sign(dot(u, cloud_.row(i)), cloud_.row_norm(i));
        if (s == 0 || s == cut_sign) envelope.push_back(i);
      }
    });
    std::sort(envelope.begin(), envelope.end());
    envelope.erase(std::unique(envelope.begin(), envelope.end()), envelope.end());
    if (stats_) stats_->envelope_size = envelope.size();

    const std::int32_t s = static_cast<std::int32_t>(envelope.size());
    if (s >= p - 2) {
      std::vector<std::int32_t> pick(p - 2);
      first_combination(pick);
      std::vector<std::int32_t> combo(p - 2);
      do {
        for (std::int32_t t = 0; t < p - 2; ++t) combo[t] = envelope[pick[t]];
        Combination candidate{std::vector<std::int32_t>(combo)};
        const SubspaceSweep& sweep = sweep_for(candidate);
        if (stats_) ++stats_->final_sweep_combos;
        if (sweep.nu < best_nu_) {
          best_nu_ = sweep.nu;
          best_combo_ = candidate;
          registry_.lower_incumbent(sweep.nu);
        }
      } while (next_combination(pick, s));
    }
    return best_nu_ - (p - 2) + cloud_.zero_count();
  }

  DepthResult run() {
    const std::int32_t p = cloud_.dim();
    seed();
    while (auto entry = registry_.pop()) {
      if (registry_.stored(entry->combo) > registry_.incumbent()) continue;  // lazily pruned
      if (stats_) {
        ++stats_->pops;
        if (entry->resume_child == 0) ++stats_->expansions;
      }
      if (expand(*entry)) registry_.prune();
      if (best_nu_ == p - 2) break;  // at the depth floor, nothing can improve
    }
    const std::int32_t numerator = final_sweep();

    const SubspaceSweep& winner = sweep_for(best_combo_);
    std::vector<double> base(p);
    for (std::int32_t j = 0; j < p; ++j) {
      base[j] = winner.planar.witness_direction[0] * winner.basis.e1[j] +
                winner.planar.witness_direction[1] * winner.basis.e2[j];
    }
    DepthResult out;
    out.numerator = numerator;
    out.n = cloud_.total_points();
    out.witness_combination = best_combo_;
    out.witness_direction =
        tilt_off_members(cloud_, best_combo_.indices, base, best_nu_ - (p - 2), tol_);
    return out;
  }

 private:
  const PointCloud& cloud_;
  Tolerance tol_;
  AdiaOptions opts_;
  AdiaStats* stats_;
  FrontierRegistry registry_;
  std::unordered_map<Combination, SubspaceSweep, CombinationHash> memo_;
  std::int32_t best_nu_ = 0;
  Combination best_combo_;
};

/// Depth-adaptive exact depth: identical numerator to depth_rcom on every
/// input, typically much faster when the depth of the query is small.
inline DepthResult depth_adia(const PointCloud& cloud, const Tolerance& tol = {},
                              AdiaOptions opts = {}, AdiaStats* stats = nullptr) {
  if (cloud.dim() < 3) throw input_error("depth_adia requires dimension >= 3");
  if (cloud.rows() <= cloud.dim()) {
    throw degenerate_input_error("need more observations than dimensions");
  }
  AdiaSearch search(cloud, tol, opts, stats);
  return search.run();
}

}  // namespace tukey
