#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "colprob/geometry.hpp"

namespace colprob {

// Uniform product grid over azimuth [0, 2*pi] x radius [0, rho_bar], both
// ends inclusive, n_samples points per axis. Flattened point index is
// azimuth-major: point = j * n_samples + m for (phi_j, rho_m).
struct IntegrationGrid {
  int n_samples = 0;
  double rho_bar = 0.0;
  double delta_phi = 0.0;
  double delta_rho = 0.0;
  std::vector<double> phi;
  std::vector<double> rho;

  std::size_t n_points() const { return phi.size() * rho.size(); }
  double point_phi(std::size_t p) const { return phi[p / rho.size()]; }
  double point_rho(std::size_t p) const { return rho[p % rho.size()]; }
};

IntegrationGrid build_grid(double rho_bar, int n_samples);

// Raw heading intervals for every grid point and ego/object circle pair,
// before merging. Pair index = ego_index * n_object + object_index with both
// circle lists in ascending-offset order.
class IntervalGridMatrix {
public:
  IntervalGridMatrix(std::size_t n_points, int n_ego, int n_object);

  const AngleInterval& at(std::size_t point, int pair) const {
    return data_[point * static_cast<std::size_t>(n_pairs_) + pair];
  }
  AngleInterval& at(std::size_t point, int pair) {
    return data_[point * static_cast<std::size_t>(n_pairs_) + pair];
  }
  std::size_t n_points() const { return n_points_; }
  int n_pairs() const { return n_pairs_; }
  int n_ego() const { return n_ego_; }
  int n_object() const { return n_object_; }

private:
  std::size_t n_points_;
  int n_ego_;
  int n_object_;
  int n_pairs_;
  std::vector<AngleInterval> data_;
};

// Fills the matrix from the two covers: one shifted-polar transform per
// (point, ego circle), heading bounds for each non-negative object offset,
// and the circle at -l_o taken as the +l_o interval rotated by pi.
IntervalGridMatrix intersection_intervals(const CircleCover& ego,
                                          const CircleCover& object,
                                          const IntegrationGrid& grid);

// One point's raw intervals for all circle pairs, written to `out` in
// pair-index order. `out` must hold n_ego * n_object entries. This is the
// per-point core of intersection_intervals, exposed so callers that cannot
// afford the full matrix stream through the grid point by point.
void point_raw_intervals(const CircleCover& ego, const CircleCover& object,
                         double x, double y, std::span<AngleInterval> out);

// Per-point unions of the raw intervals: pairwise-disjoint, sorted by lower
// endpoint, zero-measure entries dropped, full circle collapsed to one entry.
class DisjointIntervalSet {
public:
  DisjointIntervalSet() = default;
  static DisjointIntervalSet from_parts(std::vector<std::uint32_t> starts,
                                        std::vector<AngleInterval> flat);

  std::span<const AngleInterval> at(std::size_t point) const {
    return {flat_.data() + starts_[point], flat_.data() + starts_[point + 1]};
  }
  std::size_t n_points() const {
    return starts_.empty() ? 0 : starts_.size() - 1;
  }
  std::size_t total_intervals() const { return flat_.size(); }

  friend bool operator==(const DisjointIntervalSet& a,
                         const DisjointIntervalSet& b) {
    return a.starts_ == b.starts_ && a.flat_ == b.flat_;
  }

private:
  std::vector<std::uint32_t> starts_; // CSR offsets, size n_points + 1
  std::vector<AngleInterval> flat_;
};

DisjointIntervalSet sort_disjoint(const IntervalGridMatrix& matrix);

// Core of sort_disjoint shared with streaming callers: circular union of one
// point's raw intervals, appended to `out` sorted by lower endpoint.
void merge_point_intervals(std::span<const AngleInterval> raw,
                           std::vector<AngleInterval>& out);

// Cache identity for a precomputed interval table.
struct IntervalCacheKey {
  double ego_length = 0.0, ego_width = 0.0;
  double obj_length = 0.0, obj_width = 0.0;
  int n_ego = 0, n_obj = 0, n_samples = 0;
  friend bool operator==(const IntervalCacheKey&, const IntervalCacheKey&) = default;
};

struct IntervalCache {
  IntervalCacheKey key;
  IntegrationGrid grid;
  DisjointIntervalSet intervals;
};

// JSON round trip for the merged table; doubles survive bit-exactly.
std::string serialize_interval_cache(const IntervalCacheKey& key,
                                     const IntegrationGrid& grid,
                                     const DisjointIntervalSet& set);
IntervalCache deserialize_interval_cache(const std::string& text);

} // namespace colprob
