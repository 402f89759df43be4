#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "colprob/geometry.hpp"
#include "colprob/interval_engine.hpp"

namespace colprob {

// Independent Gaussian uncertainty over an object configuration.
struct GaussianBelief {
  std::array<double, 3> mu;    // x, y, theta
  std::array<double, 3> sigma; // std deviations, all > 0
  GaussianBelief(std::array<double, 3> mean, std::array<double, 3> std_dev);
};

// How many 2*pi shifts enter the wrapped-Gaussian sums. Three either side is
// enough for nine digits across the sigma range used here.
struct HeadingTruncation {
  int n_beta = 3;
};

// Wrapped normal density on [0, 2*pi), truncated to |beta| <= n_beta shifts.
double wrapped_gaussian_pdf(double theta, double mu, double sigma,
                            HeadingTruncation trunc = {});

// Probability that the heading falls inside the union of pairwise-disjoint
// intervals, via the erf closed form of the truncated wrapped normal.
// Wrapping intervals are split at 2*pi first; the result is clamped to [0, 1].
double heading_interval_probability(std::span<const AngleInterval> intervals,
                                    double mu_theta, double sigma_theta,
                                    HeadingTruncation trunc = {});

// Position density of the belief expressed in polar coordinates (includes the
// rho Jacobian).
double polar_position_density(double phi, double rho,
                              const GaussianBelief& belief);

// Two-phase collision-probability estimator: construction freezes the covers,
// the polar grid, and the per-point disjoint heading intervals (all belief
// independent); estimate() is the tight quadrature loop over a belief.
class PocEstimator {
public:
  PocEstimator(const RectangleFootprint& ego_fp,
               const RectangleFootprint& obj_fp, int n_ego, int n_obj,
               int n_samples = 20);

  // Trapezoidal quadrature of polar_position_density x
  // heading_interval_probability over the grid, clamped to [0, 1].
  // Pure; identical inputs give bitwise-identical results.
  double estimate(const GaussianBelief& belief,
                  HeadingTruncation trunc = {}) const;

  const IntegrationGrid& grid() const { return grid_; }
  const DisjointIntervalSet& intervals() const { return sets_; }
  const RectangleFootprint& ego_footprint() const { return ego_fp_; }
  const RectangleFootprint& object_footprint() const { return obj_fp_; }
  const CircleCover& ego_cover() const { return ego_; }
  const CircleCover& object_cover() const { return obj_; }
  double rho_bar() const { return grid_.rho_bar; }
  IntervalCacheKey cache_key() const;

  // Interval-table cache: save/load the frozen precomputation.
  std::string save_cache() const;
  static PocEstimator from_cache(const std::string& text);

private:
  PocEstimator(RectangleFootprint ego_fp, RectangleFootprint obj_fp,
               int n_ego, int n_obj, int n_samples, bool defer);
  void build_tables();

  RectangleFootprint ego_fp_, obj_fp_;
  CircleCover ego_, obj_;
  IntegrationGrid grid_;
  DisjointIntervalSet sets_;

  // Flattened evaluation tables: only grid points with heading mass, their
  // plain (already split at 2*pi) interval segments, and the trapezoid
  // coefficient rho * corner_weight.
  struct Contribution {
    double x, y, coeff;
    std::uint32_t seg_begin, seg_end;
  };
  std::vector<Contribution> contrib_;
  std::vector<double> seg_lo_, seg_hi_;
};

// Convenience spellings of the two estimator phases.
PocEstimator init_estimator(const RectangleFootprint& ego_fp,
                            const RectangleFootprint& obj_fp, int n_ego,
                            int n_obj, int n_samples = 20);
double estimate_poc(const PocEstimator& est, const GaussianBelief& belief,
                    HeadingTruncation trunc = {});

} // namespace colprob
