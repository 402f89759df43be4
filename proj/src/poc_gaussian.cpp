#include "colprob/poc_gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace colprob {

namespace {

// std::erf saturates to exactly +/-1.0 well before |z| = 6.5 (glibc hits the
// rails near 5.92), so returning the rail directly is bitwise identical and
// skips the libm call on the far tails, where most grid points live.
inline double erf_saturated(double z) {
  if (z >= 6.5) return 1.0;
  if (z <= -6.5) return -1.0;
  return std::erf(z);
}

constexpr double kErfSpan = 6.5;

// Per-belief heading machinery: the 2*pi*beta - mu shifts that can place any
// part of [0, 2*pi] inside the non-saturated erf window. Shifts outside the
// window contribute an exact 0.0 term, so dropping them leaves every sum
// bitwise unchanged while cutting the work per segment to a couple of shifts.
struct HeadingKernel {
  double inv_sqrt2_sigma = 0.0;
  std::vector<double> shifts; // ascending beta order

  HeadingKernel(double mu_theta, double sigma_theta, int n_beta) {
    if (n_beta < 3) {
      throw std::invalid_argument("heading truncation needs n_beta >= 3");
    }
    if (!(sigma_theta > 0.0) || !std::isfinite(sigma_theta)) {
      throw std::invalid_argument("sigma_theta must be positive and finite");
    }
    const double mu = wrap_angle(mu_theta);
    inv_sqrt2_sigma = 1.0 / (sigma_theta * std::sqrt(2.0));
    const double reach = kErfSpan * std::sqrt(2.0) * sigma_theta;
    int lo = static_cast<int>(std::floor((mu - reach) / kTwoPi));
    int hi = static_cast<int>(std::ceil((mu + reach) / kTwoPi));
    lo = std::max(lo, -n_beta);
    hi = std::min(hi, n_beta);
    shifts.reserve(hi - lo + 1);
    for (int beta = lo; beta <= hi; ++beta) {
      shifts.push_back(kTwoPi * beta - mu);
    }
  }

  // Sum over the retained shifts of erf((hi+s)/(sigma sqrt 2)) - erf(lo ...).
  double segment_sum(double seg_lo, double seg_hi) const {
    double s = 0.0;
    for (double shift : shifts) {
      const double a = (seg_lo + shift) * inv_sqrt2_sigma;
      const double b = (seg_hi + shift) * inv_sqrt2_sigma;
      s += erf_saturated(b) - erf_saturated(a);
    }
    return s;
  }
};

// Splits one interval into plain [lo, hi] segments (at most two for a
// wrapping interval) and hands them to `emit` in a fixed order. Both the
// closed-form probability and the estimator tables go through here so their
// segment sequences match bitwise.
template <typename Emit>
void for_each_segment(const AngleInterval& iv, Emit&& emit) {
  if (iv.is_empty()) return;
  if (iv.is_full()) {
    emit(0.0, kTwoPi);
    return;
  }
  const double lo = iv.lower();
  const double hi = lo + iv.width();
  if (hi > kTwoPi) {
    emit(lo, kTwoPi);
    emit(0.0, hi - kTwoPi);
  } else {
    emit(lo, hi);
  }
}

} // namespace

GaussianBelief::GaussianBelief(std::array<double, 3> mean,
                               std::array<double, 3> std_dev)
    : mu(mean), sigma(std_dev) {
  for (double m : mu) {
    if (!std::isfinite(m)) {
      throw std::invalid_argument("belief mean must be finite");
    }
  }
  for (double s : sigma) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("belief std deviations must be positive");
    }
  }
}

double wrapped_gaussian_pdf(double theta, double mu, double sigma,
                            HeadingTruncation trunc) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be positive and finite");
  }
  if (trunc.n_beta < 3) {
    throw std::invalid_argument("heading truncation needs n_beta >= 3");
  }
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  double s = 0.0;
  for (int beta = -trunc.n_beta; beta <= trunc.n_beta; ++beta) {
    const double d = theta + kTwoPi * beta - mu;
    s += std::exp(-d * d * inv_two_var);
  }
  return s / (std::sqrt(kTwoPi) * sigma);
}

double heading_interval_probability(std::span<const AngleInterval> intervals,
                                    double mu_theta, double sigma_theta,
                                    HeadingTruncation trunc) {
  const HeadingKernel kernel(mu_theta, sigma_theta, trunc.n_beta);
  double total = 0.0;
  for (const AngleInterval& iv : intervals) {
    for_each_segment(iv, [&](double lo, double hi) {
      total += kernel.segment_sum(lo, hi);
    });
  }
  return std::clamp(0.5 * total, 0.0, 1.0);
}

double polar_position_density(double phi, double rho,
                              const GaussianBelief& belief) {
  const double dx = rho * std::cos(phi) - belief.mu[0];
  const double dy = rho * std::sin(phi) - belief.mu[1];
  const double sx = belief.sigma[0];
  const double sy = belief.sigma[1];
  const double q =
      dx * dx / (2.0 * sx * sx) + dy * dy / (2.0 * sy * sy);
  return rho / (kTwoPi * sx * sy) * std::exp(-q);
}

PocEstimator::PocEstimator(RectangleFootprint ego_fp, RectangleFootprint obj_fp,
                           int n_ego, int n_obj, int n_samples, bool)
    : ego_fp_(ego_fp),
      obj_fp_(obj_fp),
      ego_(cover_rectangle(ego_fp, n_ego)),
      obj_(cover_rectangle(obj_fp, n_obj)) {
  (void)n_samples;
}

PocEstimator::PocEstimator(const RectangleFootprint& ego_fp,
                           const RectangleFootprint& obj_fp, int n_ego,
                           int n_obj, int n_samples)
    : PocEstimator(ego_fp, obj_fp, n_ego, n_obj, n_samples, true) {
  grid_ = build_grid(max_collision_distance(ego_, obj_), n_samples);

  // Stream the grid point by point: raw intervals for one point, merged in
  // place, appended to the flat CSR arrays. Never materializes the full
  // point-by-pair matrix, which matters at fine grids.
  const std::size_t n_pairs =
      static_cast<std::size_t>(ego_.n_circles) * obj_.n_circles;
  std::vector<AngleInterval> raw(n_pairs);
  std::vector<std::uint32_t> starts;
  starts.reserve(grid_.n_points() + 1);
  starts.push_back(0);
  std::vector<AngleInterval> flat;
  const int n_s = grid_.n_samples;
  for (int j = 0; j < n_s; ++j) {
    const double cph = std::cos(grid_.phi[j]);
    const double sph = std::sin(grid_.phi[j]);
    for (int m = 0; m < n_s; ++m) {
      const double x = grid_.rho[m] * cph;
      const double y = grid_.rho[m] * sph;
      point_raw_intervals(ego_, obj_, x, y, raw);
      merge_point_intervals(raw, flat);
      starts.push_back(static_cast<std::uint32_t>(flat.size()));
    }
  }
  sets_ = DisjointIntervalSet::from_parts(std::move(starts), std::move(flat));
  build_tables();
}

void PocEstimator::build_tables() {
  contrib_.clear();
  seg_lo_.clear();
  seg_hi_.clear();
  const int n_s = grid_.n_samples;
  for (std::size_t p = 0; p < grid_.n_points(); ++p) {
    const auto span = sets_.at(p);
    if (span.empty()) continue;
    const int j = static_cast<int>(p) / n_s;
    const int m = static_cast<int>(p) % n_s;
    const double rho = grid_.rho[m];
    if (rho == 0.0) continue; // the Jacobian zeroes the whole rho = 0 edge
    double w = 1.0;
    if (j == 0 || j == n_s - 1) w *= 0.5;
    if (m == 0 || m == n_s - 1) w *= 0.5;
    Contribution c;
    c.x = rho * std::cos(grid_.phi[j]);
    c.y = rho * std::sin(grid_.phi[j]);
    c.coeff = w * rho;
    c.seg_begin = static_cast<std::uint32_t>(seg_lo_.size());
    for (const AngleInterval& iv : span) {
      for_each_segment(iv, [&](double lo, double hi) {
        seg_lo_.push_back(lo);
        seg_hi_.push_back(hi);
      });
    }
    c.seg_end = static_cast<std::uint32_t>(seg_lo_.size());
    contrib_.push_back(c);
  }
}

double PocEstimator::estimate(const GaussianBelief& belief,
                              HeadingTruncation trunc) const {
  const HeadingKernel kernel(belief.mu[2], belief.sigma[2], trunc.n_beta);
  const double mux = belief.mu[0];
  const double muy = belief.mu[1];
  const double inv_2sx2 = 1.0 / (2.0 * belief.sigma[0] * belief.sigma[0]);
  const double inv_2sy2 = 1.0 / (2.0 * belief.sigma[1] * belief.sigma[1]);

  // Fixed accumulation order: grid points azimuth-major, segments in stored
  // order, truncation shifts innermost and ascending. Keeps repeated calls
  // bitwise identical.
  double total = 0.0;
  for (const Contribution& c : contrib_) {
    const double dx = c.x - mux;
    const double dy = c.y - muy;
    const double q = dx * dx * inv_2sx2 + dy * dy * inv_2sy2;
    if (q >= 745.0) continue; // exp underflows to zero, term contributes nothing
    const double pos = std::exp(-q);
    double hsum = 0.0;
    for (std::uint32_t s = c.seg_begin; s < c.seg_end; ++s) {
      hsum += kernel.segment_sum(seg_lo_[s], seg_hi_[s]);
    }
    const double heading = std::clamp(0.5 * hsum, 0.0, 1.0);
    total += c.coeff * pos * heading;
  }
  const double inv_norm = 1.0 / (kTwoPi * belief.sigma[0] * belief.sigma[1]);
  const double poc = total * inv_norm * grid_.delta_phi * grid_.delta_rho;
  return std::clamp(poc, 0.0, 1.0);
}

IntervalCacheKey PocEstimator::cache_key() const {
  IntervalCacheKey key;
  key.ego_length = ego_fp_.length;
  key.ego_width = ego_fp_.width;
  key.obj_length = obj_fp_.length;
  key.obj_width = obj_fp_.width;
  key.n_ego = ego_.n_circles;
  key.n_obj = obj_.n_circles;
  key.n_samples = grid_.n_samples;
  return key;
}

std::string PocEstimator::save_cache() const {
  return serialize_interval_cache(cache_key(), grid_, sets_);
}

PocEstimator init_estimator(const RectangleFootprint& ego_fp,
                            const RectangleFootprint& obj_fp, int n_ego,
                            int n_obj, int n_samples) {
  return PocEstimator(ego_fp, obj_fp, n_ego, n_obj, n_samples);
}

double estimate_poc(const PocEstimator& est, const GaussianBelief& belief,
                    HeadingTruncation trunc) {
  return est.estimate(belief, trunc);
}

PocEstimator PocEstimator::from_cache(const std::string& text) {
  IntervalCache cache = deserialize_interval_cache(text);
  const RectangleFootprint ego_fp(cache.key.ego_length, cache.key.ego_width);
  const RectangleFootprint obj_fp(cache.key.obj_length, cache.key.obj_width);
  PocEstimator est(ego_fp, obj_fp, cache.key.n_ego, cache.key.n_obj,
                   cache.key.n_samples, true);
  if (max_collision_distance(est.ego_, est.obj_) != cache.grid.rho_bar) {
    throw std::runtime_error("interval cache radius does not match its key");
  }
  est.grid_ = std::move(cache.grid);
  est.sets_ = std::move(cache.intervals);
  est.build_tables();
  return est;
}

} // namespace colprob
