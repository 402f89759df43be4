#include "colprob/mcs.hpp"

#include <cmath>
#include <stdexcept>

namespace colprob {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t v, int k) {
  return (v << k) | (v >> (64 - k));
}

} // namespace

SeededSampler::SeededSampler(std::uint64_t seed) : seed_(seed) {
  std::uint64_t x = seed;
  for (auto& word : s_) word = splitmix64(x);
}

SeededSampler SeededSampler::substream(std::uint64_t index) const {
  // Mix (seed, index) into a fresh root seed; splitmix64 scrambles enough
  // that adjacent indices give unrelated streams.
  std::uint64_t x = seed_ ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  return SeededSampler(splitmix64(x));
}

std::uint64_t SeededSampler::raw() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double SeededSampler::uniform01() {
  return static_cast<double>(raw() >> 11) * 0x1.0p-53;
}

double SeededSampler::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 shifted into (0, 1] so the log stays finite.
  const double u1 = static_cast<double>((raw() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = kTwoPi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

bool rectangles_intersect(const RectangleFootprint& ego_fp,
                          const RectangleFootprint& obj_fp,
                          const Configuration& obj_cfg) {
  const double a1 = 0.5 * ego_fp.length, a2 = 0.5 * ego_fp.width;
  const double b1 = 0.5 * obj_fp.length, b2 = 0.5 * obj_fp.width;
  const double c = std::cos(obj_cfg.theta), s = std::sin(obj_cfg.theta);
  const double ac = std::fabs(c), as = std::fabs(s);
  const double x = obj_cfg.x, y = obj_cfg.y;
  // Projection overlap on the four candidate axes: ego's axes, then the
  // object's. Strict inequality would drop touching contact, which counts.
  if (std::fabs(x) > a1 + b1 * ac + b2 * as) return false;
  if (std::fabs(y) > a2 + b1 * as + b2 * ac) return false;
  if (std::fabs(x * c + y * s) > b1 + a1 * ac + a2 * as) return false;
  if (std::fabs(-x * s + y * c) > b2 + a1 * as + a2 * ac) return false;
  return true;
}

namespace {

template <typename Collides>
McsResult run_mcs(const GaussianBelief& belief, std::int64_t n,
                  SeededSampler& sampler, Collides&& collides) {
  if (n < 1) throw std::invalid_argument("sample count must be at least 1");
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    Configuration cfg;
    cfg.x = belief.mu[0] + belief.sigma[0] * sampler.normal();
    cfg.y = belief.mu[1] + belief.sigma[1] * sampler.normal();
    cfg.theta = wrap_angle(belief.mu[2] + belief.sigma[2] * sampler.normal());
    if (collides(cfg)) ++hits;
  }
  McsResult result;
  result.estimate = static_cast<double>(hits) / static_cast<double>(n);
  result.n_samples = n;
  result.std_error = std::sqrt(result.estimate * (1.0 - result.estimate) /
                               static_cast<double>(n));
  return result;
}

} // namespace

McsResult mcs_poc(const RectangleFootprint& ego_fp,
                  const RectangleFootprint& obj_fp,
                  const GaussianBelief& belief, std::int64_t n,
                  SeededSampler& sampler) {
  return run_mcs(belief, n, sampler, [&](const Configuration& cfg) {
    return rectangles_intersect(ego_fp, obj_fp, cfg);
  });
}

McsResult mcs_poc_circles(const CircleCover& ego_cover,
                          const CircleCover& obj_cover,
                          const GaussianBelief& belief, std::int64_t n,
                          SeededSampler& sampler) {
  const double joint = ego_cover.radius + obj_cover.radius;
  const double joint_sq = joint * joint;
  return run_mcs(belief, n, sampler, [&](const Configuration& cfg) {
    const double c = std::cos(cfg.theta), s = std::sin(cfg.theta);
    for (double oq : obj_cover.offsets) {
      const double ox = cfg.x + oq * c;
      const double oy = cfg.y + oq * s;
      for (double ol : ego_cover.offsets) {
        const double dx = ox - ol;
        if (dx * dx + oy * oy <= joint_sq) return true;
      }
    }
    return false;
  });
}

} // namespace colprob
