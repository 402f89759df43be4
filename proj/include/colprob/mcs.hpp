#pragma once

#include <array>
#include <cstdint>

#include "colprob/geometry.hpp"
#include "colprob/poc_gaussian.hpp"

namespace colprob {

// Deterministic xoshiro256++ stream seeded through splitmix64. Substreams are
// derived in O(1) from (seed, index), so parallel or per-call sampling stays
// reproducible from one root seed.
class SeededSampler {
public:
  explicit SeededSampler(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  SeededSampler substream(std::uint64_t index) const;

  std::uint64_t raw();  // next 64 random bits
  double uniform01();   // [0, 1)
  double normal();      // standard normal (Box-Muller, cached spare)

private:
  std::uint64_t seed_ = 0;
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct McsResult {
  double estimate = 0.0;
  std::int64_t n_samples = 0;
  double std_error = 0.0; // sqrt(p(1-p)/n)
};

// Exact oriented-rectangle overlap via the separating axis theorem. The ego
// rectangle is axis-aligned at the origin; touching counts as intersection.
bool rectangles_intersect(const RectangleFootprint& ego_fp,
                          const RectangleFootprint& obj_fp,
                          const Configuration& obj_cfg);

// Ground-truth POC: sample object configurations from the belief (x, y
// Gaussian; heading Gaussian taken mod 2*pi) and count exact rectangle
// collisions. Advances the sampler.
McsResult mcs_poc(const RectangleFootprint& ego_fp,
                  const RectangleFootprint& obj_fp,
                  const GaussianBelief& belief, std::int64_t n,
                  SeededSampler& sampler);

// Same sampling, but collision means any ego circle center within the joint
// radius of any object circle center — the event the analytic estimator
// integrates, tested here independently of it.
McsResult mcs_poc_circles(const CircleCover& ego_cover,
                          const CircleCover& obj_cover,
                          const GaussianBelief& belief, std::int64_t n,
                          SeededSampler& sampler);

} // namespace colprob
