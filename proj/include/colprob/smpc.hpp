#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "colprob/geometry.hpp"
#include "colprob/mcs.hpp"
#include "colprob/poc_gaussian.hpp"

namespace colprob {

// Planar ego state; velocity is a commanded input, not part of the state.
struct EgoState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  Configuration configuration() const { return {x, y, theta}; }
};

struct ControlInput {
  double v = 0.0;     // meters/second
  double omega = 0.0; // radians/second
};

// Box bounds on the input channels.
struct InputBounds {
  double v_min = 0.0;
  double v_max = 10.0;
  double omega_min = -1.0;
  double omega_max = 1.0;
  ControlInput clamp(const ControlInput& u) const;
};

// Reference curve sampled at uniform parameter steps; positions between
// samples are linearly interpolated, headings by shortest arc. The parameter
// is per-step progress: with an aligned heading the parameter advances by the
// commanded speed each planning step, so one parameter unit covers
// sample_time * 1 m/s of arc length.
class ReferencePath {
public:
  ReferencePath(double lambda0, double dlambda,
                std::vector<std::array<double, 3>> samples, double v_ref);

  // Straight segment from (x0, y0) in direction `heading`, long enough for
  // `lambda_span` parameter units, each worth `meters_per_lambda` of arc.
  static ReferencePath straight(double x0, double y0, double heading,
                                double lambda_span, double meters_per_lambda,
                                double v_ref);

  double lambda_start() const { return lambda0_; }
  double lambda_goal() const;
  double clip(double lambda) const;
  std::array<double, 3> eval(double lambda) const; // x, y, tangent heading
  double v_ref() const { return v_ref_; }
  std::size_t n_samples() const { return samples_.size(); }

private:
  double lambda0_ = 0.0;
  double dlambda_ = 1.0;
  std::vector<std::array<double, 3>> samples_;
  double v_ref_ = 0.0;
};

// Forward-Euler unicycle step.
EgoState unicycle_step(const EgoState& z, const ControlInput& u, double t_s);

// Parameter of the path point nearest to the configuration's position
// (positions only; heading never enters the metric). Continuous: the
// projection onto each polyline segment is considered, not just the samples.
// Ties resolve toward the smaller parameter.
double localize_on_path(const ReferencePath& path, const Configuration& cfg);

// Per-step progress model: the parameter advances by the commanded speed
// scaled with the heading alignment, clipped to the path domain.
double advance_progress(const ReferencePath& path, double lambda, double v_e,
                        double theta_e, double theta_p);

// Path-following error (x, y, wrapped heading, speed vs the reference).
std::array<double, 4> path_error(const Configuration& cfg, double v_e,
                                 const ReferencePath& path, double lambda);

// e' W e with diagonal W.
double stage_cost(const std::array<double, 4>& e,
                  const std::array<double, 4>& w_diag);

enum class SolveStatus { optimal, feasible_suboptimal, infeasible };

// Stable lower-case name, used in reports and CSV logs.
const char* solve_status_name(SolveStatus status);

// How the collision-probability constraint is evaluated inside the solver:
// the deterministic quadrature estimator, or fresh Monte-Carlo draws per
// evaluation (values only; gradients always come from the estimator, since
// re-drawn samples make finite differences of the sampled value meaningless).
enum class PocBackend { analytic, mcs };

struct SmpcConfig {
  int horizon = 10;         // prediction steps
  double sample_time = 0.2; // seconds per step
  std::array<double, 4> weights = {1.0, 1.0, 10.0, 10.0};
  double poc_tolerance = 0.2; // epsilon; >= 1 disables the constraint
  InputBounds bounds;
  std::array<double, 3> sigma0 = {0.1, 0.1, 0.1}; // detection uncertainty
  std::array<double, 3> growth = {0.0, 0.0, 0.0}; // added per prediction step
  PocBackend backend = PocBackend::analytic;
  std::int64_t mcs_samples = 1000;
  std::uint64_t seed = 0; // root seed for the mcs backend
  int max_outer = 20;     // constraint (multiplier) rounds
  int max_inner = 80;     // projected-gradient steps per round
  void validate() const;  // throws std::invalid_argument
};

struct PlanResult {
  std::vector<ControlInput> inputs; // one per horizon step
  std::vector<EgoState> states;     // horizon + 1 entries, starts at z_k
  std::vector<double> poc;          // per predicted step, certified values
  SolveStatus status = SolveStatus::infeasible;
  double cost = 0.0;
};

// Scripted constant-input object motion.
struct ObjectMotion {
  Configuration initial;
  double v = 0.0;
  double omega = 0.0;
  Configuration pose_at(int steps, double t_s) const;
};

// One receding-horizon step: minimize the summed quadratic path-following
// error over the horizon subject to input boxes and, per predicted step, a
// cap on the collision probability against the supplied object beliefs
// (global frame, one per step ahead). Augmented-Lagrangian outer loop over a
// projected spectral-gradient inner loop; warm-started from `warm` when its
// size matches the horizon. A non-infeasible result always satisfies the
// re-checked per-step cap; with the mcs backend the check uses the recorded
// sampled values and `sampler` must be non-null. Deterministic for identical
// inputs (including sampler state).
PlanResult solve_smpc(const EgoState& z_k, double lambda_k,
                      const ReferencePath& path,
                      std::span<const GaussianBelief> object_beliefs,
                      const PocEstimator& estimator, const SmpcConfig& cfg,
                      std::span<const ControlInput> warm = {},
                      SeededSampler* sampler = nullptr);

// One logged planning step of the receding-horizon loop.
struct StepLog {
  double t = 0.0;
  EgoState state;     // ego state when the step was planned
  ControlInput input; // applied first input
  double lambda = 0.0;
  double poc = 0.0; // certified value for the first predicted step
  double cost = 0.0;
  SolveStatus status = SolveStatus::infeasible;
};

// Closed loop: localize, build per-step object beliefs (mean follows the
// scripted motion; std-dev grows linearly with the prediction depth), solve,
// apply the first input, advance. Infeasible solves apply the best input
// found and are flagged in the log; the run continues unless
// `stop_on_infeasible` is set, in which case the infeasible step is logged
// and the run ends there.
std::vector<StepLog> receding_horizon_run(const EgoState& initial,
                                          const ReferencePath& path,
                                          const ObjectMotion& object,
                                          const PocEstimator& estimator,
                                          const SmpcConfig& cfg, int steps,
                                          bool stop_on_infeasible = false);

} // namespace colprob
