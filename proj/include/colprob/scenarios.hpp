#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "colprob/geometry.hpp"
#include "colprob/mcs.hpp"
#include "colprob/poc_gaussian.hpp"
#include "colprob/smpc.hpp"

namespace colprob {

// Distance-dependent uncertainty: far-away measurements are noisier, with
// standard deviations saturating at sigma_max.
struct LogisticUncertainty {
  double gamma = 1.0; // steepness, 1/meters
  double d0 = 1.0;    // midpoint distance, meters
  std::array<double, 3> sigma_max = {1.0, 1.0, 1.0};
};

// sigma(d) = sigma_max / (1 + exp(-gamma * (d - d0))), component-wise.
std::array<double, 3> logistic_sigma(double d,
                                     const LogisticUncertainty& model);

// Detection uncertainty growing linearly with the prediction depth:
// sigma0 + steps_ahead * growth, component-wise.
std::array<double, 3> horizon_sigma(const std::array<double, 3>& sigma0,
                                    const std::array<double, 3>& growth,
                                    int steps_ahead);

// One vehicle in a scripted scenario: start pose, constant inputs, shape.
struct ActorSpec {
  Configuration initial;
  double v = 0.0;
  double omega = 0.0;
  RectangleFootprint footprint{4.5, 2.0};
};

// Pose after `step` sample intervals of constant-input unicycle motion.
Configuration actor_pose(const ActorSpec& actor, int step, double sample_time);

// Object belief seen from an ego pose: mean is the relative configuration in
// the ego frame; the diagonal position spread must be isotropic (sigma x ==
// sigma y), since a frame rotation would otherwise couple the axes.
GaussianBelief relative_belief(const Configuration& ego,
                               const Configuration& object,
                               const std::array<double, 3>& sigma);

// A two-vehicle constant-input encounter evaluated step by step.
struct ScenarioSpec {
  std::string name;
  ActorSpec ego;
  ActorSpec object;
  LogisticUncertainty uncertainty;
  double sample_time = 0.2;
  // 0 requests the automatic duration: run until the actors separate beyond
  // any collision influence (capped); the report records the realized value.
  int steps = 0;
};

// Lossless JSON round trip for scenario files.
std::string scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const std::string& text);

// Per-step record of one scenario evaluation.
struct ScenarioStep {
  double t = 0.0;
  double distance = 0.0;        // center-to-center, drives the uncertainty
  std::vector<double> analytic; // one value per requested circle count
  double oracle = 0.0;          // rectangle sampling estimate
  double oracle_std_error = 0.0;
};

// Scenario evaluation summary; delta_e[i] is the mean over steps of
// (analytic_i - oracle), the experiment-level over-approximation error.
struct ErrorReport {
  std::string name;
  std::vector<int> circle_counts;
  std::vector<ScenarioStep> steps;
  std::vector<double> delta_e;
  double max_oracle_std_error = 0.0;
  int duration_steps = 0;
};

std::string error_report_to_json(const ErrorReport& report);

// Propagates both actors, builds the ego-frame object belief per step (mean
// from ground truth, spread from the logistic model of the center distance),
// and evaluates one analytic estimator per circle count plus the rectangle
// sampling oracle. Deterministic: step k uses substream k of `seed`.
ErrorReport run_poc_scenario(const ScenarioSpec& spec,
                             std::span<const int> circle_counts,
                             int grid_samples, std::int64_t oracle_samples,
                             std::uint64_t seed);

// Wall-clock figures for the analytic estimator and the sampling oracle.
struct AnalyticTiming {
  int circles = 0;
  double init_ms = 0.0; // one-time table construction
  double eval_us = 0.0; // per belief evaluation, post-init
};

struct McsTiming {
  std::int64_t samples = 0;
  double eval_us = 0.0;
};

struct BenchmarkReport {
  std::vector<AnalyticTiming> analytic;
  std::vector<McsTiming> mcs;
  int evaluations = 0;
  int grid_samples = 0;
};

std::string benchmark_to_json(const BenchmarkReport& report);

// Times `evaluations` estimator calls over pre-drawn randomized beliefs
// (uniform means and spreads) per circle count, and the oracle per sample
// count. Medians of batch means resist scheduler noise; single-threaded.
BenchmarkReport runtime_benchmark(std::span<const int> circle_counts,
                                  std::span<const std::int64_t> mcs_counts,
                                  int evaluations, int grid_samples,
                                  std::uint64_t seed);

// Fixed-configuration accuracy table cells.
struct AccuracyAnalytic {
  double sigma = 0.0; // isotropic uncertainty level
  int circles = 0;
  double poc = 0.0;
};

struct AccuracyMcs {
  double sigma = 0.0;
  std::int64_t samples = 0;
  double mean = 0.0;      // over repeated estimations
  double two_sigma = 0.0; // 2x std-dev of the repeated estimates
  int repeats = 0;
};

struct AccuracyReport {
  std::vector<AccuracyAnalytic> analytic;
  std::vector<AccuracyMcs> mcs;
};

std::string accuracy_to_json(const AccuracyReport& report);

// Deterministic analytic values per (level, circle count) and sampling
// dispersion per (level, sample count) at a fixed relative configuration.
AccuracyReport accuracy_study(const ActorSpec& ego, const ActorSpec& object,
                              std::span<const double> sigma_levels,
                              std::span<const int> circle_counts,
                              std::span<const std::int64_t> sample_counts,
                              int repeats, int grid_samples,
                              std::uint64_t seed);

// Closed-loop overtaking setup: straight reference path, scripted object.
struct SmpcScenario {
  std::string name;
  EgoState ego_initial{0.0, 10.0, 0.0};
  RectangleFootprint ego_footprint{4.5, 2.0};
  ActorSpec object;
  double path_x0 = 0.0;
  double path_y0 = 10.0;
  double path_heading = 0.0;
  double v_ref = 6.0;
  double lambda_span = 2000.0;
  SmpcConfig control;
  int ego_circles = 3;
  int object_circles = 3;
  int grid_samples = 20;
  int steps = 45;
  // End the run at the first infeasible step (how sampling-backed runs are
  // reported); otherwise the best available input is applied throughout.
  bool stop_on_infeasible = false;
};

std::string smpc_scenario_to_json(const SmpcScenario& scenario);
SmpcScenario smpc_scenario_from_json(const std::string& text);

struct SmpcRunResult {
  std::vector<StepLog> log;
  int infeasible_steps = 0;
  double min_distance = 0.0; // closest ego-object center distance reached
  bool lost_feasibility = false;
};

std::string smpc_result_to_json(const SmpcScenario& scenario,
                                const SmpcRunResult& result);

SmpcRunResult run_smpc_scenario(const SmpcScenario& scenario);

// The planner comparison set: the analytic backend at the three uncertainty
// levels (low, moderate, high), then `n_mcs_runs` sampling-backed runs at the
// moderate level with seeds 1..n, each ending at its first feasibility loss.
struct OvertakingOutcome {
  std::string label;
  PocBackend backend = PocBackend::analytic;
  std::uint64_t seed = 0;
  SmpcRunResult result;
};

std::vector<OvertakingOutcome> overtaking_comparison(const SmpcScenario& base,
                                                     int n_mcs_runs = 8);

} // namespace colprob
