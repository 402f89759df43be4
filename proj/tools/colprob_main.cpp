// Command-line front end: collision-probability estimation, the sampling
// oracle, scripted scenario reports, runtime and accuracy studies, and
// closed-loop planner simulations. JSON for single values, CSV for series;
// a run manifest is written beside every file output.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "colprob/scenarios.hpp"

using namespace colprob;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "1.0.0";

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest text that parses back to the same double; matches the JSON files.
std::string num(double v) { return json(v).dump(); }

std::vector<double> parse_doubles(const std::string& text, std::size_t n,
                                  const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidInput(flag + ": '" + item + "' is not a number");
    }
  }
  if (n != 0 && out.size() != n) {
    throw InvalidInput(flag + ": expected " + std::to_string(n) +
                       " comma-separated values");
  }
  return out;
}

std::vector<std::int64_t> parse_ints(const std::string& text,
                                     const std::string& flag) {
  std::vector<std::int64_t> out;
  for (double v : parse_doubles(text, 0, flag)) {
    if (v != std::floor(v)) {
      throw InvalidInput(flag + ": expected integers");
    }
    out.push_back(static_cast<std::int64_t>(v));
  }
  if (out.empty()) throw InvalidInput(flag + ": expected at least one value");
  return out;
}

RectangleFootprint parse_dims(const std::string& text,
                              const std::string& flag) {
  const std::size_t sep = text.find_first_of("xX");
  if (sep == std::string::npos) {
    throw InvalidInput(flag + ": expected LENGTHxWIDTH, e.g. 4.5x2.0");
  }
  const auto l = parse_doubles(text.substr(0, sep), 1, flag);
  const auto w = parse_doubles(text.substr(sep + 1), 1, flag);
  if (l[0] <= 0.0 || w[0] <= 0.0) {
    throw InvalidInput(flag + ": dimensions must be positive");
  }
  return RectangleFootprint(l[0], w[0]);
}

// Rejects non-positive spreads with the offending field named.
void check_sigma(const std::vector<double>& sigma) {
  const char* fields[] = {"sx", "sy", "stheta"};
  for (int i = 0; i < 3; ++i) {
    if (!(sigma[i] > 0.0)) {
      throw InvalidInput(std::string("--sigma: field ") + fields[i] +
                         " must be positive");
    }
  }
}

GaussianBelief parse_belief(const std::string& mu_text,
                            const std::string& sigma_text) {
  const auto mu = parse_doubles(mu_text, 3, "--mu");
  const auto sigma = parse_doubles(sigma_text, 3, "--sigma");
  check_sigma(sigma);
  return GaussianBelief({mu[0], mu[1], mu[2]}, {sigma[0], sigma[1], sigma[2]});
}

std::pair<int, int> parse_circles(const std::string& text) {
  const auto v = parse_doubles(text, 2, "--circles");
  if (v[0] < 1 || v[1] < 1 || v[0] != std::floor(v[0]) ||
      v[1] != std::floor(v[1])) {
    throw InvalidInput("--circles: expected two counts >= 1, e.g. 3,3");
  }
  return {static_cast<int>(v[0]), static_cast<int>(v[1])};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// Provenance record written beside every file output of a run.
struct ManifestWriter {
  std::string command;
  json config = json::object();
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point started =
      std::chrono::steady_clock::now();

  void emit(const std::filesystem::path& dir) {
    const double wall_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - started)
                               .count();
    const json j{{"schema_version", 1},
                 {"kind", "run_manifest"},
                 {"tool", {{"name", "colprob"}, {"version", kToolVersion}}},
                 {"command", command},
                 {"config", config},
                 {"outputs", outputs},
                 {"wall_clock_ms", wall_ms}};
    write_file(dir / "manifest.json", j.dump(2) + "\n");
  }
};

std::filesystem::path prepare_out_dir(const std::string& out) {
  if (out.empty()) throw InvalidInput("--out: an output directory is needed");
  const std::filesystem::path dir(out);
  std::filesystem::create_directories(dir);
  return dir;
}

void maybe_write_result(const std::string& out, const std::string& command,
                        const json& config, const std::string& result_text) {
  if (out.empty()) return;
  ManifestWriter manifest;
  manifest.command = command;
  manifest.config = config;
  const auto dir = prepare_out_dir(out);
  write_file(dir / "result.json", result_text);
  manifest.outputs = {"result.json"};
  manifest.emit(dir);
}

// ---------------------------------------------------------------------------
// Subcommand state and runners.

struct PocArgs {
  std::string ego = "4.5x2.0";
  std::string obj = "4.5x2.0";
  std::string circles = "3,3";
  int grid = 20;
  std::string mu;
  std::string sigma;
  int nbeta = 3;
  std::string out;
};

int run_poc(const PocArgs& a) {
  const RectangleFootprint ego = parse_dims(a.ego, "--ego");
  const RectangleFootprint obj = parse_dims(a.obj, "--obj");
  const auto [n_e, n_o] = parse_circles(a.circles);
  const GaussianBelief belief = parse_belief(a.mu, a.sigma);
  if (a.grid < 2) throw InvalidInput("--grid: needs at least 2 samples");
  if (a.nbeta < 1) throw InvalidInput("--nbeta: must be >= 1");

  const auto t0 = std::chrono::steady_clock::now();
  const PocEstimator est(ego, obj, n_e, n_o, a.grid);
  const auto t1 = std::chrono::steady_clock::now();
  const double poc = est.estimate(belief, HeadingTruncation{a.nbeta});
  const auto t2 = std::chrono::steady_clock::now();

  const json result{
      {"schema_version", 1},
      {"kind", "poc"},
      {"poc", poc},
      {"init_ms",
       std::chrono::duration<double, std::milli>(t1 - t0).count()},
      {"eval_ms",
       std::chrono::duration<double, std::milli>(t2 - t1).count()},
      {"circles", {n_e, n_o}},
      {"grid", a.grid},
      {"nbeta", a.nbeta}};
  const std::string text = result.dump(2) + "\n";
  std::cout << text;

  const json config{{"ego", a.ego},     {"obj", a.obj},
                    {"circles", a.circles}, {"grid", a.grid},
                    {"mu", a.mu},       {"sigma", a.sigma},
                    {"nbeta", a.nbeta}};
  maybe_write_result(a.out, "poc", config, text);
  return 0;
}

struct OracleArgs {
  PocArgs base;
  std::string shape = "rect";
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
};

int run_oracle(const OracleArgs& a) {
  const RectangleFootprint ego = parse_dims(a.base.ego, "--ego");
  const RectangleFootprint obj = parse_dims(a.base.obj, "--obj");
  const GaussianBelief belief = parse_belief(a.base.mu, a.base.sigma);
  if (a.samples < 1) throw InvalidInput("--samples: must be >= 1");

  SeededSampler sampler(a.seed);
  McsResult r;
  if (a.shape == "rect") {
    r = mcs_poc(ego, obj, belief, a.samples, sampler);
  } else if (a.shape == "circles") {
    const auto [n_e, n_o] = parse_circles(a.base.circles);
    r = mcs_poc_circles(cover_rectangle(ego, n_e), cover_rectangle(obj, n_o),
                        belief, a.samples, sampler);
  } else {
    throw InvalidInput("--shape: must be 'rect' or 'circles'");
  }

  const json result{{"schema_version", 1}, {"kind", "oracle"},
                    {"shape", a.shape},    {"poc", r.estimate},
                    {"std_error", r.std_error}, {"samples", r.n_samples},
                    {"seed", a.seed}};
  const std::string text = result.dump(2) + "\n";
  std::cout << text;

  const json config{{"ego", a.base.ego},   {"obj", a.base.obj},
                    {"shape", a.shape},    {"circles", a.base.circles},
                    {"mu", a.base.mu},     {"sigma", a.base.sigma},
                    {"samples", a.samples}, {"seed", a.seed}};
  maybe_write_result(a.base.out, "oracle", config, text);
  return 0;
}

struct ScenarioArgs {
  std::string spec;
  std::string circles = "1,2,3";
  int grid = 20;
  std::int64_t oracle_samples = 100000;
  int steps = -1; // <0 keeps the value from the spec file
  std::uint64_t seed = 1;
  std::string out;
};

int run_scenario(const ScenarioArgs& a) {
  ScenarioSpec spec;
  try {
    spec = scenario_from_json(read_file(a.spec));
  } catch (const json::exception& e) {
    throw InvalidInput(a.spec + ": " + e.what());
  }
  if (a.steps >= 0) spec.steps = a.steps;

  std::vector<int> counts;
  for (std::int64_t c : parse_ints(a.circles, "--circles")) {
    if (c < 1) throw InvalidInput("--circles: counts must be >= 1");
    counts.push_back(static_cast<int>(c));
  }
  if (a.grid < 2) throw InvalidInput("--grid: needs at least 2 samples");
  if (a.oracle_samples < 100) {
    throw InvalidInput("--oracle-samples: must be >= 100");
  }

  ManifestWriter manifest;
  manifest.command = "scenario";
  manifest.config = json::parse(scenario_to_json(spec));
  manifest.config["circles"] = counts;
  manifest.config["grid"] = a.grid;
  manifest.config["oracle_samples"] = a.oracle_samples;
  manifest.config["seed"] = a.seed;

  const ErrorReport report =
      run_poc_scenario(spec, counts, a.grid, a.oracle_samples, a.seed);

  std::ostringstream csv;
  csv << "t,distance";
  for (int c : report.circle_counts) csv << ",analytic_" << c;
  csv << ",oracle,oracle_std_error\n";
  for (const ScenarioStep& s : report.steps) {
    csv << num(s.t) << ',' << num(s.distance);
    for (double v : s.analytic) csv << ',' << num(v);
    csv << ',' << num(s.oracle) << ',' << num(s.oracle_std_error) << '\n';
  }

  const auto dir = prepare_out_dir(a.out);
  write_file(dir / "report.json", error_report_to_json(report));
  write_file(dir / "series.csv", csv.str());
  manifest.outputs = {"report.json", "series.csv"};
  manifest.emit(dir);
  return 0;
}

struct BenchArgs {
  std::string circles = "1,2,3,4,5,6";
  std::string mcs = "100,1000,10000";
  int evals = 1000;
  int grid = 20;
  std::uint64_t seed = 1;
  std::string out;
};

int run_bench(const BenchArgs& a) {
  std::vector<int> counts;
  for (std::int64_t c : parse_ints(a.circles, "--circles")) {
    if (c < 1) throw InvalidInput("--circles: counts must be >= 1");
    counts.push_back(static_cast<int>(c));
  }
  const std::vector<std::int64_t> mcs = parse_ints(a.mcs, "--mcs");
  if (a.evals < 30) throw InvalidInput("--evals: must be >= 30");
  if (a.grid < 2) throw InvalidInput("--grid: needs at least 2 samples");

  ManifestWriter manifest;
  manifest.command = "bench";
  manifest.config = json{{"circles", counts},
                         {"mcs", mcs},
                         {"evals", a.evals},
                         {"grid", a.grid},
                         {"seed", a.seed}};

  const BenchmarkReport report =
      runtime_benchmark(counts, mcs, a.evals, a.grid, a.seed);

  std::ostringstream analytic;
  analytic << "circles,init_ms,eval_us\n";
  for (const AnalyticTiming& row : report.analytic) {
    analytic << row.circles << ',' << num(row.init_ms) << ','
             << num(row.eval_us) << '\n';
  }
  std::ostringstream sampled;
  sampled << "samples,eval_us\n";
  for (const McsTiming& row : report.mcs) {
    sampled << row.samples << ',' << num(row.eval_us) << '\n';
  }

  const auto dir = prepare_out_dir(a.out);
  write_file(dir / "report.json", benchmark_to_json(report));
  write_file(dir / "analytic.csv", analytic.str());
  write_file(dir / "mcs.csv", sampled.str());
  manifest.outputs = {"report.json", "analytic.csv", "mcs.csv"};
  manifest.emit(dir);
  return 0;
}

struct AccuracyArgs {
  std::string sigma = "0.5,1.5,2.5";
  std::string circles = "1,2,3,4";
  std::string samples = "1000,10000,100000";
  int repeats = 100;
  int grid = 20;
  std::uint64_t seed = 1;
  std::string out;
};

int run_accuracy(const AccuracyArgs& a) {
  const std::vector<double> levels = parse_doubles(a.sigma, 0, "--sigma");
  for (double s : levels) {
    if (!(s > 0.0)) throw InvalidInput("--sigma: levels must be positive");
  }
  std::vector<int> counts;
  for (std::int64_t c : parse_ints(a.circles, "--circles")) {
    if (c < 1) throw InvalidInput("--circles: counts must be >= 1");
    counts.push_back(static_cast<int>(c));
  }
  const std::vector<std::int64_t> samples = parse_ints(a.samples, "--samples");
  if (a.repeats < 2) throw InvalidInput("--repeats: must be >= 2");
  if (a.grid < 2) throw InvalidInput("--grid: needs at least 2 samples");

  ManifestWriter manifest;
  manifest.command = "accuracy";
  manifest.config = json{{"sigma", levels},     {"circles", counts},
                         {"samples", samples},  {"repeats", a.repeats},
                         {"grid", a.grid},      {"seed", a.seed}};

  ActorSpec ego, object;
  object.initial = {2.5, 2.5, 0.0};
  const AccuracyReport report = accuracy_study(
      ego, object, levels, counts, samples, a.repeats, a.grid, a.seed);

  std::ostringstream analytic;
  analytic << "sigma,circles,poc\n";
  for (const AccuracyAnalytic& row : report.analytic) {
    analytic << num(row.sigma) << ',' << row.circles << ',' << num(row.poc)
             << '\n';
  }
  std::ostringstream sampled;
  sampled << "sigma,samples,mean,two_sigma,repeats\n";
  for (const AccuracyMcs& row : report.mcs) {
    sampled << num(row.sigma) << ',' << row.samples << ',' << num(row.mean)
            << ',' << num(row.two_sigma) << ',' << row.repeats << '\n';
  }

  const auto dir = prepare_out_dir(a.out);
  write_file(dir / "report.json", accuracy_to_json(report));
  write_file(dir / "analytic.csv", analytic.str());
  write_file(dir / "mcs.csv", sampled.str());
  manifest.outputs = {"report.json", "analytic.csv", "mcs.csv"};
  manifest.emit(dir);
  return 0;
}

struct SmpcArgs {
  std::string spec;
  std::string backend; // empty keeps the value from the spec file
  int steps = -1;      // <0 keeps the value from the spec file
  std::int64_t seed = -1; // <0 keeps the value from the spec file
  std::string out;
};

int run_smpc(const SmpcArgs& a) {
  SmpcScenario sc;
  try {
    sc = smpc_scenario_from_json(read_file(a.spec));
  } catch (const json::exception& e) {
    throw InvalidInput(a.spec + ": " + e.what());
  }
  if (!a.backend.empty()) {
    if (a.backend == "analytic") {
      sc.control.backend = PocBackend::analytic;
    } else if (a.backend == "mcs") {
      sc.control.backend = PocBackend::mcs;
    } else {
      throw InvalidInput("--backend: must be 'analytic' or 'mcs'");
    }
  }
  if (a.steps >= 0) sc.steps = a.steps;
  if (a.seed >= 0) sc.control.seed = static_cast<std::uint64_t>(a.seed);

  ManifestWriter manifest;
  manifest.command = "smpc";
  manifest.config = json::parse(smpc_scenario_to_json(sc));

  const SmpcRunResult result = run_smpc_scenario(sc);

  std::ostringstream csv;
  csv << "t,x_e,y_e,theta_e,v_e,omega_e,lambda,poc,cost,status\n";
  for (const StepLog& e : result.log) {
    csv << num(e.t) << ',' << num(e.state.x) << ',' << num(e.state.y) << ','
        << num(e.state.theta) << ',' << num(e.input.v) << ','
        << num(e.input.omega) << ',' << num(e.lambda) << ',' << num(e.poc)
        << ',' << num(e.cost) << ',' << solve_status_name(e.status) << '\n';
  }

  const auto dir = prepare_out_dir(a.out);
  write_file(dir / "report.json", smpc_result_to_json(sc, result));
  write_file(dir / "series.csv", csv.str());
  manifest.outputs = {"report.json", "series.csv"};
  manifest.emit(dir);
  return result.lost_feasibility ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collision-probability estimation and planning toolkit"};
  app.require_subcommand(1);

  PocArgs poc;
  CLI::App* poc_cmd =
      app.add_subcommand("poc", "Analytic collision-probability estimate");
  poc_cmd->add_option("--ego", poc.ego, "Ego footprint as LENGTHxWIDTH");
  poc_cmd->add_option("--obj", poc.obj, "Object footprint as LENGTHxWIDTH");
  poc_cmd->add_option("--circles", poc.circles, "Cover sizes as EGO,OBJECT");
  poc_cmd->add_option("--grid", poc.grid, "Quadrature samples per axis");
  poc_cmd->add_option("--mu", poc.mu, "Belief mean as x,y,theta")->required();
  poc_cmd->add_option("--sigma", poc.sigma, "Belief std-dev as sx,sy,stheta")
      ->required();
  poc_cmd->add_option("--nbeta", poc.nbeta, "Wrapped-Gaussian shifts");
  poc_cmd->add_option("--out", poc.out, "Also write result.json + manifest")
      ->envname("COLPROB_OUT");

  OracleArgs oracle;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "Monte-Carlo rectangle-overlap estimate");
  oracle_cmd->add_option("--ego", oracle.base.ego,
                         "Ego footprint as LENGTHxWIDTH");
  oracle_cmd->add_option("--obj", oracle.base.obj,
                         "Object footprint as LENGTHxWIDTH");
  oracle_cmd->add_option("--shape", oracle.shape,
                         "Collision shape: rect (exact footprints) or "
                         "circles (the covering the estimator integrates)");
  oracle_cmd->add_option("--circles", oracle.base.circles,
                         "Cover sizes as EGO,OBJECT (with --shape circles)");
  oracle_cmd->add_option("--mu", oracle.base.mu, "Belief mean as x,y,theta")
      ->required();
  oracle_cmd
      ->add_option("--sigma", oracle.base.sigma,
                   "Belief std-dev as sx,sy,stheta")
      ->required();
  oracle_cmd->add_option("--samples", oracle.samples, "Monte-Carlo samples");
  oracle_cmd->add_option("--seed", oracle.seed, "Sampler seed")
      ->envname("COLPROB_SEED");
  oracle_cmd
      ->add_option("--out", oracle.base.out,
                   "Also write result.json + manifest")
      ->envname("COLPROB_OUT");

  ScenarioArgs scenario;
  CLI::App* scenario_cmd = app.add_subcommand(
      "scenario", "Step-by-step encounter report with a sampling oracle");
  scenario_cmd->add_option("--spec", scenario.spec, "Encounter JSON file")
      ->required();
  scenario_cmd->add_option("--circles", scenario.circles,
                           "Cover sizes to evaluate, e.g. 1,2,3");
  scenario_cmd->add_option("--grid", scenario.grid,
                           "Quadrature samples per axis");
  scenario_cmd->add_option("--oracle-samples", scenario.oracle_samples,
                           "Monte-Carlo samples per step");
  scenario_cmd->add_option("--steps", scenario.steps,
                           "Override the spec's step count (0 = automatic)");
  scenario_cmd->add_option("--seed", scenario.seed, "Oracle root seed")
      ->envname("COLPROB_SEED");
  scenario_cmd->add_option("--out", scenario.out, "Output directory")
      ->required()
      ->envname("COLPROB_OUT");

  BenchArgs bench;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Runtime benchmark, analytic vs sampling");
  bench_cmd->add_option("--circles", bench.circles, "Cover sizes to time");
  bench_cmd->add_option("--mcs", bench.mcs, "Monte-Carlo sample counts");
  bench_cmd->add_option("--evals", bench.evals, "Evaluations per subject");
  bench_cmd->add_option("--grid", bench.grid, "Quadrature samples per axis");
  bench_cmd->add_option("--seed", bench.seed, "Belief-draw seed")
      ->envname("COLPROB_SEED");
  bench_cmd->add_option("--out", bench.out, "Output directory")
      ->required()
      ->envname("COLPROB_OUT");

  AccuracyArgs accuracy;
  CLI::App* accuracy_cmd = app.add_subcommand(
      "accuracy", "Fixed-pose accuracy and dispersion study");
  accuracy_cmd->add_option("--sigma", accuracy.sigma, "Uncertainty levels");
  accuracy_cmd->add_option("--circles", accuracy.circles, "Cover sizes");
  accuracy_cmd->add_option("--samples", accuracy.samples,
                           "Monte-Carlo sample counts");
  accuracy_cmd->add_option("--repeats", accuracy.repeats,
                           "Repeats per sample count");
  accuracy_cmd->add_option("--grid", accuracy.grid,
                           "Quadrature samples per axis");
  accuracy_cmd->add_option("--seed", accuracy.seed, "Oracle root seed")
      ->envname("COLPROB_SEED");
  accuracy_cmd->add_option("--out", accuracy.out, "Output directory")
      ->required()
      ->envname("COLPROB_OUT");

  SmpcArgs smpc;
  CLI::App* smpc_cmd = app.add_subcommand(
      "smpc", "Closed-loop probabilistically constrained planner run");
  smpc_cmd->add_option("--spec", smpc.spec, "Planner scenario JSON file")
      ->required();
  smpc_cmd->add_option("--backend", smpc.backend,
                       "Override constraint backend: analytic or mcs");
  smpc_cmd->add_option("--steps", smpc.steps, "Override the step count");
  smpc_cmd->add_option("--seed", smpc.seed, "Override the sampling seed")
      ->envname("COLPROB_SEED");
  smpc_cmd->add_option("--out", smpc.out, "Output directory")
      ->required()
      ->envname("COLPROB_OUT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (poc_cmd->parsed()) return run_poc(poc);
    if (oracle_cmd->parsed()) return run_oracle(oracle);
    if (scenario_cmd->parsed()) return run_scenario(scenario);
    if (bench_cmd->parsed()) return run_bench(bench);
    if (accuracy_cmd->parsed()) return run_accuracy(accuracy);
    if (smpc_cmd->parsed()) return run_smpc(smpc);
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
