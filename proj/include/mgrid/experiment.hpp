#pragma once

#include "mgrid/analysis.hpp"
#include "mgrid/scenario.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mgrid {

// Unit tables of a config. Field names carry their units; steps are one hour,
// so per-kWh prices are per kW and step.

struct GeneratorSpec {
    int T_up_steps = 1;
    int T_down_steps = 1;
    double u_min_kW = 0.0;
    double u_max_kW = 10.0;
    double ramp_kW_per_step = 10.0;
    double startup_cost = 1.0;
    double shutdown_cost = 1.0;
    double commitment_cost_per_step = 0.0;
    double cost_quadratic_per_kW2 = 0.0;
    double cost_linear_per_kWh = 0.1;
    int cost_segments = 3;
    std::optional<int> delta_init;       // drawn from the problem seed when absent
    std::optional<double> u_init_kW;     // drawn alongside delta_init when absent
};

struct StorageSpec {
    double charge_efficiency = 0.95;
    double discharge_efficiency = 0.95;
    double x_min_kWh = 1.0;
    double x_max_kWh = 10.0;
    double loss_kWh_per_step = 0.0;
    double C_kW = 5.0;
    double exchange_cost_per_kWh = 0.0;
    std::optional<double> x0_kWh;  // drawn uniformly in [x_min, x_max] when absent
};

struct ControllableLoadSpec {
    DemandModel demand;  // forecast drawn once from the problem seed
    double beta_min = 0.0;
    double beta_max = 0.5;
    double curtailment_cost_per_kWh = 1.0;
};

struct CriticalLoadSpec {
    DemandModel demand;  // resampled per scenario
};

/// Prices are one value (flat) or 24 values indexed by hour of day.
struct GridSpec {
    double P_max_kW = 100.0;
    std::vector<double> purchase_price_per_kWh{0.2};
    std::vector<double> sell_price_per_kWh{0.1};
};

using UnitParams = std::variant<GeneratorSpec, StorageSpec, ControllableLoadSpec, CriticalLoadSpec,
                                SolarModel, WindModel, GridSpec>;

/// "generator", "storage", "controllable_load", "critical_load", "solar", "wind", "grid".
std::string unit_type(const UnitParams& p);

struct UnitSpec {
    std::string name;  // expanded to name_1..name_count when count > 1
    int count = 1;
    UnitParams params;
};

struct ExperimentConfig {
    std::string name = "experiment";
    int K = 6;
    double start_hour = 0.0;
    int R = 1;
    PiMode pi_mode = PiMode::uniform;
    /// Recourse penalties; absent means 10 x the largest purchase price.
    std::optional<double> q_plus_per_kWh;
    std::optional<double> q_minus_per_kWh;
    std::vector<UnitSpec> units;
    GraphKind graph = GraphKind::random;
    double graph_edge_probability = 0.3;
    StepSizeSchedule schedule = StepSizeSchedule::piecewise(3.0, 0.5, 50);
    int T_f = 100;
    int finalize_every = 10;
    InitMode init = InitMode::uniform;
    std::uint64_t seed_problem = 1;
    std::uint64_t seed_scenarios = 1;
    std::uint64_t seed_graph = 1;
    bool parallel = true;
    std::string output_dir = "runs/experiment";
};

/// Parsing and validation failures; each entry starts with a field path such as
/// "units[2].x_min_kWh".
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

/// Reads a config object. Unknown fields and type mismatches are errors. Runs
/// validate_config and throws ConfigError if anything is wrong.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

/// Empty when the config is valid.
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

struct AgentInfo {
    std::string name;
    std::string type;
    int unit = 0;  // index into cfg.units
};

/// A config turned into data. `resolved` has every drawn initial condition
/// filled in.
struct BuiltProblem {
    ExperimentConfig resolved;
    ScenarioModels models;
    std::vector<AgentInfo> agents;
    StochasticProblem problem;
    CommGraph graph;
    RunOptions run;
    /// Hourly purchase and sell prices per step.
    Vector purchase_price;
    Vector sell_price;
};

BuiltProblem build_problem(const ExperimentConfig& cfg);

/// Files written by run_experiment, in order.
const std::vector<std::string>& artifact_files();

struct ExperimentResult {
    BuiltProblem built;
    RunResult run;
    ViolationCertificate certificate;
};

/// Runs the scheme and writes every artifact into out_dir (created if needed).
ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

struct MonteCarloRow {
    int iter = 0;
    double cost_mean = 0.0;
    double cost_std = 0.0;
    double violation_pos_mean = 0.0;
    double violation_pos_std = 0.0;
    double violation_neg_mean = 0.0;
    double violation_neg_std = 0.0;
    double mean_residual_mean = 0.0;
    double mean_residual_std = 0.0;
};

struct MonteCarloResult {
    std::vector<std::uint64_t> scenario_seeds;
    std::vector<RunTrace> traces;
    std::vector<ViolationCertificate> certificates;
    std::vector<MonteCarloRow> aggregate;
};

/// Trial t uses scenario seed cfg.seed_scenarios + t and writes its artifacts to
/// out_dir/trial_NNN; the aggregate (population std) goes to out_dir/montecarlo.csv.
/// A failing trial aborts the batch with its seed in the message.
MonteCarloResult run_montecarlo(const ExperimentConfig& cfg, int trials, const std::string& out_dir);

/// Per-iteration mean and population std of the traces' logged rows.
std::vector<MonteCarloRow> aggregate_traces(const std::vector<RunTrace>& traces);

/// Saved run: the resolved config plus final allocations and solutions.
struct RunState {
    ExperimentConfig config;
    std::vector<Vector> y;
    std::vector<Vector> x;
    std::vector<Vector> eta;
};

RunState load_run_state(const std::string& run_dir);

/// Recomputes the certificate of a saved run and writes certificate.json there.
ViolationCertificate recertify(const std::string& run_dir);

/// Figure-data CSVs of one first-stage solution.
void write_reports(const BuiltProblem& b, const std::vector<Vector>& x, const std::string& out_dir);

/// Centralized problem (scenario-expected balance) in LP text format.
void write_centralized_lp(std::ostream& os, const BuiltProblem& b);

}  // namespace mgrid
