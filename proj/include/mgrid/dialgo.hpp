#pragma once

#include "mgrid/stochastic.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mgrid {

/// Undirected communication graph over agents 0..n-1.
struct CommGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // i < j, sorted
    std::vector<std::vector<int>> neighbors;

    int degree(int i) const { return static_cast<int>(neighbors[i].size()); }
    bool connected() const;
};

enum class GraphKind { path, cycle, random };

GraphKind parse_graph_kind(const std::string& s);
std::string to_string(GraphKind k);

CommGraph make_graph(int n, const std::vector<std::pair<int, int>>& edges);

/// path, cycle, or Erdos-Renyi with edge probability p redrawn until connected
/// (at most 1000 draws, then a cycle).
CommGraph generate_graph(int n, GraphKind kind, std::uint64_t seed, double p = 0.2);

struct StepSizeSchedule {
    enum class Kind { diminishing, piecewise };
    Kind kind = Kind::diminishing;
    double a = 1.0;  // diminishing: a / (t + b)
    double b = 1.0;
    double alpha0 = 3.0;  // piecewise: alpha0 * factor^floor(t / period)
    double factor = 0.5;
    int period = 100;

    static StepSizeSchedule diminishing(double a, double b);
    static StepSizeSchedule piecewise(double alpha0, double factor, int period);

    double operator()(int t) const;
};

enum class InitMode { uniform, random };

/// Allocations with sum_i y_i = h: h / N each, or h / N plus zero-sum noise.
std::vector<Vector> init_allocations(const Vector& h, int N, InitMode mode = InitMode::uniform,
                                     std::uint64_t seed = 0);

/// Per-agent state of the iterative scheme.
struct AgentState {
    Vector y;
    Vector mu;
    /// Relaxed local solution and recourse of the latest multiplier step.
    Vector z;
    Vector eta_relaxed;
    double relaxed_value = 0.0;
    Basis basis;
    /// Latest mixed-integer solution.
    Vector x;
    Vector eta;
    double mixed_value = 0.0;
    SolveStatus status = SolveStatus::optimal;
};

struct LocalOptions {
    SimplexOptions lp;
    BranchAndBoundOptions milp;
    bool warm_start = true;
    /// Base recourse cap; each agent uses base + max|y_i|.
    double eta_cap = 0.0;
};

/// The local program over (x, eta): G x <= g, H x - eta <= y, 0 <= eta <= cap.
/// The last dim() rows are the allocation rows.
LinearProgram local_program(const LiftedBlock& a, const Vector& d, const Vector& y, double cap,
                            bool relaxed);

double agent_cap(const LocalOptions& opts, const Vector& y);

/// Solves the relaxed local program and stores the allocation-row multipliers.
/// Throws std::runtime_error naming the agent on a solver failure.
void local_multiplier_step(const LiftedBlock& a, const Vector& d, AgentState& s,
                           const LocalOptions& opts, int agent_id = 0);

/// y_i += alpha * sum_{j in N_i} (mu_i - mu_j).
void exchange_and_update(std::vector<AgentState>& states, const CommGraph& graph, double alpha);

/// Solves the mixed-integer local program at the current allocation.
void finalize_mixed_integer(const LiftedBlock& a, const Vector& d, AgentState& s,
                            const LocalOptions& opts, int agent_id = 0);

/// One synchronous round of multiplier steps, serial and OpenMP versions.
/// Both produce identical states.
void multiplier_round_serial(const StochasticProblem& p, std::vector<AgentState>& states,
                             const LocalOptions& opts);
void multiplier_round_parallel(const StochasticProblem& p, std::vector<AgentState>& states,
                               const LocalOptions& opts);
void finalize_round_serial(const StochasticProblem& p, std::vector<AgentState>& states,
                           const LocalOptions& opts);
void finalize_round_parallel(const StochasticProblem& p, std::vector<AgentState>& states,
                             const LocalOptions& opts);

struct RunOptions {
    int T_f = 100;
    int finalize_every = 10;
    StepSizeSchedule schedule;
    InitMode init = InitMode::uniform;
    std::uint64_t init_seed = 0;
    bool parallel = true;
    LocalOptions local;
    /// Keep y_i^t for every t (memory grows with T_f * N * 2RK).
    bool keep_allocations = false;
};

/// One row per logged iteration.
struct TraceRow {
    int iter = 0;
    double incumbent_cost = 0.0;
    /// Max positive and min negative power-balance residual over (k, r).
    double max_violation_pos = 0.0;
    double max_violation_neg = 0.0;
    double alloc_residual = 0.0;
    /// Mean and population std of the (k, r) residuals.
    double mean_residual = 0.0;
    double std_residual = 0.0;
    /// Largest aggregate surplus and shortage recourse.
    double eta_plus_max = 0.0;
    double eta_minus_max = 0.0;
    double expected_recourse = 0.0;
    /// max_j [sum_i (H_i x_i - eta_i) - h]_j; <= 0 when the lifted coupling holds.
    double lifted_violation = 0.0;
    /// Allocation change since the previous logged row (inf on the first).
    double allocation_step = 0.0;
};

struct RunTrace {
    std::vector<TraceRow> rows;
    /// ||sum_i y_i^t - h||_inf for t = 0..T_f.
    std::vector<double> alloc_residual;
    /// sum_i (c_i'z_i^t + d'eta_i^t) for t = 0..T_f-1.
    std::vector<double> relaxation_objective;
    std::vector<std::vector<Vector>> allocations;
};

struct RunResult {
    RunTrace trace;
    std::vector<AgentState> agents;
    double eta_cap = 0.0;
};

/// Runs T_f rounds and finalizes at t = 0, every finalize_every rounds and at T_f.
RunResult run(const StochasticProblem& p, const CommGraph& graph, const RunOptions& opts);

/// Statistics of one mixed-integer solution, as logged in a trace row.
TraceRow evaluate_solution(const StochasticProblem& p, const std::vector<Vector>& x,
                           const std::vector<Vector>& eta);

}  // namespace mgrid
