#pragma once

#include "mgrid/model.hpp"

#include <vector>

namespace mgrid {

/// R realizations of the exogenous profiles with probabilities pi and the
/// induced balance vectors b_r.
struct ScenarioSet {
    int K = 0;
    std::vector<double> pi;
    std::vector<BalanceProfiles> realizations;
    std::vector<Vector> b;

    int size() const { return static_cast<int>(b.size()); }
    /// Throws std::invalid_argument unless pi sums to 1 (1e-12), pi >= 0, |b_r| = K.
    void validate() const;
};

/// Builds b_r from each realization.
ScenarioSet make_scenario_set(std::vector<double> pi, std::vector<BalanceProfiles> realizations,
                              int K);

/// Row layout shared by H, h, d and eta: scenario r owns rows [2Kr, 2K(r+1)),
/// first K "+" rows (surplus) then K "-" rows (shortage).
inline int plus_row(int K, int r, int k) { return 2 * K * r + k; }
inline int minus_row(int K, int r, int k) { return 2 * K * r + K + k; }

struct RecourseCost {
    double q_plus = 0.0;
    double q_minus = 0.0;
    int K = 0;
    Vector d;

    double min_entry() const { return d.size() ? d.minCoeff() : 0.0; }
};

RecourseCost build_recourse_cost(const std::vector<double>& pi, double q_plus, double q_minus,
                                 int K);

/// d'eta.
double expected_recourse(const RecourseCost& rc, const Vector& eta);

/// q_plus z for z >= 0, -q_minus z otherwise.
double recourse_phi(double z, double q_plus, double q_minus);

/// Per-scenario balance residuals [sum A x]_k - b_r(k), one column per scenario.
Matrix balance_residuals(const Vector& supply, const ScenarioSet& scen);

/// The smallest recourse for an aggregate coupling value v = sum H_i x_i:
/// eta = max(0, v - h).
Vector implied_recourse(const Vector& v, const Vector& h);

struct LiftedBlock {
    LocalBlock base;
    int R = 0;
    Matrix H;

    int eta_dim() const { return static_cast<int>(H.rows()); }
};

LiftedBlock lift_block(LocalBlock block, int R);

Vector build_h(const ScenarioSet& scen);

/// Splits eta evenly over N agents.
std::vector<Vector> split_recourse(const Vector& eta, int N);
/// Splits eta in proportion to per-agent weights (>= 0, not all zero);
/// the last agent takes the rounding remainder so the parts add up exactly.
std::vector<Vector> split_recourse(const Vector& eta, const std::vector<double>& weights);

struct StochasticProblem {
    std::vector<LiftedBlock> agents;
    ScenarioSet scenarios;
    RecourseCost recourse;
    Vector h;

    int K() const { return scenarios.K; }
    int R() const { return scenarios.size(); }
    int dim() const { return static_cast<int>(h.size()); }
    int num_agents() const { return static_cast<int>(agents.size()); }
};

StochasticProblem make_stochastic_problem(std::vector<LocalBlock> blocks, ScenarioSet scen,
                                          double q_plus, double q_minus);

/// 2 * max_{r,k} (|b_r(k)| + sum_i max_row sum_j |H_i(row, j)| * max(|lo_j|, |hi_j|)).
/// Bounds |sum_i H_i x_i| and |h| on every row with a factor 2 to spare.
double recourse_big_m(const StochasticProblem& p);
/// max_row sum_j |H(row, j)| * max(|lo_j|, |hi_j|): a bound on |H x| over the block box.
double coupling_radius(const LiftedBlock& a);

/// A single-problem transcription with column offsets of each agent's x and eta.
struct CentralLp {
    LinearProgram lp;
    std::vector<int> x_offset;
    std::vector<int> eta_offset;  // one shared block, or one per agent
    int coupling_row = 0;
};

/// min sum c_i'x_i + d'eta  s.t.  sum H_i x_i - eta <= h, x_i in P_i, eta >= 0.
CentralLp build_streamlined(const StochasticProblem& p, bool relaxed);
/// Same with one eta_i per agent: sum_i (H_i x_i - eta_i) <= h.
CentralLp build_distributed_form(const StochasticProblem& p, bool relaxed);
/// Band form over the base blocks: -eta_{kr-} <= [sum A_i x_i]_k - b_r(k) <= eta_{kr+},
/// with eta columns ordered (k, r, +/-).
CentralLp build_band_form(const StochasticProblem& p, bool relaxed);

/// sum_i (H_i x_i - eta_i) - h.
Vector coupling_value(const StochasticProblem& p, const std::vector<Vector>& x,
                      const std::vector<Vector>& eta);

}  // namespace mgrid
