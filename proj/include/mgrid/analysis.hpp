#pragma once

#include "mgrid/dialgo.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mgrid {

/// Componentwise min of H x - eta over the relaxed block and 0 <= eta <= cap.
Vector compute_lower_bound(const LiftedBlock& a, double cap, const SimplexOptions& opts = {});

struct AuxiliarySolution {
    Vector x;
    Vector eta;
    double value = 0.0;
    double cap = 0.0;  // cap that made the problem feasible
};

/// min c'x + d'eta  s.t.  H x <= ell + eta, 0 <= eta <= cap, x in X_i.
/// The cap is doubled (up to 30 times) while the problem is infeasible.
AuxiliarySolution compute_auxiliary(const LiftedBlock& a, const Vector& d, const Vector& ell,
                                    double cap, const BranchAndBoundOptions& opts = {});

struct AgentCertificate {
    std::string name;
    bool integral_relaxation = false;  // member of I_Z
    Vector y;
    Vector z_lp;
    Vector eta_lp;
    Vector x_final;
    Vector eta_final;
    double final_value = 0.0;
    Vector ell;
    Vector x_aux;
    Vector eta_aux;
    double aux_value = 0.0;
    Vector contribution;
};

struct ViolationCertificate {
    Vector bound;
    Vector measured;  // sum_i H_i x_i - h
    double d_min = 0.0;
    std::string label;  // "converged" or "empirical"
    std::vector<AgentCertificate> agents;
    int integral_count = 0;
    /// max_j (measured_j - bound_j); <= tolerance when the bound holds.
    double max_excess = 0.0;
    bool holds = false;
    /// ell_i <= y_i for every agent.
    bool lower_bounds_admissible = false;
    /// c'x_final + d'eta_final <= c'x_aux + d'eta_aux for every agent.
    bool optimality_transfer = false;
    /// eta_final <= (d'eta_final / d_min) 1 for every agent.
    bool componentwise_eta = false;
};

struct CertifyOptions {
    LocalOptions local;
    double integrality_tol = 1e-6;
    double tolerance = 1e-5;
    bool converged = false;
};

/// Evaluates the worst-case violation bound at allocations y (sum y_i = h).
/// Agents whose relaxed solution is integral keep it as their final solution;
/// the others solve the mixed-integer local program.
ViolationCertificate certify(const StochasticProblem& p, const std::vector<Vector>& y,
                             const CertifyOptions& opts);

/// Contribution of one agent outside I_Z: (c'(x_aux - x_final) + d'eta_aux) / d_min * 1.
Vector nonintegral_contribution(const Vector& c, const Vector& x_aux, const Vector& x_final,
                                const Vector& d, const Vector& eta_aux);

void write_certificate_json(std::ostream& os, const ViolationCertificate& cert);

/// Metropolis weights w_ij = 1 / (1 + max(deg_i, deg_j)), w_ii = 1 - sum_j w_ij.
Matrix metropolis_weights(const CommGraph& g);

struct ConsensusResult {
    std::vector<Vector> values;  // per agent after the rounds
    Vector target;               // sum of the initial contributions
    double max_deviation = 0.0;
};

/// Average consensus started from N * contribution_i; every agent's value tends to
/// sum_i contribution_i.
ConsensusResult consensus_bound(const std::vector<Vector>& contributions, const CommGraph& g,
                                int rounds);

struct CouplingReport {
    Matrix residuals;  // K x R, [sum A_i x_i]_k - b_r(k)
    double max_pos = 0.0;
    double max_neg = 0.0;
    double expected_recourse = 0.0;
};

CouplingReport coupling_report(const Vector& supply, const ScenarioSet& scen, double q_plus,
                               double q_minus);

/// sum_i A_i x_i.
Vector total_supply(const StochasticProblem& p, const std::vector<Vector>& x);

/// All feasible 0/1 points of a pure-binary block.
std::vector<Vector> enumerate_binary_points(const LocalBlock& b);

struct HullCheck {
    bool checked = false;  // false when the block has too many binaries
    bool equal = true;
    double max_gap = 0.0;
    int directions = 0;
};

/// Compares min over the relaxation with min over the binary slices along the
/// cost, the coordinate axes, the coupling rows and seeded random directions.
HullCheck relaxation_matches_hull(const LocalBlock& b, int random_directions, std::uint64_t seed,
                                  int max_binaries = 8, double tol = 1e-7);

/// Streamlined two-stage problem over pure-binary blocks with each block
/// replaced by the convex hull of its points: x_i = V_i lambda_i,
/// sum lambda_i = 1, lambda_i >= 0.
struct HullCentral {
    LinearProgram lp;
    std::vector<Matrix> points;  // V_i, one column per point
    std::vector<int> lambda_offset;
    int eta_offset = 0;
};

HullCentral build_hull_central(const StochasticProblem& p);
/// Block solutions x_i = V_i lambda_i of a solved hull program.
std::vector<Vector> hull_block_solutions(const HullCentral& hc, const Vector& sol);

/// Number of blocks with a coordinate more than tol away from an integer among
/// the integral-flagged columns.
int count_nonintegral_blocks(const StochasticProblem& p, const std::vector<Vector>& x,
                             double tol = 1e-6);

}  // namespace mgrid
