#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace mgrid {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SolverTolerances {
    double feasibility = 1e-7;
    double optimality = 1e-9;
    double integrality = 1e-6;
    double objective = 1e-8;
    double pivot = 1e-9;
};

/// min cost'x  s.t.  rows * x <= rhs,  lower <= x <= upper.
///
/// Equalities are expressed as a pair of opposite rows. `integer` is either
/// empty (pure LP) or holds one flag per column; solve_lp ignores it.
struct LinearProgram {
    Vector cost;
    Matrix rows;
    Vector rhs;
    Vector lower;
    Vector upper;
    std::vector<bool> integer;

    int num_vars() const { return static_cast<int>(cost.size()); }
    int num_rows() const { return static_cast<int>(rhs.size()); }

    /// Throws std::invalid_argument on inconsistent shapes or lower > upper.
    void validate() const;
};

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

std::string to_string(SolveStatus s);

/// Simplex basis over structural columns followed by one slack per row.
/// state: 0 basic, 1 at lower, 2 at upper, 3 free at zero.
struct Basis {
    std::vector<std::int8_t> state;
    bool empty() const { return state.empty(); }
};

struct LpSolution {
    SolveStatus status = SolveStatus::infeasible;
    Vector x;
    double value = kInf;
    /// Lagrange multipliers of the rows, >= 0 at optimality.
    Vector duals;
    /// cost + rows' * duals; the multipliers of the active variable bounds.
    Vector reduced_costs;
    int iterations = 0;
    Basis basis;
};

struct MipSolution {
    SolveStatus status = SolveStatus::infeasible;
    Vector x;
    double value = kInf;
    long node_count = 0;
    /// Final basis of the LP that produced the incumbent.
    Basis basis;
};

struct SimplexOptions {
    SolverTolerances tol;
    int refactor_period = 64;
    int max_iterations = 0;  // 0: 50 * (rows + cols)
};

/// Bounded-variable primal simplex with a Phase 1 on artificials; when a warm
/// basis is supplied and is dual feasible the dual simplex is used instead.
/// Always returns a vertex. Pivoting: most negative reduced cost, switching to
/// Bland's rule after 10 * rows consecutive degenerate pivots.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {},
                    const Basis* warm = nullptr);

struct BranchAndBoundOptions {
    SimplexOptions lp;
    long max_nodes = 200000;
    bool warm_start_nodes = true;
};

/// Best-bound branch and bound, most-fractional branching with ties broken by
/// the lowest column index.
MipSolution solve_milp(const LinearProgram& lp, const BranchAndBoundOptions& opts = {});

/// Value of the resource subproblem p(y) = min c'x s.t. local rows, coupling x <= y,
/// and multipliers mu of the coupling rows; -mu is a subgradient of p at y.
struct SubproblemValue {
    SolveStatus status = SolveStatus::infeasible;
    double value = kInf;
    Vector mu;
    Vector x;
};

SubproblemValue lp_value_subgradient(const LinearProgram& local, const Matrix& coupling,
                                     const Vector& y, const SimplexOptions& opts = {});

/// Lagrangian dual function value at row multipliers `mu` (>= 0):
/// -mu'rhs + sum_j min_{lower<=x_j<=upper} (cost_j + (rows' mu)_j) x_j.
double lagrangian_dual_value(const LinearProgram& lp, const Vector& mu);

/// Writes the program in CPLEX LP text format. Binary columns are declared
/// under "Binaries", other integer columns under "Generals".
void write_lp_format(std::ostream& os, const LinearProgram& lp,
                     const std::vector<std::string>& var_names = {});

}  // namespace mgrid
