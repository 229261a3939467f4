#pragma once

#include "mgrid/solver.hpp"

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mgrid {

/// Raised when unit parameters violate their documented bounds. The message
/// names the offending field.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class UnitKind { storage, generator, controllable_load, critical_load, grid };

std::string to_string(UnitKind k);

inline constexpr double kDefaultStrictness = 1e-6;

struct StorageParams {
    double eta_c = 0.95;
    double eta_d = 0.95;
    double x_min = 1.0;   // kWh
    double x_max = 10.0;  // kWh
    double x_pl = 0.0;    // kWh lost per step
    double C = 5.0;       // kW
    double zeta = 0.0;    // cost per kW exchanged
    double x0 = 5.0;      // kWh
    double epsilon = kDefaultStrictness;

    void validate() const;
};

struct CostSegment {
    double slope;
    double intercept;
};

/// Secant linearization of a*u^2 + b*u over [u_lo, u_hi] with `count` segments.
std::vector<CostSegment> secant_segments(double a, double b, double u_lo, double u_hi, int count = 3);

struct GeneratorParams {
    int T_up = 1;
    int T_down = 1;
    double u_min = 0.0;
    double u_max = 10.0;
    double r_max = 10.0;
    std::vector<double> kappa_u;  // startup cost per step, length K
    std::vector<double> kappa_d;  // shutdown cost per step, length K
    double zeta = 0.0;
    std::vector<CostSegment> cost_segments;
    int delta_init = 0;
    double u_init = 0.0;

    void validate(int K) const;
};

struct ControllableLoadParams {
    double beta_min = 0.0;
    double beta_max = 1.0;
    std::vector<double> D;  // kW forecast, length K
    double varphi = 1.0;

    void validate(int K) const;
};

struct GridParams {
    double P_max = 100.0;           // kW
    std::vector<double> phi_p;      // purchase price per step, length K
    std::vector<double> phi_s;      // sell price per step, length K
    double epsilon = kDefaultStrictness;

    void validate(int K) const;
    /// P_max * max_k max(phi_p(k), phi_s(k)).
    double big_m() const;
};

/// One agent's deterministic mixed-integer data: min c'x over
/// {G x <= g, lower <= x <= upper, x_j integral where flagged}, with
/// coupling contribution A x (K rows, one per time step).
struct LocalBlock {
    UnitKind kind = UnitKind::critical_load;
    std::string name;
    int horizon = 0;
    Vector cost;
    Matrix G;
    Vector g;
    Vector lower;
    Vector upper;
    std::vector<bool> integral;
    Matrix A;
    std::map<std::string, int> var_index;

    int size() const { return static_cast<int>(cost.size()); }
    int num_rows() const { return static_cast<int>(g.size()); }
    int num_integral() const;
    int index(const std::string& name) const;
    std::vector<std::string> var_names() const;

    /// The block's polyhedron as a linear program (integrality kept in the mask).
    LinearProgram to_linear_program() const;
    /// Max row violation of G x <= g and of the bounds (0 when feasible).
    double violation(const Vector& x) const;
};

LocalBlock build_storage_block(const StorageParams& p, int K, std::string name = "storage");
LocalBlock build_generator_block(const GeneratorParams& p, int K, std::string name = "generator");
LocalBlock build_controllable_load_block(const ControllableLoadParams& p, int K,
                                         std::string name = "load");
LocalBlock build_grid_block(const GridParams& p, int K, std::string name = "grid");
/// Zero-variable block: critical loads only enter the balance right-hand side.
LocalBlock build_critical_load_block(int K, std::string name = "critical");

/// The six big-M rows of the storage logic as (E1, E2, E3, E4).
struct LogicMatrices {
    std::array<double, 6> E1;
    std::array<double, 6> E2;
    std::array<double, 6> E3;
    std::array<double, 6> E4;
};
LogicMatrices storage_logic_matrices(double C, double epsilon);
LogicMatrices grid_logic_matrices(double P_max, double M, double phi_p, double phi_s,
                                  double epsilon);

/// Exogenous profiles of one scenario.
struct BalanceProfiles {
    std::vector<Vector> controllable_demand;
    std::vector<Vector> critical_demand;
    std::vector<Vector> renewable_output;
};

/// b(k) = -sum D_cl(k) - sum D_lo(k) + sum P_ren(k).
Vector power_balance_rhs(const BalanceProfiles& profiles, int K);

struct CentralizedProblem {
    LinearProgram lp;
    std::vector<int> offsets;  // first column of each block
    int coupling_row = 0;      // first of the 2K paired balance rows
};

/// Block-diagonal polyhedron with sum_i A_i x_i = b as paired inequality rows.
CentralizedProblem assemble_centralized(const std::vector<LocalBlock>& blocks, const Vector& b);

/// Min and max of every coordinate over the relaxed polyhedron; throws if empty.
std::pair<Vector, Vector> coordinate_ranges(const LocalBlock& block);

}  // namespace mgrid
