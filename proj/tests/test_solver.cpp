#include "doctest.h"
#include "oracle.hpp"

#include "mgrid/solver.hpp"

#include <random>
#include <sstream>

using namespace mgrid;

namespace {

LinearProgram lp1(double c, double row, double rhs, double lo, double hi)
{
    LinearProgram lp;
    lp.cost = Vector::Constant(1, c);
    lp.rows = Matrix::Constant(1, 1, row);
    lp.rhs = Vector::Constant(1, rhs);
    lp.lower = Vector::Constant(1, lo);
    lp.upper = Vector::Constant(1, hi);
    return lp;
}

// Primal feasibility, dual feasibility, complementary slackness, strong duality.
void check_kkt(const LinearProgram& lp, const LpSolution& s, double tol = 1e-7)
{
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(oracle::feasible_point(lp, s.x, tol));
    CHECK(s.duals.minCoeff() >= -tol);
    const Vector slack = lp.rhs - lp.rows * s.x;
    for (int i = 0; i < lp.num_rows(); ++i) {
        CHECK(std::abs(s.duals[i] * slack[i]) <= tol * (1.0 + std::abs(s.duals[i])));
    }
    const Vector r = lp.cost + lp.rows.transpose() * s.duals;
    double dual_value = -s.duals.dot(lp.rhs);
    for (int j = 0; j < lp.num_vars(); ++j) {
        // r_j > 0 needs x_j at its lower bound, r_j < 0 at its upper bound.
        if (r[j] > tol) {
            CHECK(s.x[j] == doctest::Approx(lp.lower[j]).epsilon(1e-9).scale(1.0));
            dual_value += r[j] * lp.lower[j];
        } else if (r[j] < -tol) {
            CHECK(s.x[j] == doctest::Approx(lp.upper[j]).epsilon(1e-9).scale(1.0));
            dual_value += r[j] * lp.upper[j];
        } else {
            dual_value += r[j] * s.x[j];
        }
    }
    CHECK(dual_value == doctest::Approx(s.value).epsilon(1e-7));
    CHECK((s.reduced_costs - r).cwiseAbs().maxCoeff() <= 1e-9);
}

// Number of linearly independent active constraints at x.
int active_rank(const LinearProgram& lp, const Vector& x, double tol = 1e-7)
{
    std::vector<Vector> act;
    const int n = lp.num_vars();
    for (int i = 0; i < lp.num_rows(); ++i) {
        if (std::abs(lp.rows.row(i).dot(x) - lp.rhs[i]) <= tol) {
            act.push_back(lp.rows.row(i).transpose());
        }
    }
    for (int j = 0; j < n; ++j) {
        if (std::abs(x[j] - lp.lower[j]) <= tol || std::abs(x[j] - lp.upper[j]) <= tol) {
            act.push_back(Vector::Unit(n, j));
        }
    }
    if (act.empty()) {
        return 0;
    }
    Matrix M(act.size(), n);
    for (std::size_t a = 0; a < act.size(); ++a) {
        M.row(static_cast<Eigen::Index>(a)) = act[a].transpose();
    }
    return static_cast<int>(Eigen::FullPivLU<Matrix>(M).rank());
}

}  // namespace

TEST_CASE("single row bound binds with unit multiplier")
{
    const LinearProgram lp = lp1(-1.0, 1.0, 1.0, 0.0, 2.0);
    const LpSolution s = solve_lp(lp);
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(s.x[0] == doctest::Approx(1.0));
    CHECK(s.duals[0] == doctest::Approx(1.0));
    check_kkt(lp, s);
}

TEST_CASE("zero objective gives zero value and zero duals")
{
    const LinearProgram lp = lp1(0.0, 1.0, 1.0, 0.0, kInf);
    const LpSolution s = solve_lp(lp);
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(s.value == 0.0);
    CHECK(s.duals.cwiseAbs().maxCoeff() == 0.0);
    CHECK(active_rank(lp, s.x) == 1);
}

TEST_CASE("empty region is reported infeasible")
{
    const LinearProgram lp = lp1(1.0, 1.0, -1.0, 0.0, kInf);
    CHECK(solve_lp(lp).status == SolveStatus::infeasible);
}

TEST_CASE("unbounded direction is reported")
{
    const LinearProgram lp = lp1(-1.0, -1.0, 0.0, 0.0, kInf);
    CHECK(solve_lp(lp).status == SolveStatus::unbounded);
}

TEST_CASE("malformed programs are rejected")
{
    LinearProgram lp = lp1(1.0, 1.0, 1.0, 2.0, 1.0);
    CHECK_THROWS_AS(solve_lp(lp), std::invalid_argument);
    lp = lp1(1.0, 1.0, 1.0, 0.0, 1.0);
    lp.rhs.resize(2);
    CHECK_THROWS_AS(solve_lp(lp), std::invalid_argument);
}

TEST_CASE("random programs agree with vertex enumeration and satisfy KKT")
{
    std::mt19937_64 gen(7);
    int feasible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(gen() % 4);
        const int m = 1 + static_cast<int>(gen() % 5);
        const LinearProgram lp = oracle::random_lp(gen, n, m);
        const oracle::Result ref = oracle::lp_by_vertices(lp);
        const LpSolution s = solve_lp(lp);
        CAPTURE(trial);
        if (!ref.feasible) {
            CHECK(s.status == SolveStatus::infeasible);
            continue;
        }
        ++feasible;
        REQUIRE(s.status == SolveStatus::optimal);
        CHECK(s.value == doctest::Approx(ref.value).epsilon(1e-8).scale(1.0));
        check_kkt(lp, s);
        CHECK(active_rank(lp, s.x) == n);
    }
    CHECK(feasible > 100);
}

TEST_CASE("warm starts from a neighbouring basis reach the same optimum")
{
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 3);
        const int m = 2 + static_cast<int>(gen() % 4);
        LinearProgram lp = oracle::random_lp(gen, n, m);
        const LpSolution first = solve_lp(lp);
        if (first.status != SolveStatus::optimal) {
            continue;
        }
        // perturb the right-hand side and one bound, then resolve from the old basis
        std::uniform_int_distribution<int> d(-2, 2);
        for (int i = 0; i < m; ++i) {
            lp.rhs[i] += d(gen);
        }
        lp.upper[0] = std::max(lp.lower[0], lp.upper[0] + d(gen));
        const LpSolution warm = solve_lp(lp, {}, &first.basis);
        const LpSolution cold = solve_lp(lp);
        CAPTURE(trial);
        CHECK(warm.status == cold.status);
        if (cold.status == SolveStatus::optimal) {
            CHECK(warm.value == doctest::Approx(cold.value).epsilon(1e-8).scale(1.0));
            check_kkt(lp, warm);
        }
    }
}

TEST_CASE("identical inputs give bitwise identical solutions")
{
    std::mt19937_64 gen(3);
    const LinearProgram lp = oracle::random_lp(gen, 4, 5);
    const LpSolution a = solve_lp(lp);
    const LpSolution b = solve_lp(lp);
    CHECK(a.status == b.status);
    if (a.status == SolveStatus::optimal) {
        CHECK((a.x.array() == b.x.array()).all());
        CHECK((a.duals.array() == b.duals.array()).all());
    }
}

TEST_CASE("integer rounding of a fractional box")
{
    LinearProgram lp = lp1(-1.0, 0.0, 0.0, 0.0, 1.5);
    lp.integer = {true};
    const MipSolution s = solve_milp(lp);
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(s.x[0] == doctest::Approx(1.0));
}

TEST_CASE("continuous mask reproduces the LP value")
{
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        LinearProgram lp = oracle::random_lp(gen, 3, 3);
        lp.integer.assign(3, false);
        const LpSolution l = solve_lp(lp);
        const MipSolution m = solve_milp(lp);
        CHECK(l.status == m.status);
        if (l.status == SolveStatus::optimal) {
            CHECK(m.value == l.value);
        }
    }
}

TEST_CASE("two item knapsack")
{
    LinearProgram lp;
    lp.cost = Vector(2);
    lp.cost << -1.0, -2.0;
    lp.rows = Matrix::Ones(1, 2);
    lp.rhs = Vector::Ones(1);
    lp.lower = Vector::Zero(2);
    lp.upper = Vector::Ones(2);
    lp.integer = {true, true};
    const MipSolution s = solve_milp(lp);
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(s.x[0] == doctest::Approx(0.0));
    CHECK(s.x[1] == doctest::Approx(1.0));
    CHECK(s.value == doctest::Approx(-2.0));
}

TEST_CASE("branch and bound matches enumeration on random mixed programs")
{
    std::mt19937_64 gen(2024);
    std::uniform_int_distribution<int> coef(-5, 5);
    int solved = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int nb = 1 + static_cast<int>(gen() % 12);
        const int nc = static_cast<int>(gen() % 3);
        const int m = 1 + static_cast<int>(gen() % 4);
        const int n = nb + nc;
        LinearProgram lp;
        lp.cost.resize(n);
        lp.lower = Vector::Zero(n);
        lp.upper = Vector::Ones(n);
        lp.integer.assign(n, false);
        for (int j = 0; j < n; ++j) {
            lp.cost[j] = coef(gen);
            if (j < nb) {
                lp.integer[j] = true;
            } else {
                lp.lower[j] = -2.0;
                lp.upper[j] = 3.0;
            }
        }
        lp.rows.resize(m, n);
        lp.rhs.resize(m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) {
                lp.rows(i, j) = coef(gen);
            }
            lp.rhs[i] = coef(gen) + 2;
        }
        const oracle::Result ref = oracle::milp_by_enumeration(lp);
        const MipSolution s = solve_milp(lp);
        CAPTURE(trial);
        if (!ref.feasible) {
            CHECK(s.status == SolveStatus::infeasible);
            continue;
        }
        ++solved;
        REQUIRE(s.status == SolveStatus::optimal);
        CHECK(std::abs(s.value - ref.value) <= 1e-8);
        for (int j = 0; j < nb; ++j) {
            CHECK(std::abs(s.x[j] - std::round(s.x[j])) <= 1e-6);
        }
        CHECK(oracle::feasible_point(lp, s.x, 1e-7));
    }
    CHECK(solved > 100);
}

TEST_CASE("subproblem multiplier of a one dimensional resource")
{
    const LinearProgram local = lp1(-1.0, 0.0, 0.0, 0.0, 10.0);
    const Matrix coupling = Matrix::Ones(1, 1);
    const SubproblemValue v = lp_value_subgradient(local, coupling, Vector::Constant(1, 5.0));
    REQUIRE(v.status == SolveStatus::optimal);
    CHECK(v.value == doctest::Approx(-5.0));
    CHECK(v.mu[0] == doctest::Approx(1.0));
}

TEST_CASE("zero cost subproblem has zero multiplier")
{
    const LinearProgram local = lp1(0.0, 0.0, 0.0, 0.0, 10.0);
    const SubproblemValue v =
        lp_value_subgradient(local, Matrix::Ones(1, 1), Vector::Constant(1, 5.0));
    REQUIRE(v.status == SolveStatus::optimal);
    CHECK(v.mu[0] == 0.0);
}

TEST_CASE("multipliers give supporting hyperplanes of the subproblem value")
{
    std::mt19937_64 gen(99);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::normal_distribution<double> dir(0.0, 1.0);
    int checked = 0;
    for (int trial = 0; trial < 100 && checked < 40; ++trial) {
        const int n = 3;
        const int k = 2;
        LinearProgram local = oracle::random_lp(gen, n, 2);
        Matrix coupling(k, n);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < n; ++j) {
                coupling(i, j) = coef(gen);
            }
        }
        Vector y(k);
        y << 1.5, 2.5;
        const SubproblemValue base = lp_value_subgradient(local, coupling, y);
        if (base.status != SolveStatus::optimal) {
            continue;
        }
        ++checked;
        for (int probe = 0; probe < 8; ++probe) {
            Vector e(k);
            e << dir(gen), dir(gen);
            for (double eps : {1e-3, 1e-1, 1.0}) {
                const SubproblemValue moved = lp_value_subgradient(local, coupling, y + eps * e);
                if (moved.status != SolveStatus::optimal) {
                    continue;
                }
                CHECK(moved.value >= base.value - eps * base.mu.dot(e) - 1e-7);
            }
            // away from kinks the one-sided slope equals -mu'e
            const double h = 1e-6;
            const SubproblemValue fwd = lp_value_subgradient(local, coupling, y + h * e);
            const SubproblemValue bwd = lp_value_subgradient(local, coupling, y - h * e);
            if (fwd.status == SolveStatus::optimal && bwd.status == SolveStatus::optimal) {
                const double right = (fwd.value - base.value) / h;
                const double left = (base.value - bwd.value) / h;
                if (std::abs(right - left) < 1e-6) {
                    CHECK(right == doctest::Approx(-base.mu.dot(e)).epsilon(1e-4).scale(1.0));
                }
            }
        }
    }
    CHECK(checked >= 20);
}

TEST_CASE("lagrangian dual value matches the primal at optimal multipliers")
{
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 50; ++trial) {
        const LinearProgram lp = oracle::random_lp(gen, 3, 3);
        const LpSolution s = solve_lp(lp);
        if (s.status != SolveStatus::optimal) {
            continue;
        }
        CHECK(lagrangian_dual_value(lp, s.duals) == doctest::Approx(s.value).epsilon(1e-8).scale(1.0));
        // weak duality at an arbitrary nonnegative multiplier
        const Vector mu = Vector::Constant(lp.num_rows(), 0.5);
        CHECK(lagrangian_dual_value(lp, mu) <= s.value + 1e-9);
    }
}

TEST_CASE("LP text dump lists sections and integer columns")
{
    LinearProgram lp;
    lp.cost = Vector(3);
    lp.cost << 1.0, -2.0, 0.5;
    lp.rows = Matrix(1, 3);
    lp.rows << 1.0, 1.0, -1.0;
    lp.rhs = Vector::Constant(1, 4.0);
    lp.lower = Vector::Zero(3);
    lp.upper = Vector(3);
    lp.upper << 1.0, 5.0, kInf;
    lp.integer = {true, true, false};
    std::ostringstream os;
    write_lp_format(os, lp, {"delta(0)", "n", "z"});
    const std::string t = os.str();
    CHECK(t.find("Minimize\n obj: 1 delta_0_ - 2 n + 0.5 z") != std::string::npos);
    CHECK(t.find(" r0: 1 delta_0_ + 1 n - 1 z <= 4\n") != std::string::npos);
    CHECK(t.find(" z >= 0\n") != std::string::npos);
    CHECK(t.find("Generals\n n\n") != std::string::npos);
    CHECK(t.find("Binaries\n delta_0_\n") != std::string::npos);
    CHECK(t.find("End\n") != std::string::npos);
}
