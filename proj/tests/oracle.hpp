#pragma once

// Independent brute-force references used by the tests. Nothing here calls
// into the simplex code.

#include "mgrid/solver.hpp"

#include <Eigen/LU>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using mgrid::LinearProgram;
using mgrid::Matrix;
using mgrid::Vector;

struct Result {
    bool feasible = false;
    double value = std::numeric_limits<double>::infinity();
    Vector x;
};

inline bool feasible_point(const LinearProgram& lp, const Vector& x, double tol)
{
    for (int j = 0; j < lp.num_vars(); ++j) {
        if (x[j] < lp.lower[j] - tol || x[j] > lp.upper[j] + tol) {
            return false;
        }
    }
    if (lp.num_rows() > 0 && (lp.rows * x - lp.rhs).maxCoeff() > tol) {
        return false;
    }
    return true;
}

/// Minimum over all basic points: every choice of n linearly independent
/// active constraints among rows and finite bounds. Requires a bounded LP.
inline Result lp_by_vertices(const LinearProgram& lp, double tol = 1e-7)
{
    const int n = lp.num_vars();
    Result best;
    if (n == 0) {
        Vector x(0);
        if (feasible_point(lp, x, tol)) {
            best.feasible = true;
            best.value = 0.0;
            best.x = x;
        }
        return best;
    }
    std::vector<Vector> normals;
    std::vector<double> levels;
    for (int i = 0; i < lp.num_rows(); ++i) {
        normals.push_back(lp.rows.row(i).transpose());
        levels.push_back(lp.rhs[i]);
    }
    for (int j = 0; j < n; ++j) {
        Vector e = Vector::Zero(n);
        e[j] = 1.0;
        if (std::isfinite(lp.lower[j])) {
            normals.push_back(e);
            levels.push_back(lp.lower[j]);
        }
        if (std::isfinite(lp.upper[j])) {
            normals.push_back(e);
            levels.push_back(lp.upper[j]);
        }
    }
    const int total = static_cast<int>(normals.size());
    std::vector<int> pick(n);
    std::function<void(int, int)> rec = [&](int depth, int start) {
        if (depth == n) {
            Matrix M(n, n);
            Vector r(n);
            for (int a = 0; a < n; ++a) {
                M.row(a) = normals[pick[a]].transpose();
                r[a] = levels[pick[a]];
            }
            Eigen::FullPivLU<Matrix> lu(M);
            if (lu.rank() < n) {
                return;
            }
            const Vector x = lu.solve(r);
            if (!feasible_point(lp, x, tol)) {
                return;
            }
            const double v = lp.cost.dot(x);
            if (v < best.value) {
                best.feasible = true;
                best.value = v;
                best.x = x;
            }
            return;
        }
        for (int i = start; i < total; ++i) {
            pick[depth] = i;
            rec(depth + 1, i + 1);
        }
    };
    rec(0, 0);
    return best;
}

/// Enumerates every integer assignment of the flagged columns and solves the
/// remaining LP over the continuous columns by vertex enumeration.
inline Result milp_by_enumeration(const LinearProgram& lp, double tol = 1e-7)
{
    const int n = lp.num_vars();
    std::vector<int> ints;
    std::vector<int> conts;
    for (int j = 0; j < n; ++j) {
        if (!lp.integer.empty() && lp.integer[j]) {
            ints.push_back(j);
        } else {
            conts.push_back(j);
        }
    }
    const int nc = static_cast<int>(conts.size());
    LinearProgram reduced;
    reduced.cost.resize(nc);
    reduced.lower.resize(nc);
    reduced.upper.resize(nc);
    reduced.rows.resize(lp.num_rows(), nc);
    for (int a = 0; a < nc; ++a) {
        reduced.cost[a] = lp.cost[conts[a]];
        reduced.lower[a] = lp.lower[conts[a]];
        reduced.upper[a] = lp.upper[conts[a]];
        reduced.rows.col(a) = lp.rows.col(conts[a]);
    }
    Result best;
    Vector fixed = Vector::Zero(n);
    std::function<void(std::size_t)> rec = [&](std::size_t d) {
        if (d == ints.size()) {
            reduced.rhs = lp.rhs - lp.rows * fixed;
            const Result r = lp_by_vertices(reduced, tol);
            if (!r.feasible) {
                return;
            }
            const double v = r.value + lp.cost.dot(fixed);
            if (v < best.value) {
                best.feasible = true;
                best.value = v;
                best.x = fixed;
                for (int a = 0; a < nc; ++a) {
                    best.x[conts[a]] = r.x[a];
                }
            }
            return;
        }
        const int j = ints[d];
        const double lo = std::ceil(lp.lower[j] - 1e-9);
        const double hi = std::floor(lp.upper[j] + 1e-9);
        for (double v = lo; v <= hi; v += 1.0) {
            fixed[j] = v;
            rec(d + 1);
        }
        fixed[j] = 0.0;
    };
    rec(0);
    return best;
}

/// Random bounded LP with small integer data. May be infeasible.
inline LinearProgram random_lp(std::mt19937_64& gen, int n, int m)
{
    std::uniform_int_distribution<int> coef(-4, 4);
    std::uniform_int_distribution<int> box(1, 4);
    LinearProgram lp;
    lp.cost.resize(n);
    lp.lower.resize(n);
    lp.upper.resize(n);
    for (int j = 0; j < n; ++j) {
        lp.cost[j] = coef(gen);
        lp.lower[j] = -box(gen);
        lp.upper[j] = box(gen);
    }
    lp.rows.resize(m, n);
    lp.rhs.resize(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            lp.rows(i, j) = coef(gen);
        }
        lp.rhs[i] = coef(gen);
    }
    return lp;
}

}  // namespace oracle
