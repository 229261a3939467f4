#include "mgrid/analysis.hpp"
#include "mgrid/rng.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace mgrid {

std::vector<Vector> enumerate_binary_points(const LocalBlock& b)
{
    const int n = b.size();
    for (int j = 0; j < n; ++j) {
        if (!b.integral[j] || b.lower[j] < 0.0 || b.upper[j] > 1.0) {
            throw std::invalid_argument(
                fmt::format("block '{}': column {} is not binary", b.name, j));
        }
    }
    if (n > 24) {
        throw std::invalid_argument(fmt::format("block '{}' has too many binaries", b.name));
    }
    std::vector<Vector> pts;
    for (long mask = 0; mask < (1L << n); ++mask) {
        Vector x(n);
        for (int j = 0; j < n; ++j) {
            x[j] = (mask >> j) & 1;
        }
        if (b.violation(x) <= 1e-9) {
            pts.push_back(std::move(x));
        }
    }
    return pts;
}

HullCheck relaxation_matches_hull(const LocalBlock& b, int random_directions, std::uint64_t seed,
                                  int max_binaries, double tol)
{
    HullCheck out;
    std::vector<int> bins;
    for (int j = 0; j < b.size(); ++j) {
        if (b.integral[j]) {
            bins.push_back(j);
        }
    }
    if (static_cast<int>(bins.size()) > max_binaries) {
        return out;
    }
    out.checked = true;
    const int n = b.size();
    if (bins.empty() || n == 0) {
        return out;
    }
    std::vector<Vector> dirs{b.cost};
    for (int j = 0; j < n; ++j) {
        dirs.push_back(Vector::Unit(n, j));
        dirs.push_back(-Vector::Unit(n, j));
    }
    for (int k = 0; k < b.horizon; ++k) {
        dirs.push_back(b.A.row(k).transpose());
        dirs.push_back(-b.A.row(k).transpose());
    }
    Rng rng(seed);
    for (int t = 0; t < random_directions; ++t) {
        Vector v(n);
        for (int j = 0; j < n; ++j) {
            v[j] = rng.normal();
        }
        dirs.push_back(v);
    }

    LinearProgram relaxed = b.to_linear_program();
    relaxed.integer.clear();
    for (const Vector& c : dirs) {
        ++out.directions;
        relaxed.cost = c;
        const LpSolution lp = solve_lp(relaxed);
        if (lp.status != SolveStatus::optimal) {
            throw std::runtime_error(fmt::format("hull check of '{}': relaxation {}", b.name,
                                                 to_string(lp.status)));
        }
        double hull = kInf;
        LinearProgram slice = relaxed;
        for (long mask = 0; mask < (1L << bins.size()); ++mask) {
            for (std::size_t a = 0; a < bins.size(); ++a) {
                const double v = (mask >> a) & 1;
                slice.lower[bins[a]] = v;
                slice.upper[bins[a]] = v;
            }
            const LpSolution s = solve_lp(slice);
            if (s.status == SolveStatus::optimal) {
                hull = std::min(hull, s.value);
            }
        }
        const double gap = hull - lp.value;
        out.max_gap = std::max(out.max_gap, gap);
        if (gap > tol * (1.0 + std::abs(hull))) {
            out.equal = false;
            return out;
        }
    }
    return out;
}

HullCentral build_hull_central(const StochasticProblem& p)
{
    HullCentral hc;
    const int N = p.num_agents();
    const int D = p.dim();
    int cols = 0;
    for (const auto& a : p.agents) {
        const auto pts = enumerate_binary_points(a.base);
        if (pts.empty()) {
            throw std::invalid_argument(fmt::format("block '{}' has no feasible point", a.base.name));
        }
        Matrix V(a.base.size(), static_cast<Eigen::Index>(pts.size()));
        for (std::size_t q = 0; q < pts.size(); ++q) {
            V.col(static_cast<Eigen::Index>(q)) = pts[q];
        }
        hc.lambda_offset.push_back(cols);
        cols += static_cast<int>(V.cols());
        hc.points.push_back(std::move(V));
    }
    hc.eta_offset = cols;
    const int n = cols + D;
    const int m = 2 * N + D;
    LinearProgram& lp = hc.lp;
    lp.cost = Vector::Zero(n);
    lp.lower = Vector::Zero(n);
    lp.upper = Vector::Ones(n);
    lp.upper.tail(D).setConstant(kInf);
    lp.rows = Matrix::Zero(m, n);
    lp.rhs = Vector::Zero(m);
    for (int i = 0; i < N; ++i) {
        const Matrix& V = hc.points[i];
        const int off = hc.lambda_offset[i];
        const int P = static_cast<int>(V.cols());
        const LiftedBlock& a = p.agents[i];
        if (a.base.size() > 0) {
            lp.cost.segment(off, P) = V.transpose() * a.base.cost;
            lp.rows.block(2 * N, off, D, P) = a.H * V;
        }
        lp.rows.block(2 * i, off, 1, P).setOnes();
        lp.rows.block(2 * i + 1, off, 1, P).setConstant(-1.0);
        lp.rhs[2 * i] = 1.0;
        lp.rhs[2 * i + 1] = -1.0;
    }
    lp.rows.block(2 * N, cols, D, D) = -Matrix::Identity(D, D);
    lp.rhs.tail(D) = p.h;
    lp.cost.tail(D) = p.recourse.d;
    return hc;
}

std::vector<Vector> hull_block_solutions(const HullCentral& hc, const Vector& sol)
{
    std::vector<Vector> xs;
    for (std::size_t i = 0; i < hc.points.size(); ++i) {
        const Matrix& V = hc.points[i];
        xs.push_back(V * sol.segment(hc.lambda_offset[i], V.cols()));
    }
    return xs;
}

int count_nonintegral_blocks(const StochasticProblem& p, const std::vector<Vector>& x, double tol)
{
    int count = 0;
    for (int i = 0; i < p.num_agents(); ++i) {
        const LocalBlock& b = p.agents[i].base;
        for (int j = 0; j < b.size(); ++j) {
            if (b.integral[j] && std::abs(x[i][j] - std::round(x[i][j])) > tol) {
                ++count;
                break;
            }
        }
    }
    return count;
}

}  // namespace mgrid
