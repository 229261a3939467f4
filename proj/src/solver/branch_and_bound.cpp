#include "mgrid/solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>
#include <stdexcept>

namespace mgrid {

namespace {

struct Node {
    double bound;
    long id;
    Vector lower;
    Vector upper;
    std::shared_ptr<const Basis> basis;
};

struct WorseBound {
    bool operator()(const Node& a, const Node& b) const
    {
        if (a.bound != b.bound) {
            return a.bound > b.bound;
        }
        return a.id > b.id;
    }
};

// Most fractional integer column; ties go to the lowest index. -1 if integral.
int branching_column(const LinearProgram& lp, const Vector& x, double tol)
{
    int best = -1;
    double best_frac = 0.0;
    for (int j = 0; j < lp.num_vars(); ++j) {
        if (!lp.integer[j]) {
            continue;
        }
        const double f = x[j] - std::floor(x[j]);
        const double dist = std::min(f, 1.0 - f);
        if (dist <= tol) {
            continue;
        }
        if (dist > best_frac + 1e-12) {
            best_frac = dist;
            best = j;
        }
    }
    return best;
}

}  // namespace

MipSolution solve_milp(const LinearProgram& lp, const BranchAndBoundOptions& opts)
{
    lp.validate();
    MipSolution out;
    const bool has_integers = !lp.integer.empty() &&
        std::any_of(lp.integer.begin(), lp.integer.end(), [](bool b) { return b; });
    if (!has_integers) {
        LpSolution s = solve_lp(lp, opts.lp);
        out.status = s.status;
        out.x = std::move(s.x);
        out.value = s.value;
        out.node_count = 1;
        out.basis = std::move(s.basis);
        return out;
    }

    const double int_tol = opts.lp.tol.integrality;
    // Absolute pruning margin, well inside the objective comparison tolerance.
    const double prune_margin = 0.01 * opts.lp.tol.objective;
    LinearProgram work = lp;
    for (int j = 0; j < work.num_vars(); ++j) {
        if (work.integer[j]) {
            work.lower[j] = std::ceil(work.lower[j] - int_tol);
            work.upper[j] = std::floor(work.upper[j] + int_tol);
            if (work.lower[j] > work.upper[j]) {
                out.status = SolveStatus::infeasible;
                return out;
            }
        }
    }

    std::priority_queue<Node, std::vector<Node>, WorseBound> open;
    long next_id = 0;
    open.push(Node{-kInf, next_id++, work.lower, work.upper, nullptr});
    double incumbent = kInf;
    bool limit_hit = false;

    while (!open.empty()) {
        Node node = open.top();
        open.pop();
        if (node.bound >= incumbent - prune_margin) {
            continue;
        }
        if (out.node_count >= opts.max_nodes) {
            limit_hit = true;
            break;
        }
        ++out.node_count;
        work.lower = node.lower;
        work.upper = node.upper;
        const Basis* warm = opts.warm_start_nodes ? node.basis.get() : nullptr;
        LpSolution relax = solve_lp(work, opts.lp, warm);
        if (relax.status == SolveStatus::unbounded) {
            out.status = SolveStatus::unbounded;
            return out;
        }
        if (relax.status != SolveStatus::optimal) {
            if (relax.status == SolveStatus::iteration_limit) {
                limit_hit = true;
            }
            continue;
        }
        if (relax.value >= incumbent - prune_margin) {
            continue;
        }
        const int j = branching_column(work, relax.x, int_tol);
        if (j < 0) {
            incumbent = relax.value;
            out.x = relax.x;
            out.value = relax.value;
            out.basis = relax.basis;
            out.status = SolveStatus::optimal;
            continue;
        }
        auto basis = std::make_shared<const Basis>(std::move(relax.basis));
        const double v = relax.x[j];
        Node down{relax.value, next_id++, node.lower, node.upper, basis};
        down.upper[j] = std::floor(v);
        Node up{relax.value, next_id++, node.lower, node.upper, basis};
        up.lower[j] = std::ceil(v);
        open.push(std::move(down));
        open.push(std::move(up));
    }
    if (out.status != SolveStatus::optimal && limit_hit) {
        out.status = SolveStatus::iteration_limit;
    }
    return out;
}

}  // namespace mgrid
