#include "mgrid/dialgo.hpp"

#include <stdexcept>

#include <fmt/core.h>

namespace mgrid {

LinearProgram local_program(const LiftedBlock& a, const Vector& d, const Vector& y, double cap,
                            bool relaxed)
{
    const LocalBlock& b = a.base;
    const int n = b.size();
    const int m = b.num_rows();
    const int D = a.eta_dim();
    if (y.size() != D || d.size() != D) {
        throw std::invalid_argument(
            fmt::format("local_program: allocation has length {}, expected {}", y.size(), D));
    }
    LinearProgram lp;
    lp.cost.resize(n + D);
    lp.cost << b.cost, d;
    lp.lower.resize(n + D);
    lp.lower << b.lower, Vector::Zero(D);
    lp.upper.resize(n + D);
    lp.upper << b.upper, Vector::Constant(D, cap);
    lp.rows = Matrix::Zero(m + D, n + D);
    if (n > 0) {
        lp.rows.topLeftCorner(m, n) = b.G;
        lp.rows.bottomLeftCorner(D, n) = a.H;
    }
    lp.rows.bottomRightCorner(D, D) = -Matrix::Identity(D, D);
    lp.rhs.resize(m + D);
    lp.rhs << b.g, y;
    lp.integer.assign(n + D, false);
    if (!relaxed) {
        for (int j = 0; j < n; ++j) {
            lp.integer[j] = b.integral[j];
        }
    }
    return lp;
}

double agent_cap(const LocalOptions& opts, const Vector& y)
{
    return opts.eta_cap + (y.size() ? y.cwiseAbs().maxCoeff() : 0.0);
}

void local_multiplier_step(const LiftedBlock& a, const Vector& d, AgentState& s,
                           const LocalOptions& opts, int agent_id)
{
    const LinearProgram lp = local_program(a, d, s.y, agent_cap(opts, s.y), true);
    const Basis* warm = opts.warm_start && !s.basis.empty() ? &s.basis : nullptr;
    LpSolution sol = solve_lp(lp, opts.lp, warm);
    s.status = sol.status;
    if (sol.status != SolveStatus::optimal) {
        throw std::runtime_error(fmt::format("agent {} ({}): multiplier step returned {}", agent_id,
                                             a.base.name, to_string(sol.status)));
    }
    const int n = a.base.size();
    const int D = a.eta_dim();
    s.mu = sol.duals.tail(D).cwiseMax(0.0);
    s.z = sol.x.head(n);
    s.eta_relaxed = sol.x.tail(D);
    s.relaxed_value = sol.value;
    s.basis = std::move(sol.basis);
}

void exchange_and_update(std::vector<AgentState>& states, const CommGraph& graph, double alpha)
{
    if (static_cast<int>(states.size()) != graph.n) {
        throw std::invalid_argument("exchange_and_update: one state per graph node required");
    }
    // Edge-wise antisymmetric transfers keep sum_i y_i fixed up to rounding.
    std::vector<Vector> delta(states.size(), Vector::Zero(states.empty() ? 0 : states[0].y.size()));
    for (auto [i, j] : graph.edges) {
        const Vector flow = alpha * (states[i].mu - states[j].mu);
        delta[i] += flow;
        delta[j] -= flow;
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
        states[i].y += delta[i];
    }
}

void finalize_mixed_integer(const LiftedBlock& a, const Vector& d, AgentState& s,
                            const LocalOptions& opts, int agent_id)
{
    const LinearProgram lp = local_program(a, d, s.y, agent_cap(opts, s.y), false);
    const MipSolution sol = solve_milp(lp, opts.milp);
    if (sol.status != SolveStatus::optimal) {
        throw std::runtime_error(fmt::format("agent {} ({}): mixed-integer step returned {}",
                                             agent_id, a.base.name, to_string(sol.status)));
    }
    const int n = a.base.size();
    s.x = sol.x.head(n);
    s.eta = sol.x.tail(a.eta_dim());
    s.mixed_value = sol.value;
}

}  // namespace mgrid
