#include "mgrid/dialgo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace mgrid {

TraceRow evaluate_solution(const StochasticProblem& p, const std::vector<Vector>& x,
                           const std::vector<Vector>& eta)
{
    const int K = p.K();
    const int R = p.R();
    TraceRow row;
    Vector supply = Vector::Zero(K);
    Vector eta_total = Vector::Zero(p.dim());
    double cost = 0.0;
    for (int i = 0; i < p.num_agents(); ++i) {
        const LocalBlock& b = p.agents[i].base;
        if (b.size() > 0) {
            supply += b.A * x[i];
            cost += b.cost.dot(x[i]);
        }
        eta_total += eta[i];
    }
    row.incumbent_cost = cost + p.recourse.d.dot(eta_total);

    const Matrix res = balance_residuals(supply, p.scenarios);
    row.max_violation_pos = std::max(0.0, res.maxCoeff());
    row.max_violation_neg = std::min(0.0, res.minCoeff());
    const double count = static_cast<double>(res.size());
    row.mean_residual = res.sum() / count;
    row.std_residual = std::sqrt((res.array() - row.mean_residual).square().sum() / count);

    double plus = 0.0;
    double minus = 0.0;
    double expected = 0.0;
    for (int r = 0; r < R; ++r) {
        for (int k = 0; k < K; ++k) {
            plus = std::max(plus, eta_total[plus_row(K, r, k)]);
            minus = std::max(minus, eta_total[minus_row(K, r, k)]);
            expected += p.scenarios.pi[r] *
                recourse_phi(res(k, r), p.recourse.q_plus, p.recourse.q_minus);
        }
    }
    row.eta_plus_max = plus;
    row.eta_minus_max = minus;
    row.expected_recourse = expected;
    row.lifted_violation = coupling_value(p, x, eta).maxCoeff();
    return row;
}

namespace {

double allocation_residual(const std::vector<AgentState>& s, const Vector& h)
{
    Vector sum = -h;
    for (const auto& a : s) {
        sum += a.y;
    }
    return sum.size() ? sum.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

RunResult run(const StochasticProblem& p, const CommGraph& graph, const RunOptions& opts)
{
    const int N = p.num_agents();
    if (graph.n != N) {
        throw std::invalid_argument(
            fmt::format("graph has {} nodes for {} agents", graph.n, N));
    }
    if (!graph.connected()) {
        throw std::invalid_argument("communication graph is not connected");
    }
    if (opts.T_f < 0) {
        throw std::invalid_argument("T_f must be >= 0");
    }
    RunResult out;
    LocalOptions local = opts.local;
    if (!(local.eta_cap > 0.0)) {
        local.eta_cap = recourse_big_m(p);
    }
    out.eta_cap = local.eta_cap;

    out.agents.resize(N);
    const auto y0 = init_allocations(p.h, N, opts.init, opts.init_seed);
    for (int i = 0; i < N; ++i) {
        out.agents[i].y = y0[i];
    }
    auto multiplier_round = opts.parallel ? multiplier_round_parallel : multiplier_round_serial;
    auto finalize_round = opts.parallel ? finalize_round_parallel : finalize_round_serial;

    std::vector<Vector> last_logged;
    RunTrace& trace = out.trace;
    for (int t = 0; t <= opts.T_f; ++t) {
        trace.alloc_residual.push_back(allocation_residual(out.agents, p.h));
        if (opts.keep_allocations) {
            std::vector<Vector> ys;
            for (const auto& a : out.agents) {
                ys.push_back(a.y);
            }
            trace.allocations.push_back(std::move(ys));
        }
        const bool log = t == 0 || t == opts.T_f ||
            (opts.finalize_every > 0 && t % opts.finalize_every == 0);
        if (log) {
            finalize_round(p, out.agents, local);
            std::vector<Vector> xs;
            std::vector<Vector> etas;
            for (const auto& a : out.agents) {
                xs.push_back(a.x);
                etas.push_back(a.eta);
            }
            TraceRow row = evaluate_solution(p, xs, etas);
            row.iter = t;
            row.alloc_residual = trace.alloc_residual.back();
            row.allocation_step = kInf;
            if (!last_logged.empty()) {
                row.allocation_step = 0.0;
                for (int i = 0; i < N; ++i) {
                    row.allocation_step = std::max(
                        row.allocation_step, (out.agents[i].y - last_logged[i]).cwiseAbs().maxCoeff());
                }
            }
            last_logged.clear();
            for (const auto& a : out.agents) {
                last_logged.push_back(a.y);
            }
            trace.rows.push_back(row);
        }
        if (t < opts.T_f) {
            multiplier_round(p, out.agents, local);
            double total = 0.0;
            for (const auto& a : out.agents) {
                total += a.relaxed_value;
            }
            trace.relaxation_objective.push_back(total);
            exchange_and_update(out.agents, graph, opts.schedule(t));
        }
    }
    return out;
}

}  // namespace mgrid
