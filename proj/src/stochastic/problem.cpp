#include "mgrid/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace mgrid {

StochasticProblem make_stochastic_problem(std::vector<LocalBlock> blocks, ScenarioSet scen,
                                          double q_plus, double q_minus)
{
    scen.validate();
    StochasticProblem p;
    const int R = scen.size();
    for (auto& b : blocks) {
        if (b.horizon != scen.K) {
            throw std::invalid_argument(fmt::format("block '{}' has horizon {}, scenarios have K = {}",
                                                    b.name, b.horizon, scen.K));
        }
        p.agents.push_back(lift_block(std::move(b), R));
    }
    p.recourse = build_recourse_cost(scen.pi, q_plus, q_minus, scen.K);
    p.h = build_h(scen);
    p.scenarios = std::move(scen);
    return p;
}

double coupling_radius(const LiftedBlock& a)
{
    const LocalBlock& b = a.base;
    double worst = 0.0;
    for (int row = 0; row < b.horizon; ++row) {
        double s = 0.0;
        for (int j = 0; j < b.size(); ++j) {
            if (b.A(row, j) != 0.0) {
                s += std::abs(b.A(row, j)) * std::max(std::abs(b.lower[j]), std::abs(b.upper[j]));
            }
        }
        worst = std::max(worst, s);
    }
    return worst;
}

double recourse_big_m(const StochasticProblem& p)
{
    double radius = 0.0;
    for (const auto& a : p.agents) {
        radius += coupling_radius(a);
    }
    const double hmax = p.h.size() ? p.h.cwiseAbs().maxCoeff() : 0.0;
    return 2.0 * (hmax + radius);
}

namespace {


// Writes the block-diagonal local part and returns column offsets.
std::vector<int> place_blocks(const StochasticProblem& p, LinearProgram& lp, int n_total, int m_total,
                              bool relaxed)
{
    lp.cost = Vector::Zero(n_total);
    lp.lower = Vector::Zero(n_total);
    lp.upper = Vector::Zero(n_total);
    lp.rows = Matrix::Zero(m_total, n_total);
    lp.rhs = Vector::Zero(m_total);
    lp.integer.assign(n_total, false);
    std::vector<int> offsets;
    int col = 0;
    int row = 0;
    for (const auto& a : p.agents) {
        const LocalBlock& b = a.base;
        offsets.push_back(col);
        const int n = b.size();
        if (n > 0) {
            lp.cost.segment(col, n) = b.cost;
            lp.lower.segment(col, n) = b.lower;
            lp.upper.segment(col, n) = b.upper;
            lp.rows.block(row, col, b.num_rows(), n) = b.G;
            lp.rhs.segment(row, b.num_rows()) = b.g;
            for (int j = 0; j < n; ++j) {
                lp.integer[col + j] = !relaxed && b.integral[j];
            }
        }
        col += n;
        row += b.num_rows();
    }
    return offsets;
}

std::pair<int, int> local_size(const StochasticProblem& p)
{
    int n = 0;
    int m = 0;
    for (const auto& a : p.agents) {
        n += a.base.size();
        m += a.base.num_rows();
    }
    return {n, m};
}

}  // namespace

CentralLp build_streamlined(const StochasticProblem& p, bool relaxed)
{
    const auto [n, m] = local_size(p);
    const int D = p.dim();
    CentralLp out;
    out.x_offset = place_blocks(p, out.lp, n + D, m + D, relaxed);
    out.coupling_row = m;
    out.eta_offset = {n};
    for (std::size_t i = 0; i < p.agents.size(); ++i) {
        const auto& a = p.agents[i];
        if (a.base.size() > 0) {
            out.lp.rows.block(m, out.x_offset[i], D, a.base.size()) = a.H;
        }
    }
    out.lp.rows.block(m, n, D, D) = -Matrix::Identity(D, D);
    out.lp.rhs.segment(m, D) = p.h;
    out.lp.cost.segment(n, D) = p.recourse.d;
    out.lp.upper.segment(n, D).setConstant(kInf);
    return out;
}

CentralLp build_distributed_form(const StochasticProblem& p, bool relaxed)
{
    const auto [n, m] = local_size(p);
    const int D = p.dim();
    const int N = p.num_agents();
    CentralLp out;
    out.x_offset = place_blocks(p, out.lp, n + N * D, m + D, relaxed);
    out.coupling_row = m;
    for (int i = 0; i < N; ++i) {
        const auto& a = p.agents[i];
        if (a.base.size() > 0) {
            out.lp.rows.block(m, out.x_offset[i], D, a.base.size()) = a.H;
        }
        const int e = n + i * D;
        out.eta_offset.push_back(e);
        out.lp.rows.block(m, e, D, D) = -Matrix::Identity(D, D);
        out.lp.cost.segment(e, D) = p.recourse.d;
        out.lp.upper.segment(e, D).setConstant(kInf);
    }
    out.lp.rhs.segment(m, D) = p.h;
    return out;
}

CentralLp build_band_form(const StochasticProblem& p, bool relaxed)
{
    const auto [n, m] = local_size(p);
    const int K = p.K();
    const int R = p.R();
    const int D = 2 * K * R;
    CentralLp out;
    out.x_offset = place_blocks(p, out.lp, n + D, m + D, relaxed);
    out.coupling_row = m;
    out.eta_offset = {n};
    int row = m;
    for (int k = 0; k < K; ++k) {
        for (int r = 0; r < R; ++r) {
            const int ep = n + 2 * (k * R + r);
            const int em = ep + 1;
            // [sum A x]_k - eta_plus <= b_r(k)  and  -[sum A x]_k - eta_minus <= -b_r(k)
            for (std::size_t i = 0; i < p.agents.size(); ++i) {
                const LocalBlock& b = p.agents[i].base;
                for (int j = 0; j < b.size(); ++j) {
                    out.lp.rows(row, out.x_offset[i] + j) = b.A(k, j);
                    out.lp.rows(row + 1, out.x_offset[i] + j) = -b.A(k, j);
                }
            }
            out.lp.rows(row, ep) = -1.0;
            out.lp.rows(row + 1, em) = -1.0;
            out.lp.rhs[row] = p.scenarios.b[r][k];
            out.lp.rhs[row + 1] = -p.scenarios.b[r][k];
            out.lp.cost[ep] = p.scenarios.pi[r] * p.recourse.q_plus;
            out.lp.cost[em] = p.scenarios.pi[r] * p.recourse.q_minus;
            out.lp.upper[ep] = kInf;
            out.lp.upper[em] = kInf;
            row += 2;
        }
    }
    return out;
}

Vector coupling_value(const StochasticProblem& p, const std::vector<Vector>& x,
                      const std::vector<Vector>& eta)
{
    if (static_cast<int>(x.size()) != p.num_agents() || x.size() != eta.size()) {
        throw std::invalid_argument("coupling_value: one x and one eta per agent required");
    }
    Vector v = -p.h;
    for (int i = 0; i < p.num_agents(); ++i) {
        if (p.agents[i].base.size() > 0) {
            v += p.agents[i].H * x[i];
        }
        v -= eta[i];
    }
    return v;
}

}  // namespace mgrid
