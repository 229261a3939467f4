#include "mgrid/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/core.h>

namespace mgrid {

void ScenarioSet::validate() const
{
    if (b.empty()) {
        throw std::invalid_argument("scenario set is empty");
    }
    if (pi.size() != b.size()) {
        throw std::invalid_argument(
            fmt::format("scenario set has {} probabilities for {} scenarios", pi.size(), b.size()));
    }
    double total = 0.0;
    for (std::size_t r = 0; r < pi.size(); ++r) {
        if (!(pi[r] >= 0.0)) {
            throw std::invalid_argument(fmt::format("pi[{}] = {} is negative", r, pi[r]));
        }
        total += pi[r];
        if (b[r].size() != K) {
            throw std::invalid_argument(
                fmt::format("b[{}] has length {}, expected K = {}", r, b[r].size(), K));
        }
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument(fmt::format("probabilities sum to {:.17g}", total));
    }
}

ScenarioSet make_scenario_set(std::vector<double> pi, std::vector<BalanceProfiles> realizations,
                              int K)
{
    ScenarioSet s;
    s.K = K;
    s.pi = std::move(pi);
    for (const auto& prof : realizations) {
        s.b.push_back(power_balance_rhs(prof, K));
    }
    s.realizations = std::move(realizations);
    s.validate();
    return s;
}

RecourseCost build_recourse_cost(const std::vector<double>& pi, double q_plus, double q_minus,
                                 int K)
{
    if (!(q_plus >= 0.0) || !(q_minus >= 0.0)) {
        throw std::invalid_argument(
            fmt::format("recourse penalties q_plus = {}, q_minus = {} must be >= 0", q_plus, q_minus));
    }
    const int R = static_cast<int>(pi.size());
    RecourseCost rc;
    rc.q_plus = q_plus;
    rc.q_minus = q_minus;
    rc.K = K;
    rc.d = Vector::Zero(2 * R * K);
    for (int r = 0; r < R; ++r) {
        for (int k = 0; k < K; ++k) {
            rc.d[plus_row(K, r, k)] = pi[r] * q_plus;
            rc.d[minus_row(K, r, k)] = pi[r] * q_minus;
        }
    }
    return rc;
}

double expected_recourse(const RecourseCost& rc, const Vector& eta)
{
    if (eta.size() != rc.d.size()) {
        throw std::invalid_argument("expected_recourse: dimension mismatch");
    }
    return rc.d.dot(eta);
}

double recourse_phi(double z, double q_plus, double q_minus)
{
    return z >= 0.0 ? q_plus * z : -q_minus * z;
}

Matrix balance_residuals(const Vector& supply, const ScenarioSet& scen)
{
    if (supply.size() != scen.K) {
        throw std::invalid_argument("balance_residuals: supply length differs from K");
    }
    Matrix res(scen.K, scen.size());
    for (int r = 0; r < scen.size(); ++r) {
        res.col(r) = supply - scen.b[r];
    }
    return res;
}

Vector implied_recourse(const Vector& v, const Vector& h)
{
    return (v - h).cwiseMax(0.0);
}

LiftedBlock lift_block(LocalBlock block, int R)
{
    if (R < 1) {
        throw std::invalid_argument(fmt::format("scenario count R = {} must be >= 1", R));
    }
    const int K = block.horizon;
    LiftedBlock out;
    out.R = R;
    out.H.resize(2 * R * K, block.size());
    for (int r = 0; r < R; ++r) {
        out.H.middleRows(plus_row(K, r, 0), K) = block.A;
        out.H.middleRows(minus_row(K, r, 0), K) = -block.A;
    }
    out.base = std::move(block);
    return out;
}

Vector build_h(const ScenarioSet& scen)
{
    scen.validate();
    const int K = scen.K;
    Vector h(2 * scen.size() * K);
    for (int r = 0; r < scen.size(); ++r) {
        h.segment(plus_row(K, r, 0), K) = scen.b[r];
        h.segment(minus_row(K, r, 0), K) = -scen.b[r];
    }
    return h;
}

std::vector<Vector> split_recourse(const Vector& eta, int N)
{
    if (N < 1) {
        throw std::invalid_argument("split_recourse: N must be >= 1");
    }
    return split_recourse(eta, std::vector<double>(N, 1.0));
}

std::vector<Vector> split_recourse(const Vector& eta, const std::vector<double>& weights)
{
    if (eta.size() > 0 && eta.minCoeff() < 0.0) {
        throw std::invalid_argument("split_recourse: eta has a negative entry");
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (weights.empty() || !(total > 0.0) ||
        std::any_of(weights.begin(), weights.end(), [](double w) { return !(w >= 0.0); })) {
        throw std::invalid_argument("split_recourse: weights must be >= 0 with a positive sum");
    }
    std::vector<Vector> parts;
    Vector rest = eta;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        Vector part = (weights[i] / total) * eta;
        part = part.cwiseMin(rest).cwiseMax(0.0);
        rest -= part;
        parts.push_back(std::move(part));
    }
    parts.push_back(rest.cwiseMax(0.0));
    return parts;
}

}  // namespace mgrid
