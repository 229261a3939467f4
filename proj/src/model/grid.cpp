#include "mgrid/model.hpp"

#include "model/block_builder.hpp"

#include <algorithm>

#include <fmt/core.h>

namespace mgrid {

void GridParams::validate(int K) const
{
    if (!(P_max >= 0.0)) {
        throw ParameterError(fmt::format("grid P_max = {} must be >= 0", P_max));
    }
    if (static_cast<int>(phi_p.size()) != K || static_cast<int>(phi_s.size()) != K) {
        throw ParameterError(fmt::format("grid price profiles have lengths {}/{}, expected K = {}",
                                         phi_p.size(), phi_s.size(), K));
    }
    for (int k = 0; k < K; ++k) {
        if (!(phi_p[k] >= 0.0) || !(phi_s[k] >= 0.0)) {
            throw ParameterError(fmt::format("grid prices at step {} must be >= 0", k));
        }
    }
    if (!(epsilon > 0.0)) {
        throw ParameterError(fmt::format("grid epsilon = {} must be > 0", epsilon));
    }
}

double GridParams::big_m() const
{
    double top = 0.0;
    for (std::size_t k = 0; k < phi_p.size(); ++k) {
        top = std::max({top, phi_p[k], phi_s[k]});
    }
    return P_max * top;
}

LogicMatrices grid_logic_matrices(double P_max, double M, double phi_p, double phi_s,
                                  double epsilon)
{
    return LogicMatrices{
        {P_max, -P_max - epsilon, M, M, -M, -M},
        {0.0, 0.0, 1.0, -1.0, 1.0, -1.0},
        {1.0, -1.0, phi_p, -phi_p, phi_s, -phi_s},
        {P_max, -epsilon, M, M, 0.0, 0.0},
    };
}

LocalBlock build_grid_block(const GridParams& p, int K, std::string name)
{
    if (K < 1) {
        throw ParameterError(fmt::format("horizon K = {} must be >= 1", K));
    }
    p.validate(K);
    const double M = p.big_m();
    detail::BlockBuilder b(UnitKind::grid, std::move(name), K);
    std::vector<int> u(K);
    std::vector<int> phi(K);
    std::vector<int> delta(K);
    for (int k = 0; k < K; ++k) {
        u[k] = b.add_var(fmt::format("u({})", k), -p.P_max, p.P_max, 0.0);
    }
    for (int k = 0; k < K; ++k) {
        phi[k] = b.add_var(fmt::format("phi({})", k), -M, M, 1.0);
    }
    for (int k = 0; k < K; ++k) {
        delta[k] = b.add_var(fmt::format("delta({})", k), 0.0, 1.0, 0.0, true);
    }
    for (int k = 0; k < K; ++k) {
        const LogicMatrices E = grid_logic_matrices(p.P_max, M, p.phi_p[k], p.phi_s[k], p.epsilon);
        for (int r = 0; r < 6; ++r) {
            b.add_row({{delta[k], E.E1[r]}, {phi[k], E.E2[r]}, {u[k], -E.E3[r]}}, E.E4[r]);
        }
        b.set_coupling(k, u[k], -1.0);
    }
    return b.finish();
}

}  // namespace mgrid
