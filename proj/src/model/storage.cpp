#include "mgrid/model.hpp"

#include "model/block_builder.hpp"

#include <fmt/core.h>

namespace mgrid {

void StorageParams::validate() const
{
    // Unit efficiencies are admitted for lossless test fixtures.
    if (!(eta_c > 0.0 && eta_c <= 1.0)) {
        throw ParameterError(fmt::format("storage eta_c = {} must lie in (0, 1]", eta_c));
    }
    if (!(eta_d > 0.0 && eta_d <= 1.0)) {
        throw ParameterError(fmt::format("storage eta_d = {} must lie in (0, 1]", eta_d));
    }
    if (!(x_min > 0.0)) {
        throw ParameterError(fmt::format("storage x_min = {} must be > 0", x_min));
    }
    if (!(x_min < x_max)) {
        throw ParameterError(fmt::format("storage x_min = {} must be < x_max = {}", x_min, x_max));
    }
    if (!(x_pl >= 0.0)) {
        throw ParameterError(fmt::format("storage x_pl = {} must be >= 0", x_pl));
    }
    if (!(C > 0.0)) {
        throw ParameterError(fmt::format("storage C = {} must be > 0", C));
    }
    if (!(zeta >= 0.0)) {
        throw ParameterError(fmt::format("storage zeta = {} must be >= 0", zeta));
    }
    if (!(x0 >= x_min && x0 <= x_max)) {
        throw ParameterError(
            fmt::format("storage x0 = {} must lie in [x_min, x_max] = [{}, {}]", x0, x_min, x_max));
    }
    if (!(epsilon > 0.0)) {
        throw ParameterError(fmt::format("storage epsilon = {} must be > 0", epsilon));
    }
}

LogicMatrices storage_logic_matrices(double C, double epsilon)
{
    return LogicMatrices{
        {C, -(C + epsilon), C, C, -C, -C},
        {0.0, 0.0, 1.0, -1.0, 1.0, -1.0},
        {1.0, -1.0, 1.0, -1.0, 0.0, 0.0},
        {C, -epsilon, C, C, 0.0, 0.0},
    };
}

LocalBlock build_storage_block(const StorageParams& p, int K, std::string name)
{
    if (K < 1) {
        throw ParameterError(fmt::format("horizon K = {} must be >= 1", K));
    }
    p.validate();
    detail::BlockBuilder b(UnitKind::storage, std::move(name), K);

    std::vector<int> x(K + 1);
    std::vector<int> u(K);
    std::vector<int> z(K);
    std::vector<int> delta(K);
    for (int k = 0; k <= K; ++k) {
        const double lo = k == 0 ? p.x0 : p.x_min;
        const double hi = k == 0 ? p.x0 : p.x_max;
        x[k] = b.add_var(fmt::format("x({})", k), lo, hi, 0.0);
    }
    // |u| = 2z - u under the logic rows
    for (int k = 0; k < K; ++k) {
        u[k] = b.add_var(fmt::format("u({})", k), -p.C, p.C, -p.zeta);
    }
    for (int k = 0; k < K; ++k) {
        z[k] = b.add_var(fmt::format("z({})", k), -p.C, p.C, 2.0 * p.zeta);
    }
    for (int k = 0; k < K; ++k) {
        delta[k] = b.add_var(fmt::format("delta({})", k), 0.0, 1.0, 0.0, true);
    }

    const double inv_d = 1.0 / p.eta_d;
    const LogicMatrices E = storage_logic_matrices(p.C, p.epsilon);
    for (int k = 0; k < K; ++k) {
        // x(k+1) = x(k) + (eta_c - 1/eta_d) z(k) + (1/eta_d) u(k) - x_pl
        b.add_equality({{x[k + 1], 1.0}, {x[k], -1.0}, {z[k], -(p.eta_c - inv_d)}, {u[k], -inv_d}},
                       -p.x_pl);
        for (int r = 0; r < 6; ++r) {
            b.add_row({{delta[k], E.E1[r]}, {z[k], E.E2[r]}, {u[k], -E.E3[r]}}, E.E4[r]);
        }
        b.set_coupling(k, u[k], 1.0);
    }
    return b.finish();
}

}  // namespace mgrid
