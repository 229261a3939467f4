#include "mgrid/model.hpp"

#include "model/block_builder.hpp"

#include <fmt/core.h>

namespace mgrid {

void ControllableLoadParams::validate(int K) const
{
    if (!(beta_min >= 0.0)) {
        throw ParameterError(fmt::format("load beta_min = {} must be >= 0", beta_min));
    }
    if (!(beta_min <= beta_max)) {
        throw ParameterError(
            fmt::format("load beta_min = {} must be <= beta_max = {}", beta_min, beta_max));
    }
    if (!(beta_max <= 1.0)) {
        throw ParameterError(fmt::format("load beta_max = {} must be <= 1", beta_max));
    }
    if (static_cast<int>(D.size()) != K) {
        throw ParameterError(fmt::format("load D has length {}, expected K = {}", D.size(), K));
    }
    for (std::size_t k = 0; k < D.size(); ++k) {
        if (!(D[k] >= 0.0)) {
            throw ParameterError(fmt::format("load D({}) = {} must be >= 0", k, D[k]));
        }
    }
    if (!(varphi > 0.0)) {
        throw ParameterError(fmt::format("load varphi = {} must be > 0", varphi));
    }
}

LocalBlock build_controllable_load_block(const ControllableLoadParams& p, int K, std::string name)
{
    if (K < 1) {
        throw ParameterError(fmt::format("horizon K = {} must be >= 1", K));
    }
    p.validate(K);
    detail::BlockBuilder b(UnitKind::controllable_load, std::move(name), K);
    for (int k = 0; k < K; ++k) {
        const int beta =
            b.add_var(fmt::format("beta({})", k), p.beta_min, p.beta_max, p.varphi * p.D[k]);
        b.set_coupling(k, beta, -p.D[k]);
    }
    return b.finish();
}

Vector power_balance_rhs(const BalanceProfiles& profiles, int K)
{
    Vector b = Vector::Zero(K);
    auto accumulate = [&](const std::vector<Vector>& list, double sign, const char* what) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (list[i].size() != K) {
                throw std::invalid_argument(fmt::format("{} profile {} has length {}, expected {}",
                                                        what, i, list[i].size(), K));
            }
            b += sign * list[i];
        }
    };
    accumulate(profiles.controllable_demand, -1.0, "controllable demand");
    accumulate(profiles.critical_demand, -1.0, "critical demand");
    accumulate(profiles.renewable_output, 1.0, "renewable");
    return b;
}

}  // namespace mgrid
