#include "mgrid/model.hpp"

#include "model/block_builder.hpp"

#include <algorithm>

#include <fmt/core.h>

namespace mgrid {

std::vector<CostSegment> secant_segments(double a, double b, double u_lo, double u_hi, int count)
{
    if (count < 1) {
        throw ParameterError(fmt::format("segment count = {} must be >= 1", count));
    }
    if (!(u_lo <= u_hi)) {
        throw ParameterError(fmt::format("segment range [{}, {}] is empty", u_lo, u_hi));
    }
    auto f = [&](double u) { return a * u * u + b * u; };
    if (u_lo == u_hi) {
        return {CostSegment{0.0, f(u_lo)}};
    }
    std::vector<CostSegment> out;
    const double step = (u_hi - u_lo) / count;
    for (int l = 0; l < count; ++l) {
        const double u0 = u_lo + l * step;
        const double u1 = l + 1 == count ? u_hi : u0 + step;
        const double slope = (f(u1) - f(u0)) / (u1 - u0);
        out.push_back(CostSegment{slope, f(u0) - slope * u0});
    }
    return out;
}

void GeneratorParams::validate(int K) const
{
    if (T_up < 1 || T_down < 1) {
        throw ParameterError(
            fmt::format("generator T_up = {}, T_down = {} must be >= 1", T_up, T_down));
    }
    if (!(u_min >= 0.0)) {
        throw ParameterError(fmt::format("generator u_min = {} must be >= 0", u_min));
    }
    if (!(u_min <= u_max)) {
        throw ParameterError(
            fmt::format("generator u_min = {} must be <= u_max = {}", u_min, u_max));
    }
    if (!(r_max >= 0.0)) {
        throw ParameterError(fmt::format("generator r_max = {} must be >= 0", r_max));
    }
    if (static_cast<int>(kappa_u.size()) != K || static_cast<int>(kappa_d.size()) != K) {
        throw ParameterError(fmt::format("generator kappa profiles have lengths {}/{}, expected K = {}",
                                         kappa_u.size(), kappa_d.size(), K));
    }
    for (int k = 0; k < K; ++k) {
        if (!(kappa_u[k] > 0.0) || !(kappa_d[k] > 0.0)) {
            throw ParameterError(fmt::format("generator kappa at step {} must be > 0", k));
        }
    }
    if (!(zeta >= 0.0)) {
        throw ParameterError(fmt::format("generator zeta = {} must be >= 0", zeta));
    }
    if (cost_segments.empty()) {
        throw ParameterError("generator needs at least one cost segment");
    }
    if (delta_init != 0 && delta_init != 1) {
        throw ParameterError(fmt::format("generator delta_init = {} must be 0 or 1", delta_init));
    }
    if (!(u_init >= 0.0 && u_init <= u_max)) {
        throw ParameterError(
            fmt::format("generator u_init = {} must lie in [0, u_max = {}]", u_init, u_max));
    }
    if ((u_init > 0.0) != (delta_init == 1)) {
        throw ParameterError(fmt::format(
            "generator initial state inconsistent: u_init = {} with delta_init = {}", u_init,
            delta_init));
    }
}

LocalBlock build_generator_block(const GeneratorParams& p, int K, std::string name)
{
    if (K < 1) {
        throw ParameterError(fmt::format("horizon K = {} must be >= 1", K));
    }
    p.validate(K);
    detail::BlockBuilder b(UnitKind::generator, std::move(name), K);

    // Range of max_l (S u + s) over u in [0, u_max].
    double nu_lo = -kInf;
    double nu_hi = -kInf;
    for (const auto& seg : p.cost_segments) {
        const double at0 = seg.intercept;
        const double at1 = seg.slope * p.u_max + seg.intercept;
        nu_lo = std::max(nu_lo, std::min(at0, at1));
        nu_hi = std::max(nu_hi, std::max(at0, at1));
    }

    std::vector<int> u(K), delta(K), nu(K), th_u(K), th_d(K);
    for (int k = 0; k < K; ++k) {
        u[k] = b.add_var(fmt::format("u({})", k), 0.0, p.u_max, 0.0);
    }
    for (int k = 0; k < K; ++k) {
        delta[k] = b.add_var(fmt::format("delta({})", k), 0.0, 1.0, p.zeta, true);
    }
    for (int k = 0; k < K; ++k) {
        nu[k] = b.add_var(fmt::format("nu({})", k), nu_lo, nu_hi, 1.0);
    }
    for (int k = 0; k < K; ++k) {
        th_u[k] = b.add_var(fmt::format("theta_u({})", k), 0.0, p.kappa_u[k], 1.0);
    }
    for (int k = 0; k < K; ++k) {
        th_d[k] = b.add_var(fmt::format("theta_d({})", k), 0.0, p.kappa_d[k], 1.0);
    }

    const double d_prev0 = p.delta_init;
    for (int k = 0; k < K; ++k) {
        // delta(k-1) is a constant at k = 0; it moves to the right-hand side.
        auto with_prev = [&](std::vector<detail::Term> terms, double prev_coef, double rhs) {
            if (k == 0) {
                rhs -= prev_coef * d_prev0;
            } else {
                terms.push_back({delta[k - 1], prev_coef});
            }
            b.add_row(std::move(terms), rhs);
        };
        // minimum up time: delta(k) - delta(k-1) <= delta(tau)
        for (int tau = k + 1; tau <= std::min(k + p.T_up - 1, K - 1); ++tau) {
            with_prev({{delta[k], 1.0}, {delta[tau], -1.0}}, -1.0, 0.0);
        }
        // minimum down time: delta(k-1) - delta(k) <= 1 - delta(tau)
        for (int tau = k + 1; tau <= std::min(k + p.T_down - 1, K - 1); ++tau) {
            with_prev({{delta[k], -1.0}, {delta[tau], 1.0}}, 1.0, 1.0);
        }
        // u_min delta <= u <= u_max delta
        b.add_row({{delta[k], p.u_min}, {u[k], -1.0}}, 0.0);
        b.add_row({{u[k], 1.0}, {delta[k], -p.u_max}}, 0.0);
        // -r delta(k) <= u(k) - u(k-1) <= r delta(k)
        if (k == 0) {
            b.add_row({{u[k], 1.0}, {delta[k], -p.r_max}}, p.u_init);
            b.add_row({{u[k], -1.0}, {delta[k], -p.r_max}}, -p.u_init);
        } else {
            b.add_row({{u[k], 1.0}, {u[k - 1], -1.0}, {delta[k], -p.r_max}}, 0.0);
            b.add_row({{u[k], -1.0}, {u[k - 1], 1.0}, {delta[k], -p.r_max}}, 0.0);
        }
        for (const auto& seg : p.cost_segments) {
            b.add_row({{u[k], seg.slope}, {nu[k], -1.0}}, -seg.intercept);
        }
        // theta_u >= kappa_u (delta(k) - delta(k-1)), theta_d >= kappa_d (delta(k-1) - delta(k))
        with_prev({{delta[k], p.kappa_u[k]}, {th_u[k], -1.0}}, -p.kappa_u[k], 0.0);
        with_prev({{delta[k], -p.kappa_d[k]}, {th_d[k], -1.0}}, p.kappa_d[k], 0.0);
        b.set_coupling(k, u[k], -1.0);
    }
    return b.finish();
}

}  // namespace mgrid
