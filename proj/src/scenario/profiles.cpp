#include "mgrid/scenario.hpp"

#include "mgrid/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

namespace mgrid {

namespace {

struct Validator {
    void operator()(const SolarModel& m) const
    {
        if (!(m.peak_kW >= 0.0)) {
            throw std::invalid_argument(fmt::format("solar peak_kW = {} must be >= 0", m.peak_kW));
        }
        if (!(m.window_start_h < m.window_end_h)) {
            throw std::invalid_argument("solar window_start_h must be < window_end_h");
        }
        if (!(m.cloud_sigma >= 0.0)) {
            throw std::invalid_argument("solar cloud_sigma must be >= 0");
        }
    }
    void operator()(const WindModel& m) const
    {
        if (!(m.mean_kW >= 0.0)) {
            throw std::invalid_argument(fmt::format("wind mean_kW = {} must be >= 0", m.mean_kW));
        }
        if (!(m.rho >= 0.0 && m.rho < 1.0)) {
            throw std::invalid_argument(fmt::format("wind rho = {} must be in [0, 1)", m.rho));
        }
        if (!(m.sigma_kW >= 0.0)) {
            throw std::invalid_argument("wind sigma_kW must be >= 0");
        }
    }
    void operator()(const DemandModel& m) const
    {
        if (!(m.base_kW >= 0.0 && m.peak_kW >= 0.0)) {
            throw std::invalid_argument("demand base_kW and peak_kW must be >= 0");
        }
        if (!(m.width_h > 0.0)) {
            throw std::invalid_argument("demand width_h must be > 0");
        }
        if (!(m.sigma_kW >= 0.0)) {
            throw std::invalid_argument("demand sigma_kW must be >= 0");
        }
    }
};

double solar_shape(const SolarModel& m, double h)
{
    if (h <= m.window_start_h || h >= m.window_end_h) {
        return 0.0;
    }
    const double phase = (h - m.window_start_h) / (m.window_end_h - m.window_start_h);
    return m.peak_kW * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * phase));
}

double demand_shape(const DemandModel& m, double h)
{
    // distance on the 24 h circle so evening peaks also raise early hours
    double dh = std::fabs(h - m.peak_hour);
    dh = std::min(dh, 24.0 - dh);
    return m.base_kW + m.peak_kW * std::exp(-dh * dh / (2.0 * m.width_h * m.width_h));
}

}  // namespace

double TimeGrid::hour(int k) const { return std::fmod(start_hour + k, 24.0); }

void validate(const ProfileModel& m) { std::visit(Validator{}, m); }

Vector base_profile(const ProfileModel& model, const TimeGrid& t)
{
    validate(model);
    Vector out(t.K);
    for (int k = 0; k < t.K; ++k) {
        const double h = t.hour(k);
        out[k] = std::visit(
            [h](const auto& m) -> double {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, SolarModel>) {
                    return solar_shape(m, h);
                } else if constexpr (std::is_same_v<T, WindModel>) {
                    return m.mean_kW;
                } else {
                    return demand_shape(m, h);
                }
            },
            model);
    }
    return out;
}

Vector sample_profile(const ProfileModel& model, const TimeGrid& t, std::uint64_t seed)
{
    Vector out = base_profile(model, t);
    Rng rng(seed);
    if (const auto* s = std::get_if<SolarModel>(&model)) {
        for (int k = 0; k < t.K; ++k) {
            const double f = std::clamp(1.0 - s->cloud_sigma * std::fabs(rng.normal()), 0.0, 1.0);
            out[k] *= f;
        }
    } else if (const auto* w = std::get_if<WindModel>(&model)) {
        const double sd0 = w->sigma_kW / std::sqrt(1.0 - w->rho * w->rho);
        double dev = sd0 * rng.normal();
        for (int k = 0; k < t.K; ++k) {
            if (k > 0) {
                dev = w->rho * dev + w->sigma_kW * rng.normal();
            }
            out[k] = std::max(0.0, w->mean_kW + dev);
        }
    } else {
        const auto& d = std::get<DemandModel>(model);
        for (int k = 0; k < t.K; ++k) {
            out[k] = std::max(0.0, out[k] + d.sigma_kW * rng.normal());
        }
    }
    return out;
}

}  // namespace mgrid
