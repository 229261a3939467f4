#include "mgrid/scenario.hpp"

#include "mgrid/csv.hpp"
#include "mgrid/rng.hpp"

#include <ostream>

#include <fmt/core.h>

namespace mgrid {

PiMode parse_pi_mode(const std::string& s)
{
    if (s == "uniform") {
        return PiMode::uniform;
    }
    if (s == "random") {
        return PiMode::random;
    }
    throw std::invalid_argument(fmt::format("unknown probability mode '{}'", s));
}

std::string to_string(PiMode m) { return m == PiMode::uniform ? "uniform" : "random"; }

namespace {

std::vector<double> make_pi(int R, PiMode mode, std::uint64_t seed)
{
    std::vector<double> pi(R, 1.0 / R);
    if (mode == PiMode::random) {
        Rng rng(derive_seed(seed, 0x70u));
        double total = 0.0;
        for (double& p : pi) {
            p = 0.5 + rng.uniform();
            total += p;
        }
        for (double& p : pi) {
            p /= total;
        }
    }
    // the last weight absorbs rounding so the sum is exact to one ulp
    double head = 0.0;
    for (int r = 0; r + 1 < R; ++r) {
        head += pi[r];
    }
    pi[R - 1] = 1.0 - head;
    return pi;
}

}  // namespace

ScenarioSet sample_scenarioset(const ScenarioModels& models, const std::vector<double>& pi,
                               std::uint64_t seed)
{
    const int R = static_cast<int>(pi.size());
    if (R < 1) {
        throw std::invalid_argument("scenario count R must be >= 1");
    }
    const int K = models.time.K;
    for (const auto& f : models.controllable_forecasts) {
        if (f.size() != K) {
            throw std::invalid_argument("controllable forecast length differs from K");
        }
    }
    std::vector<BalanceProfiles> realizations;
    realizations.reserve(R);
    for (int r = 0; r < R; ++r) {
        const std::uint64_t scen_seed = derive_seed(seed, static_cast<std::uint64_t>(r));
        BalanceProfiles p;
        p.controllable_demand = models.controllable_forecasts;
        std::uint64_t unit = 0;
        for (const auto& u : models.renewables) {
            p.renewable_output.push_back(sample_profile(u.model, models.time, derive_seed(scen_seed, unit++)));
        }
        for (const auto& u : models.critical_loads) {
            p.critical_demand.push_back(sample_profile(u.model, models.time, derive_seed(scen_seed, unit++)));
        }
        realizations.push_back(std::move(p));
    }
    return make_scenario_set(pi, std::move(realizations), K);
}

ScenarioSet sample_scenarioset(const ScenarioModels& models, int R, PiMode mode, std::uint64_t seed)
{
    if (R < 1) {
        throw std::invalid_argument("scenario count R must be >= 1");
    }
    return sample_scenarioset(models, make_pi(R, mode, seed), seed);
}

void write_scenarios_csv(std::ostream& os, const ScenarioSet& s, const ScenarioModels& models)
{
    csv::Writer w(os);
    w.field("scenario").field("step").field("hour").field("pi");
    for (const auto& u : models.renewables) {
        w.field(u.name + "_kW");
    }
    for (const auto& u : models.critical_loads) {
        w.field(u.name + "_kW");
    }
    w.field("b_kW");
    w.end_row();
    for (int r = 0; r < s.size(); ++r) {
        const BalanceProfiles& p = s.realizations[r];
        for (int k = 0; k < s.K; ++k) {
            w.field(r).field(k).field(models.time.hour(k)).field(s.pi[r]);
            for (const auto& v : p.renewable_output) {
                w.field(v[k]);
            }
            for (const auto& v : p.critical_demand) {
                w.field(v[k]);
            }
            w.field(s.b[r][k]);
            w.end_row();
        }
    }
}

}  // namespace mgrid
