#include "mgrid/experiment.hpp"

#include "mgrid/csv.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <fmt/core.h>

namespace mgrid {

namespace fs = std::filesystem;

namespace {

std::ofstream open_report(const fs::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    }
    return os;
}

double var(const LocalBlock& block, const Vector& x, const std::string& name)
{
    return x[block.index(name)];
}

}  // namespace

void write_reports(const BuiltProblem& b, const std::vector<Vector>& x, const std::string& out_dir)
{
    const StochasticProblem& p = b.problem;
    const int K = p.K();
    const fs::path dir(out_dir);
    fs::create_directories(dir);

    Vector demand = Vector::Zero(K);
    Vector curtailed = Vector::Zero(K);
    Vector generators = Vector::Zero(K);
    Vector grid = Vector::Zero(K);
    Vector grid_cost = Vector::Zero(K);
    Vector discharge = Vector::Zero(K);
    Vector charge = Vector::Zero(K);
    std::vector<int> storages;

    for (int i = 0; i < p.num_agents(); ++i) {
        const LocalBlock& blk = p.agents[i].base;
        for (int k = 0; k < K; ++k) {
            const std::string u = fmt::format("u({})", k);
            switch (blk.kind) {
            case UnitKind::controllable_load: {
                const double D = -blk.A(k, blk.index(fmt::format("beta({})", k)));
                demand[k] += D;
                curtailed[k] += D * var(blk, x[i], fmt::format("beta({})", k));
                break;
            }
            case UnitKind::generator:
                generators[k] += var(blk, x[i], u);
                break;
            case UnitKind::grid:
                grid[k] += var(blk, x[i], u);
                grid_cost[k] += var(blk, x[i], fmt::format("phi({})", k));
                break;
            case UnitKind::storage: {
                const double v = var(blk, x[i], u);
                charge[k] += std::max(v, 0.0);
                discharge[k] += std::max(-v, 0.0);
                break;
            }
            case UnitKind::critical_load:
                break;
            }
        }
        if (blk.kind == UnitKind::storage) {
            storages.push_back(i);
        }
    }

    // probability-weighted exogenous profiles
    Vector renewables = Vector::Zero(K);
    Vector critical = Vector::Zero(K);
    for (int r = 0; r < p.R(); ++r) {
        const BalanceProfiles& prof = p.scenarios.realizations[r];
        for (const auto& v : prof.renewable_output) {
            renewables += p.scenarios.pi[r] * v;
        }
        for (const auto& v : prof.critical_demand) {
            critical += p.scenarios.pi[r] * v;
        }
    }

    const TimeGrid& t = b.models.time;
    {
        std::ofstream os = open_report(dir / "report_loads.csv");
        csv::Writer w(os);
        w.row({"step", "hour", "controllable_demand_kW", "curtailed_kW", "critical_demand_kW",
               "consumed_kW"});
        for (int k = 0; k < K; ++k) {
            w.field(k).field(t.hour(k)).field(demand[k]).field(curtailed[k]).field(critical[k]);
            w.field(demand[k] - curtailed[k] + critical[k]);
            w.end_row();
        }
    }
    {
        std::ofstream os = open_report(dir / "report_storage.csv");
        csv::Writer w(os);
        w.field("step").field("hour");
        for (int i : storages) {
            w.field(b.agents[i].name + "_power_kW").field(b.agents[i].name + "_level_kWh");
        }
        w.end_row();
        for (int k = 0; k < K; ++k) {
            w.field(k).field(t.hour(k));
            for (int i : storages) {
                const LocalBlock& blk = p.agents[i].base;
                w.field(var(blk, x[i], fmt::format("u({})", k)));
                w.field(var(blk, x[i], fmt::format("x({})", k + 1)));
            }
            w.end_row();
        }
    }
    {
        std::ofstream os = open_report(dir / "report_grid.csv");
        csv::Writer w(os);
        w.row({"step", "hour", "grid_kW", "purchase_price_per_kWh", "sell_price_per_kWh", "grid_cost"});
        for (int k = 0; k < K; ++k) {
            w.field(k).field(t.hour(k)).field(grid[k]).field(b.purchase_price[k]).field(b.sell_price[k]);
            w.field(grid_cost[k]);
            w.end_row();
        }
    }
    {
        std::ofstream os = open_report(dir / "report_sources.csv");
        csv::Writer w(os);
        w.row({"step", "hour", "generators_kW", "renewables_kW", "grid_import_kW",
               "storage_discharge_kW", "fraction_generators", "fraction_renewables", "fraction_grid",
               "fraction_storage"});
        for (int k = 0; k < K; ++k) {
            const double imp = std::max(grid[k], 0.0);
            const double total = generators[k] + renewables[k] + imp + discharge[k];
            auto frac = [total](double v) { return total > 0.0 ? v / total : 0.0; };
            w.field(k).field(t.hour(k)).field(generators[k]).field(renewables[k]).field(imp).field(discharge[k]);
            w.field(frac(generators[k])).field(frac(renewables[k])).field(frac(imp)).field(frac(discharge[k]));
            w.end_row();
        }
    }
}

}  // namespace mgrid
