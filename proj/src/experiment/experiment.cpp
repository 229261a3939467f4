#include "mgrid/experiment.hpp"

#include "mgrid/csv.hpp"
#include "mgrid/rng.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <fmt/core.h>

namespace mgrid {

namespace fs = std::filesystem;

namespace {

double hourly_price(const std::vector<double>& v, const TimeGrid& t, int k)
{
    if (v.size() == 1) {
        return v.front();
    }
    return v[static_cast<std::size_t>(std::floor(t.hour(k))) % 24];
}

std::string expanded_name(const UnitSpec& u, int copy)
{
    return u.count == 1 ? u.name : fmt::format("{}_{}", u.name, copy + 1);
}

std::ofstream open_output(const fs::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    }
    return os;
}

std::vector<double> to_std(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector from_json(const nlohmann::json& j)
{
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

BuiltProblem build_problem(const ExperimentConfig& cfg)
{
    if (auto errors = validate_config(cfg); !errors.empty()) {
        throw ConfigError(std::move(errors));
    }
    BuiltProblem b;
    b.resolved = cfg;
    b.resolved.units.clear();
    b.models.time = TimeGrid{cfg.K, cfg.start_hour};
    const TimeGrid& time = b.models.time;
    const int K = cfg.K;

    b.purchase_price.resize(K);
    b.sell_price.resize(K);
    double max_price = 0.0;
    for (const UnitSpec& u : cfg.units) {
        if (const auto* g = std::get_if<GridSpec>(&u.params)) {
            for (int k = 0; k < K; ++k) {
                b.purchase_price[k] = hourly_price(g->purchase_price_per_kWh, time, k);
                b.sell_price[k] = hourly_price(g->sell_price_per_kWh, time, k);
                max_price = std::max({max_price, b.purchase_price[k], b.sell_price[k]});
            }
        }
    }

    std::vector<LocalBlock> blocks;
    std::uint64_t drawn = 0;
    for (std::size_t ui = 0; ui < cfg.units.size(); ++ui) {
        const UnitSpec& spec = cfg.units[ui];
        for (int copy = 0; copy < spec.count; ++copy) {
            UnitSpec u = spec;
            u.count = 1;
            u.name = expanded_name(spec, copy);
            Rng rng(derive_seed(cfg.seed_problem, drawn++));
            const std::string type = unit_type(u.params);
            if (auto* g = std::get_if<GeneratorSpec>(&u.params)) {
                if (!g->delta_init) {
                    g->delta_init = static_cast<int>(rng.uniform_int(2));
                    g->u_init_kW = 0.0;
                    if (*g->delta_init == 1) {
                        const double lo = std::max(g->u_min_kW, 0.1 * g->u_max_kW);
                        const double hi = std::max(lo, 0.5 * g->u_max_kW);
                        g->u_init_kW = rng.uniform(lo, hi);
                    }
                } else if (!g->u_init_kW) {
                    g->u_init_kW = 0.0;
                }
                GeneratorParams p;
                p.T_up = g->T_up_steps;
                p.T_down = g->T_down_steps;
                p.u_min = g->u_min_kW;
                p.u_max = g->u_max_kW;
                p.r_max = g->ramp_kW_per_step;
                p.kappa_u.assign(K, g->startup_cost);
                p.kappa_d.assign(K, g->shutdown_cost);
                p.zeta = g->commitment_cost_per_step;
                p.cost_segments = secant_segments(g->cost_quadratic_per_kW2, g->cost_linear_per_kWh,
                                                  g->u_min_kW, g->u_max_kW, g->cost_segments);
                p.delta_init = *g->delta_init;
                p.u_init = *g->u_init_kW;
                blocks.push_back(build_generator_block(p, K, u.name));
            } else if (auto* s = std::get_if<StorageSpec>(&u.params)) {
                if (!s->x0_kWh) {
                    s->x0_kWh = rng.uniform(s->x_min_kWh, s->x_max_kWh);
                }
                StorageParams p;
                p.eta_c = s->charge_efficiency;
                p.eta_d = s->discharge_efficiency;
                p.x_min = s->x_min_kWh;
                p.x_max = s->x_max_kWh;
                p.x_pl = s->loss_kWh_per_step;
                p.C = s->C_kW;
                p.zeta = s->exchange_cost_per_kWh;
                p.x0 = *s->x0_kWh;
                blocks.push_back(build_storage_block(p, K, u.name));
            } else if (const auto* l = std::get_if<ControllableLoadSpec>(&u.params)) {
                const Vector D = sample_profile(l->demand, time, rng.next());
                ControllableLoadParams p;
                p.beta_min = l->beta_min;
                p.beta_max = l->beta_max;
                p.D = to_std(D);
                p.varphi = l->curtailment_cost_per_kWh;
                b.models.controllable_forecasts.push_back(D);
                blocks.push_back(build_controllable_load_block(p, K, u.name));
            } else if (const auto* c = std::get_if<CriticalLoadSpec>(&u.params)) {
                b.models.critical_loads.push_back({u.name, c->demand});
                blocks.push_back(build_critical_load_block(K, u.name));
            } else if (const auto* so = std::get_if<SolarModel>(&u.params)) {
                b.models.renewables.push_back({u.name, *so});
            } else if (const auto* w = std::get_if<WindModel>(&u.params)) {
                b.models.renewables.push_back({u.name, *w});
            } else {
                const auto& g = std::get<GridSpec>(u.params);
                GridParams p;
                p.P_max = g.P_max_kW;
                p.phi_p = to_std(b.purchase_price);
                p.phi_s = to_std(b.sell_price);
                blocks.push_back(build_grid_block(p, K, u.name));
            }
            if (type != "solar" && type != "wind") {
                b.agents.push_back(AgentInfo{u.name, type, static_cast<int>(ui)});
            }
            b.resolved.units.push_back(std::move(u));
        }
    }
    const double q_default = 10.0 * max_price;
    b.resolved.q_plus_per_kWh = cfg.q_plus_per_kWh.value_or(q_default);
    b.resolved.q_minus_per_kWh = cfg.q_minus_per_kWh.value_or(q_default);

    ScenarioSet scen = sample_scenarioset(b.models, cfg.R, cfg.pi_mode, cfg.seed_scenarios);
    b.problem = make_stochastic_problem(std::move(blocks), std::move(scen), *b.resolved.q_plus_per_kWh,
                                        *b.resolved.q_minus_per_kWh);
    b.graph = generate_graph(b.problem.num_agents(), cfg.graph, cfg.seed_graph, cfg.graph_edge_probability);

    b.run.T_f = cfg.T_f;
    b.run.finalize_every = cfg.finalize_every;
    b.run.schedule = cfg.schedule;
    b.run.init = cfg.init;
    b.run.init_seed = derive_seed(cfg.seed_problem, 0x696e6974u);
    b.run.parallel = cfg.parallel;
    return b;
}

const std::vector<std::string>& artifact_files()
{
    static const std::vector<std::string> files = {
        "config.json",        "scenarios.csv",   "trace.csv",          "allocation_trace.csv",
        "coupling.csv",       "certificate.json", "run_state.json",     "report_loads.csv",
        "report_storage.csv", "report_grid.csv", "report_sources.csv",
    };
    return files;
}

namespace {

void write_trace(const fs::path& path, const RunTrace& t)
{
    std::ofstream os = open_output(path);
    csv::Writer w(os);
    w.row({"iter", "incumbent_cost", "max_violation_pos", "max_violation_neg", "alloc_residual",
           "mean_residual", "std_residual", "eta_plus_max", "eta_minus_max", "expected_recourse",
           "lifted_violation", "allocation_step"});
    for (const TraceRow& r : t.rows) {
        w.field(r.iter)
            .field(r.incumbent_cost)
            .field(r.max_violation_pos)
            .field(r.max_violation_neg)
            .field(r.alloc_residual)
            .field(r.mean_residual)
            .field(r.std_residual)
            .field(r.eta_plus_max)
            .field(r.eta_minus_max)
            .field(r.expected_recourse)
            .field(r.lifted_violation)
            .field(r.allocation_step);
        w.end_row();
    }
}

void write_allocation_trace(const fs::path& path, const RunTrace& t)
{
    std::ofstream os = open_output(path);
    csv::Writer w(os);
    w.row({"iter", "alloc_residual", "relaxation_objective"});
    for (std::size_t i = 0; i < t.alloc_residual.size(); ++i) {
        w.field(static_cast<long long>(i)).field(t.alloc_residual[i]);
        w.field(i < t.relaxation_objective.size() ? t.relaxation_objective[i] : std::nan(""));
        w.end_row();
    }
}

void write_coupling(const fs::path& path, const StochasticProblem& p, const std::vector<Vector>& x)
{
    const Vector supply = total_supply(p, x);
    const Matrix res = balance_residuals(supply, p.scenarios);
    std::ofstream os = open_output(path);
    csv::Writer w(os);
    w.row({"scenario", "step", "pi", "b_kW", "supply_kW", "residual_kW", "recourse_plus_kW",
           "recourse_minus_kW"});
    for (int r = 0; r < p.R(); ++r) {
        for (int k = 0; k < p.K(); ++k) {
            const double v = res(k, r);
            w.field(r).field(k).field(p.scenarios.pi[r]).field(p.scenarios.b[r][k]).field(supply[k]);
            w.field(v).field(std::max(v, 0.0)).field(std::max(-v, 0.0));
            w.end_row();
        }
    }
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j)
{
    std::ofstream os = open_output(path);
    os << j.dump(2) << '\n';
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir)
{
    ExperimentResult out;
    out.built = build_problem(cfg);
    const BuiltProblem& b = out.built;
    out.run = run(b.problem, b.graph, b.run);

    std::vector<Vector> y;
    std::vector<Vector> x;
    for (const AgentState& s : out.run.agents) {
        y.push_back(s.y);
        x.push_back(s.x);
    }
    CertifyOptions co;
    co.local = b.run.local;
    co.local.eta_cap = out.run.eta_cap;
    out.certificate = certify(b.problem, y, co);

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write_json(dir / "config.json", to_json(b.resolved));
    {
        std::ofstream os = open_output(dir / "scenarios.csv");
        write_scenarios_csv(os, b.problem.scenarios, b.models);
    }
    write_trace(dir / "trace.csv", out.run.trace);
    write_allocation_trace(dir / "allocation_trace.csv", out.run.trace);
    write_coupling(dir / "coupling.csv", b.problem, x);
    {
        std::ofstream os = open_output(dir / "certificate.json");
        write_certificate_json(os, out.certificate);
    }
    nlohmann::ordered_json state;
    state["config"] = to_json(b.resolved);
    state["eta_cap"] = out.run.eta_cap;
    nlohmann::ordered_json agents = nlohmann::ordered_json::array();
    for (int i = 0; i < b.problem.num_agents(); ++i) {
        const AgentState& s = out.run.agents[i];
        nlohmann::ordered_json a;
        a["name"] = b.agents[i].name;
        a["type"] = b.agents[i].type;
        a["y"] = to_std(s.y);
        a["x"] = to_std(s.x);
        a["eta"] = to_std(s.eta);
        agents.push_back(std::move(a));
    }
    state["agents"] = agents;
    write_json(dir / "run_state.json", state);
    write_reports(b, x, out_dir);
    return out;
}

std::vector<MonteCarloRow> aggregate_traces(const std::vector<RunTrace>& traces)
{
    std::vector<MonteCarloRow> out;
    if (traces.empty()) {
        return out;
    }
    const std::size_t rows = traces.front().rows.size();
    for (const auto& t : traces) {
        if (t.rows.size() != rows) {
            throw std::invalid_argument("traces log different iterations");
        }
    }
    const double n = static_cast<double>(traces.size());
    auto stats = [&](std::size_t i, auto field, double& mean, double& sd) {
        mean = 0.0;
        for (const auto& t : traces) {
            mean += field(t.rows[i]);
        }
        mean /= n;
        double var = 0.0;
        for (const auto& t : traces) {
            const double dv = field(t.rows[i]) - mean;
            var += dv * dv;
        }
        sd = std::sqrt(var / n);
    };
    for (std::size_t i = 0; i < rows; ++i) {
        MonteCarloRow r;
        r.iter = traces.front().rows[i].iter;
        stats(i, [](const TraceRow& t) { return t.incumbent_cost; }, r.cost_mean, r.cost_std);
        stats(i, [](const TraceRow& t) { return t.max_violation_pos; }, r.violation_pos_mean,
              r.violation_pos_std);
        stats(i, [](const TraceRow& t) { return t.max_violation_neg; }, r.violation_neg_mean,
              r.violation_neg_std);
        stats(i, [](const TraceRow& t) { return t.mean_residual; }, r.mean_residual_mean,
              r.mean_residual_std);
        out.push_back(r);
    }
    return out;
}

MonteCarloResult run_montecarlo(const ExperimentConfig& cfg, int trials, const std::string& out_dir)
{
    if (trials < 1) {
        throw std::invalid_argument("trials must be >= 1");
    }
    MonteCarloResult out;
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    for (int t = 0; t < trials; ++t) {
        ExperimentConfig c = cfg;
        c.seed_scenarios = cfg.seed_scenarios + static_cast<std::uint64_t>(t);
        out.scenario_seeds.push_back(c.seed_scenarios);
        try {
            ExperimentResult r = run_experiment(c, (dir / fmt::format("trial_{:03d}", t)).string());
            out.traces.push_back(std::move(r.run.trace));
            out.certificates.push_back(std::move(r.certificate));
        } catch (const std::exception& e) {
            throw std::runtime_error(
                fmt::format("trial {} (scenario seed {}) failed: {}", t, c.seed_scenarios, e.what()));
        }
    }
    out.aggregate = aggregate_traces(out.traces);

    std::ofstream os = open_output(dir / "montecarlo.csv");
    csv::Writer w(os);
    w.row({"iter", "cost_mean", "cost_std", "violation_pos_mean", "violation_pos_std",
           "violation_neg_mean", "violation_neg_std", "mean_residual_mean", "mean_residual_std"});
    for (const MonteCarloRow& r : out.aggregate) {
        w.field(r.iter)
            .field(r.cost_mean)
            .field(r.cost_std)
            .field(r.violation_pos_mean)
            .field(r.violation_pos_std)
            .field(r.violation_neg_mean)
            .field(r.violation_neg_std)
            .field(r.mean_residual_mean)
            .field(r.mean_residual_std);
        w.end_row();
    }
    std::ofstream cs = open_output(dir / "certificates.csv");
    csv::Writer cw(cs);
    cw.row({"trial", "scenario_seed", "holds", "max_excess", "integral_count", "bound_max",
            "measured_max"});
    for (int t = 0; t < trials; ++t) {
        const ViolationCertificate& c = out.certificates[t];
        cw.field(t).field(static_cast<long long>(out.scenario_seeds[t])).field(c.holds ? 1 : 0);
        cw.field(c.max_excess).field(c.integral_count).field(c.bound.maxCoeff()).field(c.measured.maxCoeff());
        cw.end_row();
    }
    return out;
}

RunState load_run_state(const std::string& run_dir)
{
    const fs::path path = fs::path(run_dir) / "run_state.json";
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
    }
    const nlohmann::json j = nlohmann::json::parse(in);
    RunState s;
    s.config = parse_config(j.at("config"));
    for (const auto& a : j.at("agents")) {
        s.y.push_back(from_json(a.at("y")));
        s.x.push_back(from_json(a.at("x")));
        s.eta.push_back(from_json(a.at("eta")));
    }
    return s;
}

ViolationCertificate recertify(const std::string& run_dir)
{
    const RunState s = load_run_state(run_dir);
    const BuiltProblem b = build_problem(s.config);
    if (static_cast<int>(s.y.size()) != b.problem.num_agents()) {
        throw std::runtime_error("saved run does not match its config");
    }
    CertifyOptions co;
    co.local = b.run.local;
    co.local.eta_cap = recourse_big_m(b.problem);
    const ViolationCertificate cert = certify(b.problem, s.y, co);
    std::ofstream os = open_output(fs::path(run_dir) / "certificate.json");
    write_certificate_json(os, cert);
    return cert;
}

void write_centralized_lp(std::ostream& os, const BuiltProblem& b)
{
    const CentralLp c = build_streamlined(b.problem, false);
    std::vector<std::string> names(c.lp.num_vars());
    for (int i = 0; i < b.problem.num_agents(); ++i) {
        const auto local = b.problem.agents[i].base.var_names();
        for (std::size_t j = 0; j < local.size(); ++j) {
            names[c.x_offset[i] + j] = b.agents[i].name + "." + local[j];
        }
    }
    for (int j = 0; j < b.problem.dim(); ++j) {
        names[c.eta_offset.front() + j] = fmt::format("eta({})", j);
    }
    write_lp_format(os, c.lp, names);
}

}  // namespace mgrid
