#include "mgrid/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/core.h>

namespace mgrid {

using nlohmann::json;

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::invalid_argument(errors.empty() ? std::string("invalid config")
                                           : fmt::format("invalid config: {}{}", errors.front(),
                                                         errors.size() > 1
                                                             ? fmt::format(" (+{} more)", errors.size() - 1)
                                                             : std::string())),
      errors_(std::move(errors))
{
}

std::string unit_type(const UnitParams& p)
{
    static const char* names[] = {"generator", "storage", "controllable_load", "critical_load",
                                  "solar", "wind", "grid"};
    return names[p.index()];
}

namespace {

// Field reader over one JSON object. Records errors with paths instead of
// throwing so one pass reports every problem.
class Reader {
public:
    Reader(const json& j, std::string path, std::vector<std::string>& errors)
        : j_(j), path_(std::move(path)), errors_(errors)
    {
        if (!j_.is_object()) {
            error("", "expected an object");
        }
    }

    std::string at(const std::string& key) const
    {
        return path_.empty() ? key : path_ + "." + key;
    }

    void error(const std::string& key, const std::string& msg) const
    {
        errors_.push_back(fmt::format("{}: {}", key.empty() ? (path_.empty() ? "<root>" : path_) : at(key), msg));
    }

    const json* find(const std::string& key)
    {
        seen_.insert(key);
        if (!j_.is_object()) {
            return nullptr;
        }
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    template <class T>
    void number(const std::string& key, T& out, bool required = false)
    {
        const json* v = find(key);
        if (!v) {
            if (required) {
                error(key, "missing");
            }
            return;
        }
        if constexpr (std::is_integral_v<T>) {
            if (!v->is_number_integer()) {
                error(key, "expected an integer");
                return;
            }
            if constexpr (std::is_unsigned_v<T>) {
                if (v->is_number_unsigned() || v->get<long long>() >= 0) {
                    out = v->get<T>();
                } else {
                    error(key, "expected a nonnegative integer");
                }
            } else {
                out = v->get<T>();
            }
        } else {
            if (!v->is_number()) {
                error(key, "expected a number");
                return;
            }
            out = v->get<T>();
        }
    }

    template <class T>
    void optional_number(const std::string& key, std::optional<T>& out)
    {
        if (find(key)) {
            T v{};
            number(key, v);
            out = v;
        }
    }

    void string(const std::string& key, std::string& out, bool required = false)
    {
        const json* v = find(key);
        if (!v) {
            if (required) {
                error(key, "missing");
            }
            return;
        }
        if (!v->is_string()) {
            error(key, "expected a string");
            return;
        }
        out = v->get<std::string>();
    }

    void boolean(const std::string& key, bool& out)
    {
        const json* v = find(key);
        if (!v) {
            return;
        }
        if (!v->is_boolean()) {
            error(key, "expected true or false");
            return;
        }
        out = v->get<bool>();
    }

    void numbers(const std::string& key, std::vector<double>& out)
    {
        const json* v = find(key);
        if (!v) {
            return;
        }
        if (v->is_number()) {
            out = {v->get<double>()};
            return;
        }
        if (!v->is_array()) {
            error(key, "expected a number or an array of numbers");
            return;
        }
        out.clear();
        for (std::size_t i = 0; i < v->size(); ++i) {
            if (!(*v)[i].is_number()) {
                error(fmt::format("{}[{}]", key, i), "expected a number");
                return;
            }
            out.push_back((*v)[i].get<double>());
        }
    }

    void reject_unknown() const
    {
        if (!j_.is_object()) {
            return;
        }
        for (const auto& [key, value] : j_.items()) {
            (void)value;
            if (!seen_.count(key)) {
                error(key, "unknown field");
            }
        }
    }

private:
    const json& j_;
    std::string path_;
    std::vector<std::string>& errors_;
    std::set<std::string> seen_;
};

void read_demand(Reader& r, DemandModel& d)
{
    r.number("base_kW", d.base_kW, true);
    r.number("peak_kW", d.peak_kW);
    r.number("peak_hour", d.peak_hour);
    r.number("width_h", d.width_h);
    r.number("sigma_kW", d.sigma_kW);
}

UnitParams read_unit_params(Reader& r, const std::string& type)
{
    if (type == "generator") {
        GeneratorSpec g;
        r.number("T_up_steps", g.T_up_steps);
        r.number("T_down_steps", g.T_down_steps);
        r.number("u_min_kW", g.u_min_kW);
        r.number("u_max_kW", g.u_max_kW, true);
        r.number("ramp_kW_per_step", g.ramp_kW_per_step, true);
        r.number("startup_cost", g.startup_cost);
        r.number("shutdown_cost", g.shutdown_cost);
        r.number("commitment_cost_per_step", g.commitment_cost_per_step);
        r.number("cost_quadratic_per_kW2", g.cost_quadratic_per_kW2);
        r.number("cost_linear_per_kWh", g.cost_linear_per_kWh, true);
        r.number("cost_segments", g.cost_segments);
        r.optional_number("delta_init", g.delta_init);
        r.optional_number("u_init_kW", g.u_init_kW);
        return g;
    }
    if (type == "storage") {
        StorageSpec s;
        r.number("charge_efficiency", s.charge_efficiency);
        r.number("discharge_efficiency", s.discharge_efficiency);
        r.number("x_min_kWh", s.x_min_kWh, true);
        r.number("x_max_kWh", s.x_max_kWh, true);
        r.number("loss_kWh_per_step", s.loss_kWh_per_step);
        r.number("C_kW", s.C_kW, true);
        r.number("exchange_cost_per_kWh", s.exchange_cost_per_kWh);
        r.optional_number("x0_kWh", s.x0_kWh);
        return s;
    }
    if (type == "controllable_load") {
        ControllableLoadSpec c;
        read_demand(r, c.demand);
        r.number("beta_min", c.beta_min);
        r.number("beta_max", c.beta_max);
        r.number("curtailment_cost_per_kWh", c.curtailment_cost_per_kWh, true);
        return c;
    }
    if (type == "critical_load") {
        CriticalLoadSpec c;
        read_demand(r, c.demand);
        return c;
    }
    if (type == "solar") {
        SolarModel s;
        r.number("peak_kW", s.peak_kW, true);
        r.number("window_start_h", s.window_start_h);
        r.number("window_end_h", s.window_end_h);
        r.number("cloud_sigma", s.cloud_sigma);
        return s;
    }
    if (type == "wind") {
        WindModel w;
        r.number("mean_kW", w.mean_kW, true);
        r.number("rho", w.rho);
        r.number("sigma_kW", w.sigma_kW);
        return w;
    }
    GridSpec g;
    r.number("P_max_kW", g.P_max_kW, true);
    r.numbers("purchase_price_per_kWh", g.purchase_price_per_kWh);
    r.numbers("sell_price_per_kWh", g.sell_price_per_kWh);
    return g;
}

const std::set<std::string> kUnitTypes = {"generator", "storage", "controllable_load",
                                          "critical_load", "solar", "wind", "grid"};

template <class F>
void check(std::vector<std::string>& errors, bool ok, const std::string& path, F&& msg)
{
    if (!ok) {
        errors.push_back(fmt::format("{}: {}", path, msg()));
    }
}

void validate_demand(std::vector<std::string>& e, const std::string& p, const DemandModel& d)
{
    check(e, d.base_kW >= 0.0, p + ".base_kW", [] { return "must be >= 0"; });
    check(e, d.peak_kW >= 0.0, p + ".peak_kW", [] { return "must be >= 0"; });
    check(e, d.width_h > 0.0, p + ".width_h", [] { return "must be > 0"; });
    check(e, d.sigma_kW >= 0.0, p + ".sigma_kW", [] { return "must be >= 0"; });
}

void validate_prices(std::vector<std::string>& e, const std::string& p, const std::vector<double>& v)
{
    check(e, v.size() == 1 || v.size() == 24, p, [&] {
        return fmt::format("expected 1 or 24 values, got {}", v.size());
    });
    for (std::size_t i = 0; i < v.size(); ++i) {
        check(e, v[i] >= 0.0, fmt::format("{}[{}]", p, i), [] { return "must be >= 0"; });
    }
}

}  // namespace

std::vector<std::string> validate_config(const ExperimentConfig& c)
{
    std::vector<std::string> e;
    check(e, c.K >= 1, "horizon_steps", [] { return "must be >= 1"; });
    check(e, c.R >= 1, "scenarios", [] { return "must be >= 1"; });
    check(e, c.T_f >= 0, "iterations", [] { return "must be >= 0"; });
    check(e, c.finalize_every >= 1, "finalize_every", [] { return "must be >= 1"; });
    check(e, c.start_hour >= 0.0 && c.start_hour < 24.0, "start_hour", [] { return "must lie in [0, 24)"; });
    if (c.q_plus_per_kWh) {
        check(e, *c.q_plus_per_kWh > 0.0, "recourse.q_plus_per_kWh", [] { return "must be > 0"; });
    }
    if (c.q_minus_per_kWh) {
        check(e, *c.q_minus_per_kWh > 0.0, "recourse.q_minus_per_kWh", [] { return "must be > 0"; });
    }
    check(e, c.graph_edge_probability > 0.0 && c.graph_edge_probability <= 1.0,
          "graph.edge_probability", [] { return "must lie in (0, 1]"; });
    if (c.schedule.kind == StepSizeSchedule::Kind::diminishing) {
        check(e, c.schedule.a > 0.0, "schedule.a", [] { return "must be > 0"; });
        check(e, c.schedule.b > 0.0, "schedule.b", [] { return "must be > 0"; });
    } else {
        check(e, c.schedule.alpha0 > 0.0, "schedule.alpha0", [] { return "must be > 0"; });
        check(e, c.schedule.factor > 0.0 && c.schedule.factor <= 1.0, "schedule.factor",
              [] { return "must lie in (0, 1]"; });
        check(e, c.schedule.period >= 1, "schedule.period_iterations", [] { return "must be >= 1"; });
    }

    int grids = 0;
    int agents = 0;
    std::set<std::string> names;
    for (std::size_t i = 0; i < c.units.size(); ++i) {
        const UnitSpec& u = c.units[i];
        const std::string p = fmt::format("units[{}]", i);
        check(e, u.count >= 1, p + ".count", [] { return "must be >= 1"; });
        check(e, !u.name.empty(), p + ".name", [] { return "must not be empty"; });
        check(e, names.insert(u.name).second, p + ".name",
              [&] { return fmt::format("duplicate name '{}'", u.name); });
        const std::string type = unit_type(u.params);
        if (type != "solar" && type != "wind") {
            agents += std::max(u.count, 0);
        }
        if (const auto* g = std::get_if<GeneratorSpec>(&u.params)) {
            check(e, g->T_up_steps >= 1, p + ".T_up_steps", [] { return "must be >= 1"; });
            check(e, g->T_down_steps >= 1, p + ".T_down_steps", [] { return "must be >= 1"; });
            check(e, g->u_min_kW >= 0.0, p + ".u_min_kW", [] { return "must be >= 0"; });
            check(e, g->u_min_kW <= g->u_max_kW, p + ".u_min_kW", [&] {
                return fmt::format("must be <= u_max_kW = {}", g->u_max_kW);
            });
            check(e, g->u_max_kW > 0.0, p + ".u_max_kW", [] { return "must be > 0"; });
            check(e, g->ramp_kW_per_step >= 0.0, p + ".ramp_kW_per_step", [] { return "must be >= 0"; });
            check(e, g->startup_cost > 0.0, p + ".startup_cost", [] { return "must be > 0"; });
            check(e, g->shutdown_cost > 0.0, p + ".shutdown_cost", [] { return "must be > 0"; });
            check(e, g->commitment_cost_per_step >= 0.0, p + ".commitment_cost_per_step",
                  [] { return "must be >= 0"; });
            check(e, g->cost_quadratic_per_kW2 >= 0.0, p + ".cost_quadratic_per_kW2",
                  [] { return "must be >= 0 (convex cost)"; });
            check(e, g->cost_segments >= 1, p + ".cost_segments", [] { return "must be >= 1"; });
            if (g->delta_init) {
                check(e, *g->delta_init == 0 || *g->delta_init == 1, p + ".delta_init",
                      [] { return "must be 0 or 1"; });
            }
            if (g->u_init_kW) {
                check(e, g->delta_init.has_value(), p + ".u_init_kW",
                      [] { return "needs delta_init"; });
                check(e, *g->u_init_kW >= 0.0 && *g->u_init_kW <= g->u_max_kW, p + ".u_init_kW",
                      [] { return "must lie in [0, u_max_kW]"; });
                if (g->delta_init) {
                    check(e, (*g->u_init_kW > 0.0) == (*g->delta_init == 1), p + ".u_init_kW",
                          [] { return "must be > 0 exactly when delta_init = 1"; });
                }
            } else if (g->delta_init) {
                check(e, *g->delta_init == 0, p + ".u_init_kW",
                      [] { return "missing (required when delta_init = 1)"; });
            }
        } else if (const auto* s = std::get_if<StorageSpec>(&u.params)) {
            check(e, s->charge_efficiency > 0.0 && s->charge_efficiency <= 1.0, p + ".charge_efficiency",
                  [] { return "must lie in (0, 1]"; });
            check(e, s->discharge_efficiency > 0.0 && s->discharge_efficiency <= 1.0,
                  p + ".discharge_efficiency", [] { return "must lie in (0, 1]"; });
            check(e, s->x_min_kWh > 0.0, p + ".x_min_kWh", [] { return "must be > 0"; });
            check(e, s->x_min_kWh < s->x_max_kWh, p + ".x_min_kWh", [&] {
                return fmt::format("must be < x_max_kWh = {}", s->x_max_kWh);
            });
            check(e, s->loss_kWh_per_step >= 0.0, p + ".loss_kWh_per_step", [] { return "must be >= 0"; });
            check(e, s->C_kW > 0.0, p + ".C_kW", [] { return "must be > 0"; });
            check(e, s->exchange_cost_per_kWh >= 0.0, p + ".exchange_cost_per_kWh",
                  [] { return "must be >= 0"; });
            if (s->x0_kWh) {
                check(e, *s->x0_kWh >= s->x_min_kWh && *s->x0_kWh <= s->x_max_kWh, p + ".x0_kWh",
                      [] { return "must lie in [x_min_kWh, x_max_kWh]"; });
            }
        } else if (const auto* l = std::get_if<ControllableLoadSpec>(&u.params)) {
            validate_demand(e, p, l->demand);
            check(e, l->beta_min >= 0.0 && l->beta_min <= l->beta_max && l->beta_max <= 1.0,
                  p + ".beta_max", [] { return "need 0 <= beta_min <= beta_max <= 1"; });
            check(e, l->curtailment_cost_per_kWh >= 0.0, p + ".curtailment_cost_per_kWh",
                  [] { return "must be >= 0"; });
        } else if (const auto* cl = std::get_if<CriticalLoadSpec>(&u.params)) {
            validate_demand(e, p, cl->demand);
        } else if (const auto* so = std::get_if<SolarModel>(&u.params)) {
            check(e, so->peak_kW >= 0.0, p + ".peak_kW", [] { return "must be >= 0"; });
            check(e, so->window_start_h < so->window_end_h, p + ".window_start_h",
                  [] { return "must be < window_end_h"; });
            check(e, so->cloud_sigma >= 0.0, p + ".cloud_sigma", [] { return "must be >= 0"; });
        } else if (const auto* w = std::get_if<WindModel>(&u.params)) {
            check(e, w->mean_kW >= 0.0, p + ".mean_kW", [] { return "must be >= 0"; });
            check(e, w->rho >= 0.0 && w->rho < 1.0, p + ".rho", [] { return "must lie in [0, 1)"; });
            check(e, w->sigma_kW >= 0.0, p + ".sigma_kW", [] { return "must be >= 0"; });
        } else if (const auto* g = std::get_if<GridSpec>(&u.params)) {
            grids += u.count;
            check(e, g->P_max_kW > 0.0, p + ".P_max_kW", [] { return "must be > 0"; });
            validate_prices(e, p + ".purchase_price_per_kWh", g->purchase_price_per_kWh);
            validate_prices(e, p + ".sell_price_per_kWh", g->sell_price_per_kWh);
        }
    }
    check(e, grids == 1, "units", [&] {
        return fmt::format("exactly one grid unit is required, found {}", grids);
    });
    check(e, agents >= 2, "units",
          [] { return "at least two optimizing agents are required"; });
    return e;
}

ExperimentConfig parse_config(const json& j)
{
    std::vector<std::string> errors;
    ExperimentConfig c;
    Reader r(j, "", errors);
    r.string("name", c.name);
    r.number("horizon_steps", c.K, true);
    r.number("start_hour", c.start_hour);
    r.number("scenarios", c.R, true);
    std::string pi = "uniform";
    r.string("scenario_weights", pi);
    try {
        c.pi_mode = parse_pi_mode(pi);
    } catch (const std::invalid_argument&) {
        r.error("scenario_weights", "expected \"uniform\" or \"random\"");
    }
    if (const json* rec = r.find("recourse")) {
        Reader rr(*rec, "recourse", errors);
        rr.optional_number("q_plus_per_kWh", c.q_plus_per_kWh);
        rr.optional_number("q_minus_per_kWh", c.q_minus_per_kWh);
        rr.reject_unknown();
    }
    if (const json* units = r.find("units")) {
        if (!units->is_array()) {
            r.error("units", "expected an array");
        } else {
            for (std::size_t i = 0; i < units->size(); ++i) {
                const std::string path = fmt::format("units[{}]", i);
                Reader ur((*units)[i], path, errors);
                std::string type;
                ur.string("type", type, true);
                if (type.empty()) {
                    continue;
                }
                if (!kUnitTypes.count(type)) {
                    ur.error("type", fmt::format("unknown unit type '{}'", type));
                    continue;
                }
                UnitSpec u{type, 1, GridSpec{}};
                ur.string("name", u.name);
                ur.number("count", u.count);
                u.params = read_unit_params(ur, type);
                ur.reject_unknown();
                c.units.push_back(std::move(u));
            }
        }
    } else {
        r.error("units", "missing");
    }
    if (const json* g = r.find("graph")) {
        Reader gr(*g, "graph", errors);
        std::string kind = to_string(c.graph);
        gr.string("kind", kind);
        try {
            c.graph = parse_graph_kind(kind);
        } catch (const std::invalid_argument&) {
            gr.error("kind", "expected \"path\", \"cycle\" or \"random\"");
        }
        gr.number("edge_probability", c.graph_edge_probability);
        gr.reject_unknown();
    }
    if (const json* s = r.find("schedule")) {
        Reader sr(*s, "schedule", errors);
        std::string kind = "piecewise";
        sr.string("kind", kind);
        if (kind == "piecewise") {
            double alpha0 = 3.0;
            double factor = 0.5;
            int period = 50;
            sr.number("alpha0", alpha0);
            sr.number("factor", factor);
            sr.number("period_iterations", period);
            c.schedule = StepSizeSchedule::piecewise(alpha0, factor, period);
        } else if (kind == "diminishing") {
            double a = 1.0;
            double b = 1.0;
            sr.number("a", a);
            sr.number("b", b);
            c.schedule = StepSizeSchedule::diminishing(a, b);
        } else {
            sr.error("kind", "expected \"piecewise\" or \"diminishing\"");
        }
        sr.reject_unknown();
    }
    r.number("iterations", c.T_f, true);
    r.number("finalize_every", c.finalize_every);
    std::string init = "uniform";
    r.string("initial_allocation", init);
    if (init == "uniform") {
        c.init = InitMode::uniform;
    } else if (init == "random") {
        c.init = InitMode::random;
    } else {
        r.error("initial_allocation", "expected \"uniform\" or \"random\"");
    }
    if (const json* s = r.find("seeds")) {
        Reader sr(*s, "seeds", errors);
        sr.number("problem", c.seed_problem);
        sr.number("scenarios", c.seed_scenarios);
        sr.number("graph", c.seed_graph);
        sr.reject_unknown();
    }
    r.boolean("parallel", c.parallel);
    r.string("output_dir", c.output_dir);
    r.reject_unknown();

    if (errors.empty()) {
        errors = validate_config(c);
    }
    if (!errors.empty()) {
        throw ConfigError(std::move(errors));
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError({fmt::format("cannot open '{}'", path)});
    }
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError({fmt::format("{}: {}", path, e.what())});
    }
    return parse_config(j);
}

namespace {

nlohmann::ordered_json demand_json(const DemandModel& d)
{
    nlohmann::ordered_json j;
    j["base_kW"] = d.base_kW;
    j["peak_kW"] = d.peak_kW;
    j["peak_hour"] = d.peak_hour;
    j["width_h"] = d.width_h;
    j["sigma_kW"] = d.sigma_kW;
    return j;
}

nlohmann::ordered_json prices_json(const std::vector<double>& v)
{
    if (v.size() == 1) {
        return v.front();
    }
    return v;
}

}  // namespace

nlohmann::ordered_json to_json(const ExperimentConfig& c)
{
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["horizon_steps"] = c.K;
    j["start_hour"] = c.start_hour;
    j["scenarios"] = c.R;
    j["scenario_weights"] = to_string(c.pi_mode);
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    if (c.q_plus_per_kWh) {
        rec["q_plus_per_kWh"] = *c.q_plus_per_kWh;
    }
    if (c.q_minus_per_kWh) {
        rec["q_minus_per_kWh"] = *c.q_minus_per_kWh;
    }
    j["recourse"] = rec;
    nlohmann::ordered_json units = nlohmann::ordered_json::array();
    for (const UnitSpec& u : c.units) {
        nlohmann::ordered_json ju;
        ju["type"] = unit_type(u.params);
        ju["name"] = u.name;
        ju["count"] = u.count;
        std::visit(
            [&ju](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, GeneratorSpec>) {
                    ju["T_up_steps"] = p.T_up_steps;
                    ju["T_down_steps"] = p.T_down_steps;
                    ju["u_min_kW"] = p.u_min_kW;
                    ju["u_max_kW"] = p.u_max_kW;
                    ju["ramp_kW_per_step"] = p.ramp_kW_per_step;
                    ju["startup_cost"] = p.startup_cost;
                    ju["shutdown_cost"] = p.shutdown_cost;
                    ju["commitment_cost_per_step"] = p.commitment_cost_per_step;
                    ju["cost_quadratic_per_kW2"] = p.cost_quadratic_per_kW2;
                    ju["cost_linear_per_kWh"] = p.cost_linear_per_kWh;
                    ju["cost_segments"] = p.cost_segments;
                    if (p.delta_init) {
                        ju["delta_init"] = *p.delta_init;
                    }
                    if (p.u_init_kW) {
                        ju["u_init_kW"] = *p.u_init_kW;
                    }
                } else if constexpr (std::is_same_v<T, StorageSpec>) {
                    ju["charge_efficiency"] = p.charge_efficiency;
                    ju["discharge_efficiency"] = p.discharge_efficiency;
                    ju["x_min_kWh"] = p.x_min_kWh;
                    ju["x_max_kWh"] = p.x_max_kWh;
                    ju["loss_kWh_per_step"] = p.loss_kWh_per_step;
                    ju["C_kW"] = p.C_kW;
                    ju["exchange_cost_per_kWh"] = p.exchange_cost_per_kWh;
                    if (p.x0_kWh) {
                        ju["x0_kWh"] = *p.x0_kWh;
                    }
                } else if constexpr (std::is_same_v<T, ControllableLoadSpec>) {
                    ju.update(demand_json(p.demand));
                    ju["beta_min"] = p.beta_min;
                    ju["beta_max"] = p.beta_max;
                    ju["curtailment_cost_per_kWh"] = p.curtailment_cost_per_kWh;
                } else if constexpr (std::is_same_v<T, CriticalLoadSpec>) {
                    ju.update(demand_json(p.demand));
                } else if constexpr (std::is_same_v<T, SolarModel>) {
                    ju["peak_kW"] = p.peak_kW;
                    ju["window_start_h"] = p.window_start_h;
                    ju["window_end_h"] = p.window_end_h;
                    ju["cloud_sigma"] = p.cloud_sigma;
                } else if constexpr (std::is_same_v<T, WindModel>) {
                    ju["mean_kW"] = p.mean_kW;
                    ju["rho"] = p.rho;
                    ju["sigma_kW"] = p.sigma_kW;
                } else {
                    ju["P_max_kW"] = p.P_max_kW;
                    ju["purchase_price_per_kWh"] = prices_json(p.purchase_price_per_kWh);
                    ju["sell_price_per_kWh"] = prices_json(p.sell_price_per_kWh);
                }
            },
            u.params);
        units.push_back(std::move(ju));
    }
    j["units"] = units;
    j["graph"] = {{"kind", to_string(c.graph)}, {"edge_probability", c.graph_edge_probability}};
    if (c.schedule.kind == StepSizeSchedule::Kind::piecewise) {
        j["schedule"] = {{"kind", "piecewise"},
                         {"alpha0", c.schedule.alpha0},
                         {"factor", c.schedule.factor},
                         {"period_iterations", c.schedule.period}};
    } else {
        j["schedule"] = {{"kind", "diminishing"}, {"a", c.schedule.a}, {"b", c.schedule.b}};
    }
    j["iterations"] = c.T_f;
    j["finalize_every"] = c.finalize_every;
    j["initial_allocation"] = c.init == InitMode::uniform ? "uniform" : "random";
    j["seeds"] = {{"problem", c.seed_problem}, {"scenarios", c.seed_scenarios}, {"graph", c.seed_graph}};
    j["parallel"] = c.parallel;
    j["output_dir"] = c.output_dir;
    return j;
}

}  // namespace mgrid
