#include "doctest.h"
#include "fixtures.hpp"
#include "oracle.hpp"

#include "mgrid/dialgo.hpp"

#include <random>

using namespace mgrid;

namespace {

// One continuous column x in [lo, hi], cost c, coupling A = [a], horizon 1.
LocalBlock scalar_block(double c, double a, double lo, double hi)
{
    LocalBlock b = build_critical_load_block(1, "scalar");
    b.cost = Vector::Constant(1, c);
    b.lower = Vector::Constant(1, lo);
    b.upper = Vector::Constant(1, hi);
    b.integral = {false};
    b.G = Matrix::Zero(0, 1);
    b.g = Vector::Zero(0);
    b.A = Matrix::Constant(1, 1, a);
    b.var_index["x"] = 0;
    return b;
}

double total_residual(const std::vector<AgentState>& s, const Vector& h)
{
    Vector sum = -h;
    for (const auto& a : s) {
        sum += a.y;
    }
    return sum.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("initial allocations add up to h")
{
    Vector h(2);
    h << 4, 8;
    for (const auto& y : init_allocations(h, 4)) {
        CHECK(y == Vector((Vector(2) << 1, 2).finished()));
    }
    CHECK(init_allocations(h, 1)[0] == h);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto ys = init_allocations(h, 5, InitMode::random, seed);
        Vector sum = Vector::Zero(2);
        for (const auto& y : ys) {
            sum += y;
        }
        CHECK((sum - h).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((ys[0] - h / 5).cwiseAbs().maxCoeff() > 0.0);
    }
}

TEST_CASE("allocation exchange")
{
    const CommGraph g = make_graph(2, {{0, 1}});
    std::vector<AgentState> s(2);
    s[0].y = Vector::Zero(2);
    s[1].y = Vector::Zero(2);
    s[0].mu = Vector((Vector(2) << 1, 0).finished());
    s[1].mu = Vector((Vector(2) << 0, 2).finished());
    exchange_and_update(s, g, 0.1);
    CHECK(s[0].y.isApprox(Vector((Vector(2) << 0.1, -0.2).finished())));
    CHECK(s[1].y.isApprox(Vector((Vector(2) << -0.1, 0.2).finished())));

    SUBCASE("equal multipliers leave allocations unchanged")
    {
        const CommGraph c = generate_graph(5, GraphKind::cycle, 0);
        std::vector<AgentState> t(5);
        for (int i = 0; i < 5; ++i) {
            t[i].y = Vector::Constant(3, i);
            t[i].mu = Vector::Constant(3, 0.7);
        }
        exchange_and_update(t, c, 2.0);
        for (int i = 0; i < 5; ++i) {
            CHECK(t[i].y == Vector::Constant(3, i));
        }
    }
    SUBCASE("random multipliers conserve the total")
    {
        std::mt19937_64 gen(3);
        std::uniform_real_distribution<double> u(0.0, 50.0);
        const CommGraph r = generate_graph(12, GraphKind::random, 7, 0.3);
        std::vector<AgentState> t(12);
        Vector h = Vector::Zero(6);
        for (auto& a : t) {
            a.y = Vector::NullaryExpr(6, [&](Eigen::Index) { return u(gen); });
            h += a.y;
        }
        for (int round = 0; round < 100; ++round) {
            for (auto& a : t) {
                a.mu = Vector::NullaryExpr(6, [&](Eigen::Index) { return u(gen); });
            }
            exchange_and_update(t, r, 3.0);
            CHECK(total_residual(t, h) <= 1e-9);
        }
    }
}

TEST_CASE("graph generation")
{
    for (GraphKind k : {GraphKind::path, GraphKind::cycle, GraphKind::random}) {
        const CommGraph g = generate_graph(2, k, 1, 0.9);
        REQUIRE(g.edges.size() == 1);
        CHECK(g.edges[0] == std::make_pair(0, 1));
    }
    const CommGraph p = generate_graph(4, GraphKind::path, 0);
    CHECK(p.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}});
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const CommGraph r = generate_graph(20, GraphKind::random, seed, 0.2);
        CHECK(r.connected());
        for (int i = 0; i < r.n; ++i) {
            for (int j : r.neighbors[i]) {
                CHECK(j != i);
                const auto& back = r.neighbors[j];
                CHECK(std::find(back.begin(), back.end(), i) != back.end());
            }
        }
        CHECK(generate_graph(20, GraphKind::random, seed, 0.2).edges == r.edges);
    }
    // too sparse to ever connect: falls back to a cycle
    const CommGraph sparse = generate_graph(30, GraphKind::random, 1, 0.0);
    CHECK(sparse.connected());
    CHECK(sparse.edges.size() == 30);
    CHECK_FALSE(make_graph(3, {{0, 1}}).connected());
    CHECK_THROWS_AS(parse_graph_kind("star"), std::invalid_argument);
}

TEST_CASE("step size schedules")
{
    const auto d = StepSizeSchedule::diminishing(2.0, 4.0);
    CHECK(d(0) == doctest::Approx(0.5));
    CHECK(d(6) == doctest::Approx(0.2));
    const auto p = StepSizeSchedule::piecewise(3.0, 0.5, 50);
    CHECK(p(0) == 3.0);
    CHECK(p(49) == 3.0);
    CHECK(p(50) == 1.5);
    CHECK(p(149) == 0.75);
    CHECK_THROWS_AS(StepSizeSchedule::piecewise(3.0, 0.5, 0), std::invalid_argument);
}

TEST_CASE("multiplier step")
{
    const Vector d = Vector::Constant(2, 2.0);
    LocalOptions opts;
    opts.eta_cap = 100.0;
    SUBCASE("binding allocation row")
    {
        const LiftedBlock a = lift_block(scalar_block(-1.0, 1.0, 0.0, 10.0), 1);
        AgentState s;
        s.y = Vector((Vector(2) << 5.0, 100.0).finished());
        local_multiplier_step(a, d, s, opts);
        CHECK(s.z[0] == doctest::Approx(5.0));
        CHECK(s.mu[0] == doctest::Approx(1.0));
        CHECK(s.mu[1] == doctest::Approx(0.0));
    }
    SUBCASE("slack allocation gives zero multipliers")
    {
        const LiftedBlock a = lift_block(scalar_block(-1.0, 1.0, 0.0, 10.0), 1);
        AgentState s;
        s.y = Vector::Constant(2, 1e3);
        local_multiplier_step(a, d, s, opts);
        CHECK(s.mu.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("multipliers stay between zero and the recourse cost")
    {
        const StochasticProblem p = fixtures::toy(3, 2, 21, true);
        LocalOptions o;
        o.eta_cap = recourse_big_m(p);
        std::mt19937_64 gen(2);
        std::normal_distribution<double> n(0.0, 10.0);
        for (int trial = 0; trial < 30; ++trial) {
            for (int i = 0; i < p.num_agents(); ++i) {
                AgentState s;
                s.y = Vector::NullaryExpr(p.dim(), [&](Eigen::Index) { return n(gen); });
                local_multiplier_step(p.agents[i], p.recourse.d, s, o, i);
                CHECK(s.mu.minCoeff() >= 0.0);
                CHECK((s.mu - p.recourse.d).maxCoeff() <= 1e-9);
                // the cap never binds
                CHECK(s.eta_relaxed.maxCoeff() < agent_cap(o, s.y) - 1e-6);
            }
        }
    }
}

TEST_CASE("warm started multiplier steps match cold solves")
{
    const StochasticProblem p = fixtures::toy(3, 2, 5, true);
    LocalOptions warm;
    warm.eta_cap = recourse_big_m(p);
    LocalOptions cold = warm;
    cold.warm_start = false;
    std::mt19937_64 gen(6);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < p.num_agents(); ++i) {
        AgentState sw;
        sw.y = p.h / p.num_agents();
        for (int round = 0; round < 40; ++round) {
            AgentState sc;
            sc.y = sw.y;
            local_multiplier_step(p.agents[i], p.recourse.d, sw, warm, i);
            local_multiplier_step(p.agents[i], p.recourse.d, sc, cold, i);
            CHECK(sw.relaxed_value == doctest::Approx(sc.relaxed_value).epsilon(1e-9).scale(1.0));
            sw.y += Vector::NullaryExpr(p.dim(), [&](Eigen::Index) { return n(gen); });
        }
    }
}

TEST_CASE("mixed-integer local step")
{
    const Vector d = Vector::Constant(2, 3.0);
    LocalOptions opts;
    opts.eta_cap = 100.0;
    SUBCASE("single point block")
    {
        const LiftedBlock a = lift_block(scalar_block(1.0, 1.0, 4.0, 4.0), 1);
        AgentState s;
        s.y = Vector((Vector(2) << 1.0, -6.0).finished());
        finalize_mixed_integer(a, d, s, opts);
        CHECK(s.x[0] == 4.0);
        CHECK(s.eta[0] == doctest::Approx(3.0));  // 4 - 1
        CHECK(s.eta[1] == doctest::Approx(2.0));  // -4 + 6
    }
    SUBCASE("slack allocation needs no recourse")
    {
        const StochasticProblem p = fixtures::toy(2, 1, 3);
        for (int i = 0; i < p.num_agents(); ++i) {
            AgentState s;
            s.y = Vector::Constant(p.dim(), 1e3);
            finalize_mixed_integer(p.agents[i], p.recourse.d, s, opts, i);
            CHECK(s.eta.cwiseAbs().maxCoeff() <= 1e-9);
        }
    }
    SUBCASE("two binaries against enumeration")
    {
        // columns: two binaries and one continuous coupled output
        LocalBlock b = build_critical_load_block(1, "toy");
        b.cost = Vector((Vector(3) << 1.0, 2.5, -0.4).finished());
        b.lower = Vector::Zero(3);
        b.upper = Vector((Vector(3) << 1.0, 1.0, 8.0).finished());
        b.integral = {true, true, false};
        b.G = Matrix(2, 3);
        b.G << -3.0, -6.0, 1.0,  // output <= 3 d1 + 6 d2
            1.0, 1.0, 0.0;       // at most one unit on
        b.g = Vector((Vector(2) << 0.0, 1.0).finished());
        b.A = Matrix(1, 3);
        b.A << 0.0, 0.0, 1.0;
        const LiftedBlock a = lift_block(b, 1);
        for (double y0 : {-2.0, 0.0, 2.0, 5.0, 9.0}) {
            AgentState s;
            s.y = Vector((Vector(2) << y0, 0.0).finished());
            finalize_mixed_integer(a, d, s, opts);
            const auto ref = oracle::milp_by_enumeration(local_program(a, d, s.y, 100.0, false));
            REQUIRE(ref.feasible);
            CHECK(s.mixed_value == doctest::Approx(ref.value).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("stopping before any round is already feasible")
{
    const StochasticProblem p = fixtures::toy(3, 2, 1, true);
    RunOptions o;
    o.T_f = 0;
    const RunResult r = run(p, generate_graph(p.num_agents(), GraphKind::cycle, 0), o);
    REQUIRE(r.trace.rows.size() == 1);
    CHECK(r.trace.rows[0].iter == 0);
    CHECK(r.trace.rows[0].lifted_violation <= 1e-6);
    CHECK(r.trace.relaxation_objective.empty());
}

TEST_CASE("iterations conserve allocations and stay feasible")
{
    const StochasticProblem p = fixtures::toy(3, 2, 2, true);
    RunOptions o;
    o.T_f = 60;
    o.finalize_every = 10;
    o.schedule = StepSizeSchedule::piecewise(3.0, 0.5, 20);
    o.init = InitMode::random;
    o.init_seed = 3;
    const RunResult r = run(p, generate_graph(p.num_agents(), GraphKind::random, 4, 0.5), o);
    CHECK(r.trace.alloc_residual.size() == 61);
    for (double v : r.trace.alloc_residual) {
        CHECK(v <= 1e-9);
    }
    REQUIRE(r.trace.rows.size() == 7);
    for (const auto& row : r.trace.rows) {
        CHECK(row.lifted_violation <= 1e-6);
        CHECK(row.mean_residual >= -row.eta_minus_max - 1e-9);
        CHECK(row.mean_residual <= row.eta_plus_max + 1e-9);
    }
    // relaxation values never go below the centralized relaxation
    const double central = solve_lp(build_streamlined(p, true).lp).value;
    for (double v : r.trace.relaxation_objective) {
        CHECK(v >= central - 1e-6);
    }
}

TEST_CASE("two agent relaxation approaches the centralized optimum")
{
    const int K = 2;
    std::vector<LocalBlock> blocks{build_grid_block(fixtures::grid(K), K),
                                   build_controllable_load_block(fixtures::load(K), K)};
    const StochasticProblem p =
        make_stochastic_problem(std::move(blocks), fixtures::scenarios(K, 1, 4), 3.0, 4.5);
    RunOptions o;
    o.T_f = 2000;
    o.finalize_every = 1000;
    o.schedule = StepSizeSchedule::diminishing(2.0, 1.0);
    const RunResult r = run(p, generate_graph(2, GraphKind::path, 0), o);
    const double central = solve_lp(build_streamlined(p, true).lp).value;
    const double last = r.trace.relaxation_objective.back();
    CHECK(std::abs(last - central) <= 0.01 * std::abs(central));
}

TEST_CASE("serial and parallel kernels give identical runs")
{
    const StochasticProblem p = fixtures::toy(3, 2, 8, true);
    const CommGraph g = generate_graph(p.num_agents(), GraphKind::random, 2, 0.5);
    RunOptions o;
    o.T_f = 30;
    o.finalize_every = 10;
    o.schedule = StepSizeSchedule::piecewise(3.0, 0.5, 10);
    o.parallel = false;
    const RunResult a = run(p, g, o);
    o.parallel = true;
    const RunResult b = run(p, g, o);
    REQUIRE(a.trace.rows.size() == b.trace.rows.size());
    for (std::size_t i = 0; i < a.trace.rows.size(); ++i) {
        CHECK(a.trace.rows[i].incumbent_cost == b.trace.rows[i].incumbent_cost);
    }
    CHECK(a.trace.relaxation_objective == b.trace.relaxation_objective);
    for (int i = 0; i < p.num_agents(); ++i) {
        CHECK((a.agents[i].y.array() == b.agents[i].y.array()).all());
    }
}

TEST_CASE("run rejects a disconnected graph")
{
    const StochasticProblem p = fixtures::toy(2, 1, 1);
    CHECK_THROWS_AS(run(p, make_graph(3, {{0, 1}}), RunOptions{}), std::invalid_argument);
    CHECK_THROWS_AS(run(p, make_graph(2, {{0, 1}}), RunOptions{}), std::invalid_argument);
}
