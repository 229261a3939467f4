#pragma once

#include "mgrid/stochastic.hpp"

#include <random>
#include <vector>

namespace fixtures {

using namespace mgrid;

inline GridParams grid(int K, double P = 30.0)
{
    GridParams g;
    g.P_max = P;
    for (int k = 0; k < K; ++k) {
        g.phi_p.push_back(0.20 + 0.05 * (k % 3));
        g.phi_s.push_back(0.08 + 0.02 * (k % 2));
    }
    return g;
}

inline StorageParams storage()
{
    StorageParams s;
    s.eta_c = 0.95;
    s.eta_d = 0.9;
    s.x_min = 2.0;
    s.x_max = 20.0;
    s.x_pl = 0.1;
    s.C = 6.0;
    s.zeta = 0.01;
    s.x0 = 10.0;
    return s;
}

inline GeneratorParams generator(int K)
{
    GeneratorParams g;
    g.T_up = 2;
    g.T_down = 2;
    g.u_min = 0.0;
    g.u_max = 12.0;
    g.r_max = 8.0;
    g.kappa_u.assign(K, 0.5);
    g.kappa_d.assign(K, 0.2);
    g.zeta = 0.1;
    g.cost_segments = secant_segments(0.005, 0.15, 0.0, 12.0, 3);
    return g;
}

inline ControllableLoadParams load(int K, double D = 6.0)
{
    ControllableLoadParams c;
    c.beta_min = 0.0;
    c.beta_max = 0.4;
    c.D.assign(K, D);
    c.varphi = 0.6;
    return c;
}

/// Scenario set with one controllable load forecast, one critical load and a
/// noisy renewable.
inline ScenarioSet scenarios(int K, int R, std::uint64_t seed, double load_D = 6.0)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<BalanceProfiles> real;
    for (int r = 0; r < R; ++r) {
        BalanceProfiles bp;
        bp.controllable_demand = {Vector::Constant(K, load_D)};
        Vector crit(K);
        Vector ren(K);
        for (int k = 0; k < K; ++k) {
            crit[k] = 4.0 + 2.0 * u(gen);
            ren[k] = 8.0 * u(gen);
        }
        bp.critical_demand = {crit};
        bp.renewable_output = {ren};
        real.push_back(bp);
    }
    return make_scenario_set(std::vector<double>(R, 1.0 / R), real, K);
}

/// grid + storage + controllable load (+ optional generator, critical load).
inline StochasticProblem toy(int K, int R, std::uint64_t seed, bool with_generator = false,
                             double q = 3.0)
{
    std::vector<LocalBlock> blocks{build_grid_block(grid(K), K), build_storage_block(storage(), K),
                                   build_controllable_load_block(load(K), K)};
    if (with_generator) {
        blocks.push_back(build_generator_block(generator(K), K));
        blocks.push_back(build_critical_load_block(K));
    }
    return make_stochastic_problem(std::move(blocks), scenarios(K, R, seed), q, 1.5 * q);
}

}  // namespace fixtures
