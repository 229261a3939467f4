// Serial versus OpenMP round kernels on the desk configuration.

#include "mgrid/experiment.hpp"

#include <benchmark/benchmark.h>

using namespace mgrid;

namespace {

struct Fixture {
    BuiltProblem built;
    LocalOptions local;
    std::vector<AgentState> states;

    Fixture() : built(build_problem(load_config(std::string(MGRID_SOURCE_DIR) + "/configs/desk.json")))
    {
        local.eta_cap = recourse_big_m(built.problem);
        const auto y0 = init_allocations(built.problem.h, built.problem.num_agents());
        states.resize(y0.size());
        for (std::size_t i = 0; i < y0.size(); ++i) {
            states[i].y = y0[i];
        }
    }
};

const Fixture& fixture()
{
    static const Fixture f;
    return f;
}

using Round = void (*)(const StochasticProblem&, std::vector<AgentState>&, const LocalOptions&);

void run_round(benchmark::State& state, Round round)
{
    const Fixture& f = fixture();
    for (auto _ : state) {
        state.PauseTiming();
        std::vector<AgentState> s = f.states;
        state.ResumeTiming();
        round(f.built.problem, s, f.local);
        benchmark::DoNotOptimize(s.data());
    }
}

void BM_MultiplierSerial(benchmark::State& s) { run_round(s, multiplier_round_serial); }
void BM_MultiplierParallel(benchmark::State& s) { run_round(s, multiplier_round_parallel); }
void BM_FinalizeSerial(benchmark::State& s) { run_round(s, finalize_round_serial); }
void BM_FinalizeParallel(benchmark::State& s) { run_round(s, finalize_round_parallel); }

}  // namespace

BENCHMARK(BM_MultiplierSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MultiplierParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FinalizeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FinalizeParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
