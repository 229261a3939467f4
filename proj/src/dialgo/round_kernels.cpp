#include "mgrid/dialgo.hpp"

#include <exception>

namespace mgrid {

void multiplier_round_serial(const StochasticProblem& p, std::vector<AgentState>& states,
                             const LocalOptions& opts)
{
    for (int i = 0; i < p.num_agents(); ++i) {
        local_multiplier_step(p.agents[i], p.recourse.d, states[i], opts, i);
    }
}

void finalize_round_serial(const StochasticProblem& p, std::vector<AgentState>& states,
                           const LocalOptions& opts)
{
    for (int i = 0; i < p.num_agents(); ++i) {
        finalize_mixed_integer(p.agents[i], p.recourse.d, states[i], opts, i);
    }
}

namespace {

// Agents write only their own state; the first exception (lowest agent id) is rethrown.
template <class Step>
void parallel_agents(int N, Step step)
{
    std::vector<std::exception_ptr> errors(N);
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < N; ++i) {
        try {
            step(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace

void multiplier_round_parallel(const StochasticProblem& p, std::vector<AgentState>& states,
                               const LocalOptions& opts)
{
    parallel_agents(p.num_agents(), [&](int i) {
        local_multiplier_step(p.agents[i], p.recourse.d, states[i], opts, i);
    });
}

void finalize_round_parallel(const StochasticProblem& p, std::vector<AgentState>& states,
                             const LocalOptions& opts)
{
    parallel_agents(p.num_agents(), [&](int i) {
        finalize_mixed_integer(p.agents[i], p.recourse.d, states[i], opts, i);
    });
}

}  // namespace mgrid
