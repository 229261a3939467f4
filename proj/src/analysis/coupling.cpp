#include "mgrid/analysis.hpp"

#include <algorithm>
#include <stdexcept>

namespace mgrid {

CouplingReport coupling_report(const Vector& supply, const ScenarioSet& scen, double q_plus,
                               double q_minus)
{
    CouplingReport rep;
    rep.residuals = balance_residuals(supply, scen);
    rep.max_pos = std::max(0.0, rep.residuals.maxCoeff());
    rep.max_neg = std::min(0.0, rep.residuals.minCoeff());
    for (int r = 0; r < scen.size(); ++r) {
        for (int k = 0; k < scen.K; ++k) {
            rep.expected_recourse += scen.pi[r] * recourse_phi(rep.residuals(k, r), q_plus, q_minus);
        }
    }
    return rep;
}

Vector total_supply(const StochasticProblem& p, const std::vector<Vector>& x)
{
    if (static_cast<int>(x.size()) != p.num_agents()) {
        throw std::invalid_argument("total_supply: one solution per agent required");
    }
    Vector s = Vector::Zero(p.K());
    for (int i = 0; i < p.num_agents(); ++i) {
        if (p.agents[i].base.size() > 0) {
            s += p.agents[i].base.A * x[i];
        }
    }
    return s;
}

}  // namespace mgrid
