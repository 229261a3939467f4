#include "mgrid/analysis.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/core.h>
#include <json.hpp>

namespace mgrid {

namespace {

bool is_integral(const LocalBlock& b, const Vector& x, double tol)
{
    for (int j = 0; j < b.size(); ++j) {
        if (b.integral[j] && std::abs(x[j] - std::round(x[j])) > tol) {
            return false;
        }
    }
    return true;
}

}  // namespace

ViolationCertificate certify(const StochasticProblem& p, const std::vector<Vector>& y,
                             const CertifyOptions& opts)
{
    const int N = p.num_agents();
    if (static_cast<int>(y.size()) != N) {
        throw std::invalid_argument("certify: one allocation per agent required");
    }
    const Vector& d = p.recourse.d;
    ViolationCertificate cert;
    cert.d_min = p.recourse.min_entry();
    if (!(cert.d_min > 0.0)) {
        throw std::invalid_argument(fmt::format("certify: d_min = {} must be > 0", cert.d_min));
    }
    cert.label = opts.converged ? "converged" : "empirical";
    LocalOptions local = opts.local;
    local.warm_start = false;
    if (!(local.eta_cap > 0.0)) {
        local.eta_cap = recourse_big_m(p);
    }
    cert.agents.resize(N);
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < N; ++i) {
        const LiftedBlock& a = p.agents[i];
        AgentCertificate& ac = cert.agents[i];
        ac.name = a.base.name;
        ac.y = y[i];
        AgentState s;
        s.y = y[i];
        local_multiplier_step(a, d, s, local, i);
        ac.z_lp = s.z;
        ac.eta_lp = s.eta_relaxed;
        ac.integral_relaxation = is_integral(a.base, s.z, opts.integrality_tol);
        if (ac.integral_relaxation) {
            // an integral relaxed optimum is optimal for the mixed-integer program
            ac.x_final = s.z;
            ac.eta_final = s.eta_relaxed;
            ac.final_value = s.relaxed_value;
        } else {
            finalize_mixed_integer(a, d, s, local, i);
            ac.x_final = s.x;
            ac.eta_final = s.eta;
            ac.final_value = s.mixed_value;
        }
        const double cap = agent_cap(local, y[i]);
        ac.ell = compute_lower_bound(a, cap, local.lp);
        const AuxiliarySolution aux = compute_auxiliary(a, d, ac.ell, 2.0 * cap, local.milp);
        ac.x_aux = aux.x;
        ac.eta_aux = aux.eta;
        ac.aux_value = aux.value;
        ac.contribution = ac.integral_relaxation
            ? ac.eta_lp
            : nonintegral_contribution(a.base.cost, ac.x_aux, ac.x_final, d, ac.eta_aux);
    }

    const int D = p.dim();
    cert.bound = Vector::Zero(D);
    cert.measured = -p.h;
    cert.lower_bounds_admissible = true;
    cert.optimality_transfer = true;
    cert.componentwise_eta = true;
    for (int i = 0; i < N; ++i) {
        const auto& ac = cert.agents[i];
        const LiftedBlock& a = p.agents[i];
        cert.bound += ac.contribution;
        if (a.base.size() > 0) {
            cert.measured += a.H * ac.x_final;
        }
        cert.integral_count += ac.integral_relaxation ? 1 : 0;
        if ((ac.ell - ac.y).maxCoeff() > 1e-9) {
            cert.lower_bounds_admissible = false;
        }
        if (ac.final_value > ac.aux_value + 1e-7 * (1.0 + std::abs(ac.aux_value))) {
            cert.optimality_transfer = false;
        }
        const double scaled = d.dot(ac.eta_final) / cert.d_min;
        if (ac.eta_final.size() && ac.eta_final.maxCoeff() > scaled + 1e-9 * (1.0 + scaled)) {
            cert.componentwise_eta = false;
        }
    }
    cert.max_excess = (cert.measured - cert.bound).maxCoeff();
    cert.holds = cert.max_excess <= opts.tolerance;
    return cert;
}

void write_certificate_json(std::ostream& os, const ViolationCertificate& cert)
{
    using nlohmann::ordered_json;
    auto vec = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    ordered_json j;
    j["label"] = cert.label;
    j["holds"] = cert.holds;
    j["max_excess"] = cert.max_excess;
    j["d_min"] = cert.d_min;
    j["integral_agents"] = cert.integral_count;
    j["lower_bounds_admissible"] = cert.lower_bounds_admissible;
    j["optimality_transfer"] = cert.optimality_transfer;
    j["componentwise_eta"] = cert.componentwise_eta;
    j["bound"] = vec(cert.bound);
    j["measured"] = vec(cert.measured);
    ordered_json agents = ordered_json::array();
    for (const auto& a : cert.agents) {
        ordered_json e;
        e["name"] = a.name;
        e["integral_relaxation"] = a.integral_relaxation;
        e["final_value"] = a.final_value;
        e["aux_value"] = a.aux_value;
        e["contribution"] = vec(a.contribution);
        agents.push_back(std::move(e));
    }
    j["agents"] = std::move(agents);
    os << j.dump(2) << '\n';
}

}  // namespace mgrid
