#include "mgrid/analysis.hpp"

#include <stdexcept>

#include <fmt/core.h>

namespace mgrid {

Vector compute_lower_bound(const LiftedBlock& a, double cap, const SimplexOptions& opts)
{
    const LocalBlock& b = a.base;
    const int D = a.eta_dim();
    const int period = 2 * b.horizon;  // H repeats every 2K rows
    Vector ell(D);
    LinearProgram lp = b.to_linear_program();
    lp.integer.clear();
    for (int q = 0; q < period; ++q) {
        double low = 0.0;
        if (b.size() > 0) {
            lp.cost = a.H.row(q).transpose();
            const LpSolution s = solve_lp(lp, opts);
            if (s.status != SolveStatus::optimal) {
                throw std::runtime_error(fmt::format("lower bound of '{}', row {}: {}", b.name, q,
                                                     to_string(s.status)));
            }
            low = s.value;
        }
        for (int j = q; j < D; j += period) {
            ell[j] = low - cap;
        }
    }
    return ell;
}

AuxiliarySolution compute_auxiliary(const LiftedBlock& a, const Vector& d, const Vector& ell,
                                    double cap, const BranchAndBoundOptions& opts)
{
    for (int attempt = 0; attempt <= 30; ++attempt) {
        const LinearProgram lp = local_program(a, d, ell, cap, false);
        const MipSolution s = solve_milp(lp, opts);
        if (s.status == SolveStatus::optimal) {
            AuxiliarySolution out;
            out.x = s.x.head(a.base.size());
            out.eta = s.x.tail(a.eta_dim());
            out.value = s.value;
            out.cap = cap;
            return out;
        }
        if (s.status != SolveStatus::infeasible) {
            throw std::runtime_error(
                fmt::format("auxiliary problem of '{}': {}", a.base.name, to_string(s.status)));
        }
        cap *= 2.0;
    }
    throw std::runtime_error(fmt::format("auxiliary problem of '{}' stays infeasible", a.base.name));
}

Vector nonintegral_contribution(const Vector& c, const Vector& x_aux, const Vector& x_final,
                                const Vector& d, const Vector& eta_aux)
{
    const double d_min = d.minCoeff();
    if (!(d_min > 0.0)) {
        throw std::invalid_argument(fmt::format("d_min = {} must be > 0", d_min));
    }
    const double num = (c.size() ? c.dot(x_aux - x_final) : 0.0) + d.dot(eta_aux);
    return Vector::Constant(d.size(), num / d_min);
}

}  // namespace mgrid
