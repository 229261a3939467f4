#include "mgrid/solver.hpp"

#include <stdexcept>

namespace mgrid {

SubproblemValue lp_value_subgradient(const LinearProgram& local, const Matrix& coupling,
                                     const Vector& y, const SimplexOptions& opts)
{
    if (coupling.cols() != local.num_vars() || coupling.rows() != y.size()) {
        throw std::invalid_argument("lp_value_subgradient: coupling shape mismatch");
    }
    const int m_local = local.num_rows();
    const int k = static_cast<int>(coupling.rows());
    LinearProgram sub;
    sub.cost = local.cost;
    sub.lower = local.lower;
    sub.upper = local.upper;
    sub.rows.resize(m_local + k, local.num_vars());
    sub.rhs.resize(m_local + k);
    if (m_local > 0) {
        sub.rows.topRows(m_local) = local.rows;
        sub.rhs.head(m_local) = local.rhs;
    }
    sub.rows.bottomRows(k) = coupling;
    sub.rhs.tail(k) = y;

    SubproblemValue out;
    LpSolution s = solve_lp(sub, opts);
    out.status = s.status;
    if (s.status == SolveStatus::optimal) {
        out.value = s.value;
        out.mu = s.duals.tail(k);
        out.x = std::move(s.x);
    }
    return out;
}

}  // namespace mgrid
