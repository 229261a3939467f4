#include "mgrid/solver.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace mgrid {

void LinearProgram::validate() const
{
    const auto n = cost.size();
    if (rows.cols() != n && rows.rows() > 0) {
        throw std::invalid_argument(
            fmt::format("LinearProgram: rows has {} columns, cost has {}", rows.cols(), n));
    }
    if (rows.rows() != rhs.size()) {
        throw std::invalid_argument(
            fmt::format("LinearProgram: rows has {} rows, rhs has {}", rows.rows(), rhs.size()));
    }
    if (lower.size() != n || upper.size() != n) {
        throw std::invalid_argument("LinearProgram: bound vectors must match cost length");
    }
    if (!integer.empty() && static_cast<Eigen::Index>(integer.size()) != n) {
        throw std::invalid_argument("LinearProgram: integrality mask must match cost length");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        if (lower[j] > upper[j]) {
            throw std::invalid_argument(
                fmt::format("LinearProgram: column {} has lower {} > upper {}", j, lower[j], upper[j]));
        }
        if (std::isinf(lower[j]) && lower[j] > 0) {
            throw std::invalid_argument(fmt::format("LinearProgram: column {} lower is +inf", j));
        }
    }
}

std::string to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::iteration_limit: return "iteration_limit";
    }
    return "unknown";
}

double lagrangian_dual_value(const LinearProgram& lp, const Vector& mu)
{
    Vector reduced = lp.cost;
    if (lp.num_rows() > 0) {
        reduced.noalias() += lp.rows.transpose() * mu;
    }
    double value = lp.num_rows() > 0 ? -mu.dot(lp.rhs) : 0.0;
    for (int j = 0; j < lp.num_vars(); ++j) {
        const double r = reduced[j];
        if (r > 0) {
            value += r * lp.lower[j];
        } else if (r < 0) {
            value += r * lp.upper[j];
        }
    }
    return value;
}

namespace {

enum : std::int8_t { kBasic = 0, kLower = 1, kUpper = 2, kFree = 3 };

class Simplex {
public:
    Simplex(const LinearProgram& lp, const SimplexOptions& opts)
        : lp_(lp), opt_(opts), n_(lp.num_vars()), m_(lp.num_rows())
    {
        max_iters_ = opt_.max_iterations > 0 ? opt_.max_iterations : 50 * (n_ + m_) + 1000;
    }

    LpSolution run(const Basis* warm)
    {
        LpSolution out;
        SolveStatus status = SolveStatus::iteration_limit;
        bool done = false;
        if (warm != nullptr && !warm->empty() && load_basis(*warm)) {
            status = warm_solve();
            done = status != SolveStatus::iteration_limit;
        }
        if (!done) {
            iters_ = 0;
            status = cold_solve();
        }
        out.status = status;
        out.iterations = iters_;
        if (status != SolveStatus::optimal) {
            return out;
        }
        out.x = x_.head(n_);
        out.value = lp_.cost.dot(out.x);
        compute_multipliers();
        out.duals = -y_.head(m_);
        out.reduced_costs = lp_.cost;
        if (m_ > 0) {
            out.reduced_costs.noalias() += lp_.rows.transpose() * out.duals;
        }
        out.basis = export_basis();
        return out;
    }

private:
    const LinearProgram& lp_;
    SimplexOptions opt_;
    int n_;
    int m_;
    int nart_ = 0;
    std::vector<int> art_row_;
    Vector lo_;
    Vector hi_;
    Vector cost_;
    Vector x_;
    std::vector<std::int8_t> state_;
    std::vector<int> basic_;
    Matrix binv_;
    Vector y_;
    Vector d_;
    int iters_ = 0;
    int since_refactor_ = 0;
    int max_iters_ = 0;
    bool bland_ = false;
    int degenerate_run_ = 0;

    int ncols() const { return n_ + m_ + nart_; }
    bool is_artificial(int j) const { return j >= n_ + m_; }

    void setup_columns(int nart)
    {
        nart_ = nart;
        const int nc = ncols();
        lo_.resize(nc);
        hi_.resize(nc);
        cost_ = Vector::Zero(nc);
        x_ = Vector::Zero(nc);
        state_.assign(static_cast<std::size_t>(nc), kLower);
        lo_.head(n_) = lp_.lower;
        hi_.head(n_) = lp_.upper;
        lo_.segment(n_, m_).setZero();
        hi_.segment(n_, m_).setConstant(kInf);
        if (nart_ > 0) {
            lo_.tail(nart_).setZero();
            hi_.tail(nart_).setConstant(kInf);
        }
        basic_.assign(static_cast<std::size_t>(m_), -1);
    }

    void place_at_bound(int j)
    {
        if (std::isfinite(lo_[j])) {
            state_[j] = kLower;
            x_[j] = lo_[j];
        } else if (std::isfinite(hi_[j])) {
            state_[j] = kUpper;
            x_[j] = hi_[j];
        } else {
            state_[j] = kFree;
            x_[j] = 0.0;
        }
    }

    // B^-1 a_j
    void ftran(int j, Vector& out) const
    {
        if (j < n_) {
            out.noalias() = binv_ * lp_.rows.col(j);
        } else if (j < n_ + m_) {
            out = binv_.col(j - n_);
        } else {
            out = -binv_.col(art_row_[j - n_ - m_]);
        }
    }

    double column_dot(const Vector& v, int j) const
    {
        if (j < n_) {
            return lp_.rows.col(j).dot(v);
        }
        if (j < n_ + m_) {
            return v[j - n_];
        }
        return -v[art_row_[j - n_ - m_]];
    }

    void refactor()
    {
        since_refactor_ = 0;
        if (m_ == 0) {
            return;
        }
        Matrix basis_matrix = Matrix::Zero(m_, m_);
        for (int p = 0; p < m_; ++p) {
            const int j = basic_[p];
            if (j < n_) {
                basis_matrix.col(p) = lp_.rows.col(j);
            } else if (j < n_ + m_) {
                basis_matrix(j - n_, p) = 1.0;
            } else {
                basis_matrix(art_row_[j - n_ - m_], p) = -1.0;
            }
        }
        Eigen::PartialPivLU<Matrix> lu(basis_matrix);
        binv_ = lu.inverse();
        recompute_basic_values();
    }

    void recompute_basic_values()
    {
        Vector rhs = lp_.rhs;
        Vector xn = Vector::Zero(n_);
        bool any = false;
        for (int j = 0; j < n_; ++j) {
            if (state_[j] != kBasic && x_[j] != 0.0) {
                xn[j] = x_[j];
                any = true;
            }
        }
        if (any) {
            rhs.noalias() -= lp_.rows * xn;
        }
        for (int j = n_; j < ncols(); ++j) {
            if (state_[j] != kBasic && x_[j] != 0.0) {
                if (j < n_ + m_) {
                    rhs[j - n_] -= x_[j];
                } else {
                    rhs[art_row_[j - n_ - m_]] += x_[j];
                }
            }
        }
        const Vector xb = binv_ * rhs;
        for (int p = 0; p < m_; ++p) {
            x_[basic_[p]] = xb[p];
        }
    }

    void compute_multipliers()
    {
        Vector cb(m_);
        for (int p = 0; p < m_; ++p) {
            cb[p] = cost_[basic_[p]];
        }
        y_ = m_ > 0 ? Vector(binv_.transpose() * cb) : Vector();
    }

    void compute_reduced_costs()
    {
        compute_multipliers();
        d_.resize(ncols());
        if (m_ > 0) {
            d_.head(n_).noalias() = cost_.head(n_) - lp_.rows.transpose() * y_;
        } else {
            d_.head(n_) = cost_.head(n_);
        }
        for (int i = 0; i < m_; ++i) {
            d_[n_ + i] = cost_[n_ + i] - y_[i];
        }
        for (int k = 0; k < nart_; ++k) {
            d_[n_ + m_ + k] = cost_[n_ + m_ + k] + y_[art_row_[k]];
        }
        for (int p = 0; p < m_; ++p) {
            d_[basic_[p]] = 0.0;
        }
    }

    void pivot(int r, const Vector& alpha)
    {
        const double piv = alpha[r];
        const Eigen::RowVectorXd row_r = binv_.row(r) / piv;
        binv_.noalias() -= alpha * row_r;
        binv_.row(r) = row_r;
        ++since_refactor_;
    }

    double max_primal_infeasibility() const
    {
        double worst = 0.0;
        for (int p = 0; p < m_; ++p) {
            const int j = basic_[p];
            worst = std::max({worst, lo_[j] - x_[j], x_[j] - hi_[j]});
        }
        return worst;
    }

    void note_step(double step)
    {
        if (step <= 1e-12) {
            if (++degenerate_run_ > 10 * std::max(m_, 1)) {
                bland_ = true;
            }
        } else {
            degenerate_run_ = 0;
        }
    }

    int choose_entering() const
    {
        const double tol = opt_.tol.optimality;
        int best = -1;
        double best_score = 0.0;
        for (int j = 0; j < ncols(); ++j) {
            const auto s = state_[j];
            if (s == kBasic || lo_[j] == hi_[j]) {
                continue;
            }
            const double d = d_[j];
            const bool eligible = (s == kLower && d < -tol) || (s == kUpper && d > tol) ||
                                  (s == kFree && std::abs(d) > tol);
            if (!eligible) {
                continue;
            }
            if (bland_) {
                return j;
            }
            if (std::abs(d) > best_score) {
                best_score = std::abs(d);
                best = j;
            }
        }
        return best;
    }

    // Returns optimal when no improving column remains, unbounded, or iteration_limit.
    SolveStatus primal_loop()
    {
        const double ftol = opt_.tol.feasibility;
        const double ptol = opt_.tol.pivot;
        Vector alpha(m_);
        for (;;) {
            if (iters_ >= max_iters_) {
                return SolveStatus::iteration_limit;
            }
            if (since_refactor_ >= opt_.refactor_period) {
                refactor();
            }
            compute_reduced_costs();
            const int q = choose_entering();
            if (q < 0) {
                return SolveStatus::optimal;
            }
            ++iters_;
            const double dir = (state_[q] == kUpper || (state_[q] == kFree && d_[q] > 0)) ? -1.0 : 1.0;
            ftran(q, alpha);

            // Harris two-pass ratio test; basic p moves at rate -dir * alpha[p].
            double bound_pass = kInf;
            for (int p = 0; p < m_; ++p) {
                const double rate = -dir * alpha[p];
                const int j = basic_[p];
                if (rate < -ptol && std::isfinite(lo_[j])) {
                    bound_pass = std::min(bound_pass, (x_[j] - lo_[j] + ftol) / -rate);
                } else if (rate > ptol && std::isfinite(hi_[j])) {
                    bound_pass = std::min(bound_pass, (hi_[j] + ftol - x_[j]) / rate);
                }
            }
            int leave = -1;
            double step = kInf;
            double best_pivot = 0.0;
            for (int p = 0; p < m_; ++p) {
                const double rate = -dir * alpha[p];
                const int j = basic_[p];
                double ratio = kInf;
                if (rate < -ptol && std::isfinite(lo_[j])) {
                    ratio = (x_[j] - lo_[j]) / -rate;
                } else if (rate > ptol && std::isfinite(hi_[j])) {
                    ratio = (hi_[j] - x_[j]) / rate;
                } else {
                    continue;
                }
                if (ratio > bound_pass) {
                    continue;
                }
                const double mag = std::abs(alpha[p]);
                bool take = false;
                if (leave < 0) {
                    take = true;
                } else if (bland_) {
                    take = ratio < step - 1e-12 || (ratio <= step + 1e-12 && j < basic_[leave]);
                } else {
                    take = mag > best_pivot;
                }
                if (take) {
                    leave = p;
                    step = ratio;
                    best_pivot = mag;
                }
            }
            step = std::max(step, 0.0);
            const double flip = hi_[q] - lo_[q];
            if (leave < 0 && !std::isfinite(flip)) {
                return SolveStatus::unbounded;
            }
            if (leave < 0 || flip <= step) {
                // bound flip, basis unchanged
                for (int p = 0; p < m_; ++p) {
                    x_[basic_[p]] -= dir * flip * alpha[p];
                }
                state_[q] = state_[q] == kLower ? kUpper : kLower;
                x_[q] = state_[q] == kLower ? lo_[q] : hi_[q];
                note_step(flip);
                continue;
            }
            for (int p = 0; p < m_; ++p) {
                x_[basic_[p]] -= dir * step * alpha[p];
            }
            x_[q] += dir * step;
            const int out = basic_[leave];
            const double rate = -dir * alpha[leave];
            if (rate < 0) {
                state_[out] = kLower;
                x_[out] = lo_[out];
            } else {
                state_[out] = kUpper;
                x_[out] = hi_[out];
            }
            state_[q] = kBasic;
            basic_[leave] = q;
            pivot(leave, alpha);
            note_step(step);
        }
    }

    // Dual simplex from a dual feasible basis. Returns optimal once primal
    // feasible, infeasible when a row proves it, or iteration_limit.
    SolveStatus dual_loop()
    {
        const double ftol = opt_.tol.feasibility;
        const double ptol = opt_.tol.pivot;
        Vector alpha(m_);
        Vector alpha_row(ncols());
        for (;;) {
            if (iters_ >= max_iters_) {
                return SolveStatus::iteration_limit;
            }
            if (since_refactor_ >= opt_.refactor_period) {
                refactor();
            }
            int r = -1;
            double worst = ftol;
            for (int p = 0; p < m_; ++p) {
                const int j = basic_[p];
                const double inf = std::max(lo_[j] - x_[j], x_[j] - hi_[j]);
                if (inf > worst) {
                    worst = inf;
                    r = p;
                }
            }
            if (r < 0) {
                return SolveStatus::optimal;
            }
            ++iters_;
            const int leaving = basic_[r];
            const bool to_lower = x_[leaving] < lo_[leaving];
            const double target = to_lower ? lo_[leaving] : hi_[leaving];
            compute_reduced_costs();
            const Vector rho = binv_.row(r).transpose();
            if (m_ > 0) {
                alpha_row.head(n_).noalias() = lp_.rows.transpose() * rho;
            }
            for (int i = 0; i < m_; ++i) {
                alpha_row[n_ + i] = rho[i];
            }
            for (int k = 0; k < nart_; ++k) {
                alpha_row[n_ + m_ + k] = -rho[art_row_[k]];
            }
            int q = -1;
            double best_ratio = kInf;
            double best_mag = 0.0;
            for (int j = 0; j < ncols(); ++j) {
                const auto s = state_[j];
                if (s == kBasic || lo_[j] == hi_[j]) {
                    continue;
                }
                const double a = alpha_row[j];
                if (std::abs(a) < ptol) {
                    continue;
                }
                const bool can_inc = s == kLower || s == kFree;
                const bool can_dec = s == kUpper || s == kFree;
                const bool ok = to_lower ? ((a < 0 && can_inc) || (a > 0 && can_dec))
                                         : ((a > 0 && can_inc) || (a < 0 && can_dec));
                if (!ok) {
                    continue;
                }
                double dj = d_[j];
                if (s == kLower) {
                    dj = std::max(dj, 0.0);
                } else if (s == kUpper) {
                    dj = std::max(-dj, 0.0);
                } else {
                    dj = std::abs(dj);
                }
                const double ratio = dj / std::abs(a);
                bool take = false;
                if (q < 0 || ratio < best_ratio - 1e-12) {
                    take = true;
                } else if (ratio <= best_ratio + 1e-12) {
                    take = bland_ ? false : std::abs(a) > best_mag;
                }
                if (take) {
                    q = j;
                    best_ratio = ratio;
                    best_mag = std::abs(a);
                }
            }
            if (q < 0) {
                return SolveStatus::infeasible;
            }
            ftran(q, alpha);
            if (std::abs(alpha[r]) < ptol) {
                // row and column disagree numerically; refresh and retry
                refactor();
                continue;
            }
            const double t = (x_[leaving] - target) / alpha[r];
            for (int p = 0; p < m_; ++p) {
                x_[basic_[p]] -= t * alpha[p];
            }
            x_[q] += t;
            x_[leaving] = target;
            state_[leaving] = to_lower ? kLower : kUpper;
            state_[q] = kBasic;
            basic_[r] = q;
            pivot(r, alpha);
            note_step(best_ratio);
        }
    }

    SolveStatus cold_solve()
    {
        bland_ = false;
        degenerate_run_ = 0;
        // Count rows whose slack would start negative.
        setup_columns(0);
        for (int j = 0; j < n_; ++j) {
            place_at_bound(j);
        }
        Vector residual = lp_.rhs;
        if (m_ > 0) {
            residual.noalias() -= lp_.rows * x_.head(n_);
        }
        art_row_.clear();
        for (int i = 0; i < m_; ++i) {
            if (residual[i] < 0) {
                art_row_.push_back(i);
            }
        }
        const Vector xs = x_.head(n_);
        const auto states = std::vector<std::int8_t>(state_.begin(), state_.begin() + n_);
        setup_columns(static_cast<int>(art_row_.size()));
        x_.head(n_) = xs;
        std::copy(states.begin(), states.end(), state_.begin());
        binv_ = Matrix::Identity(m_, m_);
        std::vector<int> art_of_row(static_cast<std::size_t>(m_), -1);
        for (int k = 0; k < nart_; ++k) {
            art_of_row[art_row_[k]] = k;
        }
        for (int i = 0; i < m_; ++i) {
            if (art_of_row[i] < 0) {
                basic_[i] = n_ + i;
                state_[n_ + i] = kBasic;
                x_[n_ + i] = residual[i];
            } else {
                const int col = n_ + m_ + art_of_row[i];
                basic_[i] = col;
                state_[col] = kBasic;
                x_[col] = -residual[i];
                x_[n_ + i] = 0.0;
                binv_(i, i) = -1.0;
            }
        }
        since_refactor_ = 0;

        if (nart_ > 0) {
            cost_.setZero();
            cost_.tail(nart_).setConstant(1.0);
            const SolveStatus s1 = primal_loop();
            if (s1 == SolveStatus::iteration_limit) {
                return s1;
            }
            refactor();
            double infeas = 0.0;
            for (int k = 0; k < nart_; ++k) {
                infeas += std::max(x_[n_ + m_ + k], 0.0);
            }
            if (infeas > opt_.tol.feasibility * std::max(1, nart_)) {
                return SolveStatus::infeasible;
            }
            drive_out_artificials();
            for (int k = 0; k < nart_; ++k) {
                const int col = n_ + m_ + k;
                lo_[col] = 0.0;
                hi_[col] = 0.0;
                if (state_[col] != kBasic) {
                    state_[col] = kLower;
                    x_[col] = 0.0;
                }
            }
            bland_ = false;
            degenerate_run_ = 0;
        }
        cost_.setZero();
        cost_.head(n_) = lp_.cost;
        return finish_phase2();
    }

    SolveStatus finish_phase2()
    {
        for (int round = 0; round < 4; ++round) {
            const SolveStatus s = primal_loop();
            if (s != SolveStatus::optimal) {
                return s;
            }
            refactor();
            if (max_primal_infeasibility() > opt_.tol.feasibility) {
                const SolveStatus ds = dual_loop();
                if (ds != SolveStatus::optimal) {
                    return ds;
                }
                continue;
            }
            compute_reduced_costs();
            if (choose_entering() < 0) {
                return SolveStatus::optimal;
            }
        }
        return SolveStatus::optimal;
    }

    void drive_out_artificials()
    {
        Vector alpha(m_);
        for (int p = 0; p < m_; ++p) {
            const int j = basic_[p];
            if (!is_artificial(j)) {
                continue;
            }
            const Vector rho = binv_.row(p).transpose();
            int q = -1;
            double best = 1e-7;
            for (int c = 0; c < n_ + m_; ++c) {
                if (state_[c] == kBasic) {
                    continue;
                }
                const double a = std::abs(column_dot(rho, c));
                if (a > best) {
                    best = a;
                    q = c;
                }
            }
            if (q < 0) {
                continue;  // redundant row
            }
            ftran(q, alpha);
            const double t = (x_[j] - 0.0) / alpha[p];
            for (int i = 0; i < m_; ++i) {
                x_[basic_[i]] -= t * alpha[i];
            }
            x_[q] += t;
            x_[j] = 0.0;
            state_[j] = kLower;
            state_[q] = kBasic;
            basic_[p] = q;
            pivot(p, alpha);
        }
        refactor();
    }

    bool load_basis(const Basis& b)
    {
        if (static_cast<int>(b.state.size()) != n_ + m_) {
            return false;
        }
        art_row_.clear();
        setup_columns(0);
        int count = 0;
        for (int j = 0; j < n_ + m_; ++j) {
            const auto s = b.state[j];
            state_[j] = s;
            if (s == kBasic) {
                if (count >= m_) {
                    return false;
                }
                basic_[count++] = j;
            } else if (s == kLower) {
                if (!std::isfinite(lo_[j])) {
                    return false;
                }
                x_[j] = lo_[j];
            } else if (s == kUpper) {
                if (!std::isfinite(hi_[j])) {
                    return false;
                }
                x_[j] = hi_[j];
            } else {
                x_[j] = 0.0;
            }
        }
        if (count != m_) {
            return false;
        }
        if (m_ > 0) {
            Matrix basis_matrix = Matrix::Zero(m_, m_);
            for (int p = 0; p < m_; ++p) {
                const int j = basic_[p];
                if (j < n_) {
                    basis_matrix.col(p) = lp_.rows.col(j);
                } else {
                    basis_matrix(j - n_, p) = 1.0;
                }
            }
            Eigen::PartialPivLU<Matrix> lu(basis_matrix);
            if (!(lu.rcond() > 1e-12)) {
                return false;
            }
            binv_ = lu.inverse();
        }
        cost_.head(n_) = lp_.cost;
        recompute_basic_values();
        since_refactor_ = 0;
        return true;
    }

    SolveStatus warm_solve()
    {
        bland_ = false;
        degenerate_run_ = 0;
        compute_reduced_costs();
        const double tol = opt_.tol.optimality;
        bool flipped = false;
        for (int j = 0; j < n_ + m_; ++j) {
            const auto s = state_[j];
            if (s == kBasic || lo_[j] == hi_[j]) {
                continue;
            }
            if (s == kLower && d_[j] < -tol) {
                if (!std::isfinite(hi_[j])) {
                    return SolveStatus::iteration_limit;
                }
                state_[j] = kUpper;
                x_[j] = hi_[j];
                flipped = true;
            } else if (s == kUpper && d_[j] > tol) {
                if (!std::isfinite(lo_[j])) {
                    return SolveStatus::iteration_limit;
                }
                state_[j] = kLower;
                x_[j] = lo_[j];
                flipped = true;
            } else if (s == kFree && std::abs(d_[j]) > tol) {
                return SolveStatus::iteration_limit;
            }
        }
        if (flipped) {
            recompute_basic_values();
        }
        const SolveStatus ds = dual_loop();
        if (ds != SolveStatus::optimal) {
            return ds;
        }
        return finish_phase2();
    }

    Basis export_basis() const
    {
        Basis b;
        b.state.assign(state_.begin(), state_.begin() + n_ + m_);
        for (int p = 0; p < m_; ++p) {
            const int j = basic_[p];
            if (is_artificial(j)) {
                b.state[n_ + art_row_[j - n_ - m_]] = kBasic;
            }
        }
        return b;
    }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts, const Basis* warm)
{
    lp.validate();
    Simplex simplex(lp, opts);
    return simplex.run(warm);
}

}  // namespace mgrid
