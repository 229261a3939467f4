#include "mgrid/model.hpp"

#include "model/block_builder.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace mgrid {

std::string to_string(UnitKind k)
{
    switch (k) {
    case UnitKind::storage: return "storage";
    case UnitKind::generator: return "generator";
    case UnitKind::controllable_load: return "controllable_load";
    case UnitKind::critical_load: return "critical_load";
    case UnitKind::grid: return "grid";
    }
    return "unknown";
}

int LocalBlock::num_integral() const
{
    return static_cast<int>(std::count(integral.begin(), integral.end(), true));
}

int LocalBlock::index(const std::string& var) const
{
    const auto it = var_index.find(var);
    if (it == var_index.end()) {
        throw std::out_of_range(fmt::format("block '{}' has no variable '{}'", name, var));
    }
    return it->second;
}

std::vector<std::string> LocalBlock::var_names() const
{
    std::vector<std::string> names(static_cast<std::size_t>(size()));
    for (const auto& [var, j] : var_index) {
        names[j] = var;
    }
    return names;
}

LinearProgram LocalBlock::to_linear_program() const
{
    LinearProgram lp;
    lp.cost = cost;
    lp.rows = G;
    lp.rhs = g;
    lp.lower = lower;
    lp.upper = upper;
    lp.integer = integral;
    return lp;
}

double LocalBlock::violation(const Vector& x) const
{
    double worst = 0.0;
    if (num_rows() > 0) {
        worst = std::max(worst, (G * x - g).maxCoeff());
    }
    for (int j = 0; j < size(); ++j) {
        worst = std::max({worst, lower[j] - x[j], x[j] - upper[j]});
    }
    return worst;
}

std::pair<Vector, Vector> coordinate_ranges(const LocalBlock& block)
{
    LinearProgram lp = block.to_linear_program();
    lp.integer.clear();
    const int n = block.size();
    Vector lo(n);
    Vector hi(n);
    for (int j = 0; j < n; ++j) {
        for (int sign : {1, -1}) {
            lp.cost.setZero();
            lp.cost[j] = sign;
            const LpSolution s = solve_lp(lp);
            if (s.status != SolveStatus::optimal) {
                throw ParameterError(fmt::format("block '{}': coordinate {} has status {}", block.name,
                                                 j, to_string(s.status)));
            }
            (sign > 0 ? lo : hi)[j] = s.x[j];
        }
    }
    return {lo, hi};
}

LocalBlock build_critical_load_block(int K, std::string name)
{
    if (K < 1) {
        throw ParameterError("horizon K must be >= 1");
    }
    detail::BlockBuilder b(UnitKind::critical_load, std::move(name), K);
    return b.finish();
}

namespace detail {

BlockBuilder::BlockBuilder(UnitKind kind, std::string name, int K)
{
    block_.kind = kind;
    block_.name = std::move(name);
    block_.horizon = K;
}

int BlockBuilder::add_var(const std::string& name, double lo, double hi, double cost, bool integral)
{
    const int j = static_cast<int>(cost_.size());
    lower_.push_back(lo);
    upper_.push_back(hi);
    cost_.push_back(cost);
    integral_.push_back(integral);
    block_.var_index.emplace(name, j);
    return j;
}

void BlockBuilder::add_row(std::vector<Term> terms, double rhs)
{
    rows_.push_back(std::move(terms));
    rhs_.push_back(rhs);
}

void BlockBuilder::add_equality(const std::vector<Term>& terms, double rhs)
{
    add_row(terms, rhs);
    std::vector<Term> negated = terms;
    for (auto& t : negated) {
        t.second = -t.second;
    }
    add_row(std::move(negated), -rhs);
}

void BlockBuilder::set_coupling(int k, int column, double coef)
{
    coupling_.push_back({k, {column, coef}});
}

LocalBlock BlockBuilder::finish()
{
    const int n = static_cast<int>(cost_.size());
    const int m = static_cast<int>(rows_.size());
    const int K = block_.horizon;
    block_.cost = Eigen::Map<const Vector>(cost_.data(), n);
    block_.lower = Eigen::Map<const Vector>(lower_.data(), n);
    block_.upper = Eigen::Map<const Vector>(upper_.data(), n);
    block_.integral = integral_;
    block_.G = Matrix::Zero(m, n);
    block_.g = Eigen::Map<const Vector>(rhs_.data(), m);
    for (int i = 0; i < m; ++i) {
        for (const auto& [j, c] : rows_[i]) {
            block_.G(i, j) += c;
        }
    }
    block_.A = Matrix::Zero(K, n);
    for (const auto& [k, term] : coupling_) {
        block_.A(k, term.first) += term.second;
    }
    return std::move(block_);
}

}  // namespace detail

}  // namespace mgrid
