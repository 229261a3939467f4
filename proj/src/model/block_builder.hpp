#pragma once

#include "mgrid/model.hpp"

#include <string>
#include <utility>
#include <vector>

namespace mgrid::detail {

using Term = std::pair<int, double>;

/// Accumulates named columns and sparse <= rows, then densifies into a LocalBlock.
class BlockBuilder {
public:
    BlockBuilder(UnitKind kind, std::string name, int K);

    int add_var(const std::string& name, double lo, double hi, double cost, bool integral = false);
    void add_row(std::vector<Term> terms, double rhs);
    void add_equality(const std::vector<Term>& terms, double rhs);
    void set_coupling(int k, int column, double coef);

    LocalBlock finish();

private:
    LocalBlock block_;
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<double> cost_;
    std::vector<bool> integral_;
    std::vector<std::vector<Term>> rows_;
    std::vector<double> rhs_;
    std::vector<std::pair<int, Term>> coupling_;
};

}  // namespace mgrid::detail
