#include "mgrid/model.hpp"

#include <fmt/core.h>

namespace mgrid {

CentralizedProblem assemble_centralized(const std::vector<LocalBlock>& blocks, const Vector& b)
{
    const int K = static_cast<int>(b.size());
    int n = 0;
    int m = 0;
    CentralizedProblem out;
    for (const auto& blk : blocks) {
        if (blk.horizon != K || blk.A.rows() != K) {
            throw std::invalid_argument(fmt::format(
                "block '{}' has horizon {}, balance vector has length {}", blk.name, blk.horizon, K));
        }
        out.offsets.push_back(n);
        n += blk.size();
        m += blk.num_rows();
    }
    LinearProgram& lp = out.lp;
    lp.cost = Vector::Zero(n);
    lp.lower = Vector::Zero(n);
    lp.upper = Vector::Zero(n);
    lp.rows = Matrix::Zero(m + 2 * K, n);
    lp.rhs = Vector::Zero(m + 2 * K);
    lp.integer.assign(n, false);
    int row = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto& blk = blocks[i];
        const int off = out.offsets[i];
        const int ni = blk.size();
        if (ni == 0) {
            continue;
        }
        lp.cost.segment(off, ni) = blk.cost;
        lp.lower.segment(off, ni) = blk.lower;
        lp.upper.segment(off, ni) = blk.upper;
        for (int j = 0; j < ni; ++j) {
            lp.integer[off + j] = blk.integral[j];
        }
        lp.rows.block(row, off, blk.num_rows(), ni) = blk.G;
        lp.rhs.segment(row, blk.num_rows()) = blk.g;
        lp.rows.block(m, off, K, ni) = blk.A;
        lp.rows.block(m + K, off, K, ni) = -blk.A;
        row += blk.num_rows();
    }
    lp.rhs.segment(m, K) = b;
    lp.rhs.segment(m + K, K) = -b;
    out.coupling_row = m;
    return out;
}

}  // namespace mgrid
