#include "mgrid/analysis.hpp"

#include <algorithm>
#include <stdexcept>

namespace mgrid {

Matrix metropolis_weights(const CommGraph& g)
{
    Matrix W = Matrix::Zero(g.n, g.n);
    for (auto [i, j] : g.edges) {
        const double w = 1.0 / (1.0 + std::max(g.degree(i), g.degree(j)));
        W(i, j) = w;
        W(j, i) = w;
    }
    for (int i = 0; i < g.n; ++i) {
        W(i, i) = 1.0 - W.row(i).sum();
    }
    return W;
}

ConsensusResult consensus_bound(const std::vector<Vector>& contributions, const CommGraph& g,
                                int rounds)
{
    const int N = static_cast<int>(contributions.size());
    if (N != g.n || N == 0) {
        throw std::invalid_argument("consensus_bound: one contribution per graph node required");
    }
    if (!g.connected()) {
        throw std::invalid_argument("consensus_bound: graph is not connected");
    }
    const Matrix W = metropolis_weights(g);
    const int D = static_cast<int>(contributions[0].size());
    // row i holds agent i's value
    Matrix V(N, D);
    ConsensusResult out;
    out.target = Vector::Zero(D);
    for (int i = 0; i < N; ++i) {
        V.row(i) = N * contributions[i].transpose();
        out.target += contributions[i];
    }
    for (int t = 0; t < rounds; ++t) {
        V = W * V;
    }
    for (int i = 0; i < N; ++i) {
        out.values.push_back(V.row(i).transpose());
        out.max_deviation =
            std::max(out.max_deviation, (out.values.back() - out.target).cwiseAbs().maxCoeff());
    }
    return out;
}

}  // namespace mgrid
