#include "mgrid/dialgo.hpp"
#include "mgrid/rng.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include <fmt/core.h>

namespace mgrid {

bool CommGraph::connected() const
{
    if (n <= 1) {
        return true;
    }
    std::vector<bool> seen(n, false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    int count = 1;
    while (!q.empty()) {
        const int i = q.front();
        q.pop();
        for (int j : neighbors[i]) {
            if (!seen[j]) {
                seen[j] = true;
                ++count;
                q.push(j);
            }
        }
    }
    return count == n;
}

GraphKind parse_graph_kind(const std::string& s)
{
    if (s == "path") {
        return GraphKind::path;
    }
    if (s == "cycle") {
        return GraphKind::cycle;
    }
    if (s == "random") {
        return GraphKind::random;
    }
    throw std::invalid_argument(fmt::format("unknown graph kind '{}' (path, cycle, random)", s));
}

std::string to_string(GraphKind k)
{
    switch (k) {
    case GraphKind::path: return "path";
    case GraphKind::cycle: return "cycle";
    case GraphKind::random: return "random";
    }
    return "unknown";
}

CommGraph make_graph(int n, const std::vector<std::pair<int, int>>& edges)
{
    if (n < 1) {
        throw std::invalid_argument("graph needs at least one node");
    }
    CommGraph g;
    g.n = n;
    g.neighbors.assign(n, {});
    for (auto [i, j] : edges) {
        if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
            throw std::invalid_argument(fmt::format("invalid edge ({}, {})", i, j));
        }
        g.edges.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    for (auto [i, j] : g.edges) {
        g.neighbors[i].push_back(j);
        g.neighbors[j].push_back(i);
    }
    for (auto& nb : g.neighbors) {
        std::sort(nb.begin(), nb.end());
    }
    return g;
}

namespace {

std::vector<std::pair<int, int>> path_edges(int n)
{
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) {
        e.emplace_back(i, i + 1);
    }
    return e;
}

std::vector<std::pair<int, int>> cycle_edges(int n)
{
    auto e = path_edges(n);
    if (n > 2) {
        e.emplace_back(0, n - 1);
    }
    return e;
}

}  // namespace

CommGraph generate_graph(int n, GraphKind kind, std::uint64_t seed, double p)
{
    switch (kind) {
    case GraphKind::path: return make_graph(n, path_edges(n));
    case GraphKind::cycle: return make_graph(n, cycle_edges(n));
    case GraphKind::random: break;
    }
    Rng rng(seed);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<std::pair<int, int>> e;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (rng.uniform() < p) {
                    e.emplace_back(i, j);
                }
            }
        }
        CommGraph g = make_graph(n, e);
        if (g.connected()) {
            return g;
        }
    }
    return make_graph(n, cycle_edges(n));
}

}  // namespace mgrid
