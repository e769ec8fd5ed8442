#include "csmds/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include "csmds/errors.hpp"
#include "csmds/rng.hpp"

namespace csmds {

PointCloud generate_swissroll(std::size_t n, double noise, std::uint64_t seed) {
    if (n == 0) throw config_error("generate_swissroll: need at least one point");
    if (noise < 0.0) throw config_error("generate_swissroll: noise must be non-negative");
    Rng rng(seed);
    PointCloud cloud{Matrix(n, 3), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        const double v = rng.uniform();
        const double t = 1.5 * std::numbers::pi * (1.0 + 2.0 * u);
        cloud.points(i, 0) = t * std::cos(t);
        cloud.points(i, 1) = 21.0 * v;
        cloud.points(i, 2) = t * std::sin(t);
        if (noise > 0.0)
            for (std::size_t d = 0; d < 3; ++d) cloud.points(i, d) += noise * rng.gaussian();
        cloud.aux[i] = t;
    }
    return cloud;
}

NeighborGraph knn_graph(const Matrix& points, std::size_t k) {
    const std::size_t n = points.rows();
    if (k == 0) throw config_error("knn_graph: k must be positive");
    if (k >= n) throw config_error("knn_graph: k must be smaller than the number of points");

    NeighborGraph g{n, std::vector<std::vector<std::pair<std::size_t, double>>>(n)};
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double sq = 0.0;
            for (std::size_t d = 0; d < points.cols(); ++d) {
                const double diff = points(i, d) - points(j, d);
                sq += diff * diff;
            }
            dist[j] = {std::sqrt(sq), j};
        }
        dist[i].first = std::numeric_limits<double>::infinity();  // exclude self
        // (distance, index) order resolves distance ties toward the lower index.
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                          dist.end());
        for (std::size_t m = 0; m < k; ++m) g.edges[i].push_back({dist[m].second, dist[m].first});
    }

    // Symmetrize by union, then sort each list by neighbor index.
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [j, w] : std::vector(g.edges[i]))
            if (std::none_of(g.edges[j].begin(), g.edges[j].end(),
                             [i](const auto& e) { return e.first == i; }))
                g.edges[j].push_back({i, w});
    for (auto& list : g.edges) std::sort(list.begin(), list.end());
    return g;
}

std::size_t count_components(const NeighborGraph& g) {
    std::vector<char> seen(g.n, 0);
    std::size_t components = 0;
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < g.n; ++start) {
        if (seen[start]) continue;
        ++components;
        stack.push_back(start);
        seen[start] = 1;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (const auto& [v, w] : g.edges[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
        }
    }
    return components;
}

namespace {

void dijkstra_from(const NeighborGraph& g, std::size_t source, std::vector<double>& dist) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    dist.assign(g.n, inf);
    dist[source] = 0.0;
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.push({0.0, source});
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (const auto& [v, w] : g.edges[u])
            if (d + w < dist[v]) {
                dist[v] = d + w;
                heap.push({dist[v], v});
            }
    }
}

void bellman_ford_from(const NeighborGraph& g, std::size_t source, std::vector<double>& dist) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    dist.assign(g.n, inf);
    dist[source] = 0.0;
    for (std::size_t pass = 0; pass + 1 < g.n; ++pass) {
        bool changed = false;
        for (std::size_t u = 0; u < g.n; ++u) {
            if (dist[u] == inf) continue;
            for (const auto& [v, w] : g.edges[u])
                if (dist[u] + w < dist[v]) {
                    dist[v] = dist[u] + w;
                    changed = true;
                }
        }
        if (!changed) break;
    }
}

}  // namespace

TargetMatrix geodesic_distances(const NeighborGraph& g, ShortestPathAlgo algo) {
    if (g.n == 0) throw config_error("geodesic_distances: empty graph");
    if (const std::size_t c = count_components(g); c > 1)
        throw validation_error("geodesic_distances: graph is disconnected (" +
                               std::to_string(c) + " components); increase k");

    Matrix out(g.n, g.n);
    std::vector<double> dist;
    for (std::size_t s = 0; s < g.n; ++s) {
        if (algo == ShortestPathAlgo::dijkstra)
            dijkstra_from(g, s, dist);
        else
            bellman_ford_from(g, s, dist);
        for (std::size_t j = 0; j < g.n; ++j) out(s, j) = dist[j];
    }
    return TargetMatrix::validate(std::move(out));
}

}  // namespace csmds
