#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "csmds/matrix.hpp"
#include "csmds/types.hpp"

namespace csmds {

/// Ambient points plus the manifold parameter they were generated from
/// (plot coloring / ordering).
struct PointCloud {
    Matrix points;
    std::vector<double> aux;
};

/// Swissroll: t = 1.5*pi*(1 + 2u), point = (t cos t, 21 v, t sin t) plus
/// isotropic Gaussian noise of the given stddev; aux = t.
PointCloud generate_swissroll(std::size_t n, double noise, std::uint64_t seed);

/// Undirected weighted graph as adjacency lists, weights = Euclidean edge
/// lengths, each neighbor list sorted by index.
struct NeighborGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<std::size_t, double>>> edges;
};

/// k nearest neighbors per node (ties broken by lower index), symmetrized by
/// union.
NeighborGraph knn_graph(const Matrix& points, std::size_t k);

enum class ShortestPathAlgo { dijkstra, bellman_ford };

/// All-pairs shortest-path distances over the graph. Weights are positive, so
/// Dijkstra per source is the default; Bellman-Ford is kept for fidelity
/// checks and produces identical paths. Throws on a disconnected graph,
/// naming the component count.
TargetMatrix geodesic_distances(const NeighborGraph& g,
                                ShortestPathAlgo algo = ShortestPathAlgo::dijkstra);

/// Number of connected components.
std::size_t count_components(const NeighborGraph& g);

}  // namespace csmds
