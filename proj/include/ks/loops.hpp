#pragma once

#include <optional>
#include <vector>

#include "ks/diagram.hpp"

namespace ks {

/// Shortest loop of a diagram.
///
/// A loop of size 2 is a pair of edges sharing at least two vertices. A loop
/// of size k >= 3 is k distinct edges e1..ek joined by k distinct vertices
/// v1..vk with vi in both ei and e(i+1 mod k). Both cases are exactly the
/// cycles of length 2k in the vertex/edge incidence graph.
struct LoopReport {
    std::optional<int> girth;    // nullopt when the diagram has no loop
    std::vector<int> edges;      // e1..ek
    std::vector<Vertex> vertices;  // v1..vk, vi shared by edges[i] and edges[i+1 mod k]
};

LoopReport girth(const Diagram& d);

/// Checks a loop witness by direct membership tests.
bool verify_loop(const Diagram& d, const std::vector<int>& edges, const std::vector<Vertex>& vertices);

/// Edge-count distance between every pair of vertices: 0 on the diagonal,
/// 1 for vertices sharing an edge, -1 when disconnected.
std::vector<std::vector<int>> vertex_distances(const Diagram& d);

bool is_connected(const Diagram& d);

}  // namespace ks
