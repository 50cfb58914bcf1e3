#pragma once

#include <optional>
#include <vector>

#include "ks/diagram.hpp"

namespace ks {

/// Vertex map from a pattern into a host diagram: map[pattern vertex] = host vertex.
using VertexMap = std::vector<Vertex>;

/// Finds an injective vertex map sending every pattern edge onto a host
/// edge (as sets). Distinct pattern edges land on distinct host edges.
std::optional<VertexMap> find_subdiagram(const Diagram& host, const Diagram& pattern);

inline bool contains_subdiagram(const Diagram& host, const Diagram& pattern) {
    return find_subdiagram(host, pattern).has_value();
}

/// Direct backtracking isomorphism test; does not use canonical labeling.
std::optional<VertexMap> find_isomorphism(const Diagram& d1, const Diagram& d2);

inline bool is_isomorphic(const Diagram& d1, const Diagram& d2) {
    return find_isomorphism(d1, d2).has_value();
}

/// Checks a containment witness by direct set comparison.
bool verify_embedding(const Diagram& host, const Diagram& pattern, const VertexMap& map);

}  // namespace ks
