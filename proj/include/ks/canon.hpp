#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ks/diagram.hpp"

namespace ks {

/// Result of canonically labeling a diagram.
///
/// Nodes of the incidence graph are numbered vertices first (0..a-1) and
/// edges after them (a..a+b-1); automorphism generators act on that range.
struct Canonical {
    Diagram form;                            // canonical representative
    std::vector<int> vertex_map;             // input vertex -> vertex of form
    std::vector<int> edge_map;               // input edge index -> edge index in form
    std::vector<std::vector<int>> generators;  // generate Aut(d) on incidence nodes
    std::vector<int> vertex_orbit;           // smallest member of each vertex's orbit
    std::vector<int> edge_orbit;             // smallest member of each edge's orbit
};

/// Canonical labeling by equitable refinement plus individualization search
/// with automorphism pruning. Two diagrams get equal forms iff isomorphic.
Canonical canonicalize(const Diagram& d);

inline Diagram canonical_form(const Diagram& d) { return canonicalize(d).form; }

/// Stable 64-bit hash of the canonical form (FNV-1a over its edge list).
std::uint64_t canonical_hash(const Diagram& d);
std::string canonical_hash_hex(const Diagram& d);

/// Orbit representative per element under the group generated by gens,
/// acting on 0..size-1.
std::vector<int> orbits_of(const std::vector<std::vector<int>>& gens, int size);

}  // namespace ks
