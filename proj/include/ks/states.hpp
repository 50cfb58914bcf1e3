#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ks/diagram.hpp"

namespace ks {

/// A dispersion-free state: value 0 or 1 for every vertex.
struct StateAssignment {
    std::vector<std::uint8_t> values;
};

/// Backtracking search for a 0-1 state: exactly one vertex per edge gets 1.
/// Vertices are tried most-constrained first, value 0 before 1, with unit
/// propagation along edges.
std::optional<StateAssignment> find_01_state(const Diagram& d);

/// Number of 0-1 states, stopping once `limit` is reached.
std::uint64_t count_01_states(const Diagram& d, std::optional<std::uint64_t> limit = std::nullopt);

bool verify_01_state(const Diagram& d, const StateAssignment& s);

}  // namespace ks
