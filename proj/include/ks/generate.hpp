#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ks/canon.hpp"
#include "ks/diagram.hpp"

namespace ks {

enum class Visit { Keep, Prune };

/// Static round-robin split of the generation tree: worker `index` of
/// `count` owns every count-th subtree rooted at `depth`.
struct WorkSlice {
    int index = 0;
    int count = 1;
    int depth = 2;
};

struct GenerationConfig {
    int edge_size = 3;
    int target_edges = 1;
    int max_vertices = std::numeric_limits<int>::max();
    /// Required girth; 2 places no constraint. Acyclic diagrams always pass.
    int min_loop = 2;
    /// Report diagrams with fewer than target_edges edges as well.
    bool emit_intermediate = false;
    /// Terminals must have exactly max_vertices vertices.
    bool exact_vertices = false;
    /// Only connected diagrams (every intermediate stays connected).
    bool connected = false;
    /// Partial-diagram predicate; true discards the diagram and its subtree.
    std::function<bool(const Diagram&)> prune;
    std::optional<WorkSlice> slice;
    /// Path of child indices of the last fully explored subtree.
    std::vector<int> resume_path;
    /// Called with the path of each fully explored subtree at depth <= checkpoint_depth.
    std::function<void(const std::vector<int>&)> checkpoint;
    int checkpoint_depth = 0;
};

struct ExtensionMove {
    Edge new_edge;   // existing vertices then fresh ids in ascending order
    Diagram child;   // parent plus new_edge as its last edge
};

/// One representative per Aut(d)-orbit of valid one-edge extensions that
/// respect the vertex budget, the girth bound and connectivity.
std::vector<ExtensionMove> extensions(const Diagram& d, const GenerationConfig& cfg);
std::vector<ExtensionMove> extensions(const Diagram& d, const GenerationConfig& cfg, const Canonical& canon);

/// True iff the move's edge lies in the orbit of the child's designated
/// parent-defining edge. Each isomorphism class then has exactly one parent
/// class.
bool is_canonical_child(const ExtensionMove& move, const GenerationConfig& cfg = {});

/// The canonical parent: d minus its designated edge.
Diagram canonical_parent(const Diagram& d, const GenerationConfig& cfg = {});

struct GenNode {
    const Diagram& diagram;
    int depth;
    bool terminal;
    /// False for nodes above the slice depth seen by workers other than 0;
    /// such nodes are reported so pruning stays consistent but must not be
    /// counted or written.
    bool owned;
    const std::vector<int>& path;
};

struct GenerationStats {
    std::uint64_t nodes = 0;      // diagrams visited (owned)
    std::uint64_t terminals = 0;  // of which terminal
    std::uint64_t pruned = 0;     // discarded by cfg.prune
    std::map<std::pair<int, int>, std::uint64_t> by_signature;           // (a, b) -> visited
    std::map<std::pair<int, int>, std::uint64_t> terminals_by_signature;  // (a, b) -> terminals

    void merge(const GenerationStats& other);
};

/// Depth-first canonical augmentation from the empty diagram. visit sees
/// every terminal (and every intermediate diagram when emit_intermediate);
/// returning Visit::Prune skips the subtree.
GenerationStats generate(const GenerationConfig& cfg, const std::function<Visit(const GenNode&)>& visit);

}  // namespace ks
