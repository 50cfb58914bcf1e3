#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ks {

using Vertex = int;
using Edge = std::vector<Vertex>;

/// Number of symbols in the classic vertex alphabet `1..9A..Za..z`.
inline constexpr int kAlphabetSize = 61;

/// Classic symbol for a 0-based vertex index; throws if index >= 61.
char vertex_symbol(int index);
/// Inverse of vertex_symbol; std::nullopt for characters outside the alphabet.
std::optional<int> symbol_index(char c);

enum class Notation { Classic, Long };

enum class MmpErrorKind {
    UnknownSymbol,
    DuplicateVertexInEdge,
    EdgeTooSmall,
    Condition3Violation,
    DuplicateEdge,
    MissingTerminator,
    TooManyVertices,
};

std::string_view to_string(MmpErrorKind kind);

class MmpError : public std::runtime_error {
public:
    MmpError(MmpErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    MmpErrorKind kind() const noexcept { return kind_; }

private:
    MmpErrorKind kind_;
};

/// An MMP orthogonality diagram: a hypergraph given by its edge list.
///
/// Vertices are the dense range 0..vertex_count()-1 and every vertex lies in
/// at least one edge. Each edge is kept as a sorted vertex set; the order in
/// which its vertices were written is retained separately so that parsed
/// strings serialize back unchanged. Construction does not check the MMP
/// conditions, see validate().
class Diagram {
public:
    Diagram() = default;
    /// Edges over dense vertex ids. Each edge may be in any order; that order
    /// is what serialization writes back.
    explicit Diagram(std::vector<Edge> edges, std::vector<std::string> labels = {});

    int vertex_count() const noexcept { return vertex_count_; }
    int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
    /// Largest edge size (equal to every edge size for uniform diagrams).
    int edge_size() const noexcept { return edge_size_; }
    bool uniform() const noexcept;
    bool empty() const noexcept { return edges_.empty(); }

    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(int i) const { return edges_[static_cast<std::size_t>(i)]; }
    /// Vertices of edge i in the order they were written.
    const Edge& written_edge(int i) const { return written_[static_cast<std::size_t>(i)]; }

    /// Edge indices incident to each vertex, ascending.
    const std::vector<std::vector<int>>& incidence() const noexcept { return incidence_; }
    int degree(Vertex v) const { return static_cast<int>(incidence_[static_cast<std::size_t>(v)].size()); }

    /// Label used when serializing; defaults to the classic symbol or `v<k>`.
    std::string label(Vertex v) const;
    bool has_custom_labels() const noexcept { return !labels_.empty(); }

    /// The diagram with one extra edge; new vertices must be the next ids.
    Diagram with_edge(Edge e) const;
    /// The diagram with edge i removed and vertices left isolated dropped
    /// (the remaining vertices are renumbered densely, order preserved).
    Diagram without_edge(int i) const;
    /// Relabel vertices by perm (old id -> new id); written order follows.
    Diagram relabeled(const std::vector<int>& perm) const;

    /// Structural equality: same vertex count and same sorted edges in order.
    friend bool operator==(const Diagram& a, const Diagram& b) {
        return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_;
    }

private:
    std::vector<Edge> edges_;
    std::vector<Edge> written_;
    std::vector<std::vector<int>> incidence_;
    std::vector<std::string> labels_;
    int vertex_count_ = 0;
    int edge_size_ = 0;
};

/// Parses one diagram, e.g. "1234,2356,1456." Anything after '#' is ignored.
/// Internal ids follow first appearance. Throws MmpError on malformed input
/// or when the result violates MMP conditions 2 or 3.
Diagram parse_mmp(std::string_view text, Notation notation = Notation::Classic);

/// Writes the diagram in MMP notation terminated by '.'. Classic notation
/// throws MmpError(TooManyVertices) for diagrams with more than 61 vertices.
std::string serialize_mmp(const Diagram& d, Notation notation = Notation::Classic);

enum class ViolationKind { EdgeTooSmall, Condition3Violation, DuplicateEdge, DuplicateVertexInEdge };

struct Violation {
    ViolationKind kind;
    std::vector<int> edges;     // offending edge indices
    std::vector<Vertex> vertices;  // witnesses (shared or repeated vertices)
};

std::string_view to_string(ViolationKind kind);

/// MMP conditions 2 and 3 plus set-level sanity. Condition 1 holds by
/// construction of the edge-list representation.
std::vector<Violation> validate(const Diagram& d);

/// Number of vertices two edges have in common (both sorted).
int shared_count(const Edge& a, const Edge& b);

}  // namespace ks
