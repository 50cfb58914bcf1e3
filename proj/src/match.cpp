#include "ks/match.hpp"

#include <algorithm>
#include <set>

namespace ks {

namespace {

class Embedder {
public:
    Embedder(const Diagram& host, const Diagram& pattern, bool exact)
        : host_(host), pattern_(pattern), exact_(exact),
          map_(static_cast<std::size_t>(pattern.vertex_count()), -1),
          used_vertex_(static_cast<std::size_t>(host.vertex_count()), 0),
          used_edge_(static_cast<std::size_t>(host.edge_count()), 0) {
        order_edges();
    }

    std::optional<VertexMap> run() {
        if (place(0)) return map_;
        return std::nullopt;
    }

private:
    // Pattern edges in an order where each one overlaps the ones before it
    // as much as possible.
    void order_edges() {
        const int b = pattern_.edge_count();
        std::vector<char> placed(static_cast<std::size_t>(b), 0);
        std::vector<char> covered(static_cast<std::size_t>(pattern_.vertex_count()), 0);
        for (int step = 0; step < b; ++step) {
            int best = -1;
            std::pair<int, int> best_score{-1, -1};
            for (int e = 0; e < b; ++e) {
                if (placed[static_cast<std::size_t>(e)]) continue;
                int overlap = 0;
                int deg = 0;
                for (Vertex v : pattern_.edge(e)) {
                    overlap += covered[static_cast<std::size_t>(v)];
                    deg += pattern_.degree(v);
                }
                std::pair<int, int> score{overlap, deg};
                if (score > best_score) {
                    best_score = score;
                    best = e;
                }
            }
            placed[static_cast<std::size_t>(best)] = 1;
            for (Vertex v : pattern_.edge(best)) covered[static_cast<std::size_t>(v)] = 1;
            order_.push_back(best);
        }
    }

    bool degree_ok(Vertex p, Vertex h) const {
        return exact_ ? pattern_.degree(p) == host_.degree(h) : pattern_.degree(p) <= host_.degree(h);
    }

    bool place(std::size_t k) {
        if (k == order_.size()) return true;
        const Edge& pe = pattern_.edge(order_[k]);
        std::vector<Vertex> free_pattern;
        for (Vertex p : pe)
            if (map_[static_cast<std::size_t>(p)] < 0) free_pattern.push_back(p);
        for (int h = 0; h < host_.edge_count(); ++h) {
            if (used_edge_[static_cast<std::size_t>(h)]) continue;
            const Edge& he = host_.edge(h);
            if (he.size() != pe.size()) continue;
            bool consistent = true;
            for (Vertex p : pe) {
                const Vertex img = map_[static_cast<std::size_t>(p)];
                if (img >= 0 && !std::binary_search(he.begin(), he.end(), img)) {
                    consistent = false;
                    break;
                }
            }
            if (!consistent) continue;
            std::vector<Vertex> free_host;
            for (Vertex x : he)
                if (!used_vertex_[static_cast<std::size_t>(x)]) free_host.push_back(x);
            if (free_host.size() != free_pattern.size()) continue;
            used_edge_[static_cast<std::size_t>(h)] = 1;
            if (assign_free(free_pattern, free_host, 0, k)) return true;
            used_edge_[static_cast<std::size_t>(h)] = 0;
        }
        return false;
    }

    bool assign_free(const std::vector<Vertex>& pv, const std::vector<Vertex>& hv, std::size_t i, std::size_t k) {
        if (i == pv.size()) return place(k + 1);
        const Vertex p = pv[i];
        for (Vertex h : hv) {
            if (used_vertex_[static_cast<std::size_t>(h)] || !degree_ok(p, h)) continue;
            map_[static_cast<std::size_t>(p)] = h;
            used_vertex_[static_cast<std::size_t>(h)] = 1;
            if (assign_free(pv, hv, i + 1, k)) return true;
            used_vertex_[static_cast<std::size_t>(h)] = 0;
            map_[static_cast<std::size_t>(p)] = -1;
        }
        return false;
    }

    const Diagram& host_;
    const Diagram& pattern_;
    bool exact_;
    std::vector<int> order_;
    VertexMap map_;
    std::vector<char> used_vertex_;
    std::vector<char> used_edge_;
};

std::vector<int> sorted_degrees(const Diagram& d) {
    std::vector<int> out;
    for (int v = 0; v < d.vertex_count(); ++v) out.push_back(d.degree(v));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::optional<VertexMap> find_subdiagram(const Diagram& host, const Diagram& pattern) {
    if (pattern.vertex_count() > host.vertex_count() || pattern.edge_count() > host.edge_count()) return std::nullopt;
    return Embedder(host, pattern, false).run();
}

std::optional<VertexMap> find_isomorphism(const Diagram& d1, const Diagram& d2) {
    if (d1.vertex_count() != d2.vertex_count() || d1.edge_count() != d2.edge_count()) return std::nullopt;
    if (sorted_degrees(d1) != sorted_degrees(d2)) return std::nullopt;
    return Embedder(d2, d1, true).run();
}

bool verify_embedding(const Diagram& host, const Diagram& pattern, const VertexMap& map) {
    if (static_cast<int>(map.size()) != pattern.vertex_count()) return false;
    std::set<Vertex> image;
    for (Vertex h : map) {
        if (h < 0 || h >= host.vertex_count()) return false;
        image.insert(h);
    }
    if (static_cast<int>(image.size()) != pattern.vertex_count()) return false;
    std::set<Edge> host_edges(host.edges().begin(), host.edges().end());
    std::set<Edge> hit;
    for (const auto& e : pattern.edges()) {
        Edge mapped;
        for (Vertex v : e) mapped.push_back(map[static_cast<std::size_t>(v)]);
        std::sort(mapped.begin(), mapped.end());
        if (!host_edges.count(mapped)) return false;
        hit.insert(mapped);
    }
    return static_cast<int>(hit.size()) == pattern.edge_count();
}

}  // namespace ks
