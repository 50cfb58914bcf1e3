#include "ks/loops.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace ks {

LoopReport girth(const Diagram& d) {
    const int a = d.vertex_count();
    const int b = d.edge_count();
    const int n = a + b;
    // incidence graph: vertices 0..a-1, edges a..a+b-1
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int e = 0; e < b; ++e)
        for (Vertex v : d.edge(e)) {
            adj[static_cast<std::size_t>(v)].push_back(a + e);
            adj[static_cast<std::size_t>(a + e)].push_back(v);
        }

    LoopReport best;
    int best_len = -1;
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<int> parent(static_cast<std::size_t>(n));
    // For each incidence (v, e): shortest path from e back to v avoiding that incidence.
    for (int e = 0; e < b; ++e) {
        for (Vertex v : d.edge(e)) {
            std::fill(dist.begin(), dist.end(), -1);
            std::queue<int> q;
            const int src = a + e;
            dist[static_cast<std::size_t>(src)] = 0;
            parent[static_cast<std::size_t>(src)] = -1;
            q.push(src);
            while (!q.empty()) {
                int x = q.front();
                q.pop();
                if (x == v) break;
                if (best_len > 0 && dist[static_cast<std::size_t>(x)] + 1 >= best_len) continue;
                for (int y : adj[static_cast<std::size_t>(x)]) {
                    if ((x == src && y == v) || dist[static_cast<std::size_t>(y)] >= 0) continue;
                    dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
                    parent[static_cast<std::size_t>(y)] = x;
                    q.push(y);
                }
            }
            if (dist[static_cast<std::size_t>(v)] < 0) continue;
            const int len = dist[static_cast<std::size_t>(v)] + 1;
            if (best_len > 0 && len >= best_len) continue;
            best_len = len;
            // walk v -> ... -> e; the cycle is e, (path nodes), v, back to e
            std::vector<int> cycle;
            for (int x = v; x != -1; x = parent[static_cast<std::size_t>(x)]) cycle.push_back(x);
            // cycle = v, ..., e ; rotate so it starts at edge node e
            std::reverse(cycle.begin(), cycle.end());  // e, ..., v
            LoopReport r;
            r.girth = len / 2;
            for (std::size_t i = 0; i < cycle.size(); ++i) {
                if (i % 2 == 0)
                    r.edges.push_back(cycle[i] - a);
                else
                    r.vertices.push_back(cycle[i]);
            }
            best = std::move(r);
        }
    }
    return best;
}

bool verify_loop(const Diagram& d, const std::vector<int>& edges, const std::vector<Vertex>& vertices) {
    const std::size_t k = edges.size();
    if (k < 2 || vertices.size() != k) return false;
    if (std::set<int>(edges.begin(), edges.end()).size() != k) return false;
    if (std::set<int>(vertices.begin(), vertices.end()).size() != k) return false;
    for (std::size_t i = 0; i < k; ++i) {
        const Edge& e1 = d.edge(edges[i]);
        const Edge& e2 = d.edge(edges[(i + 1) % k]);
        const Vertex v = vertices[i];
        if (!std::binary_search(e1.begin(), e1.end(), v) || !std::binary_search(e2.begin(), e2.end(), v))
            return false;
    }
    return true;
}

std::vector<std::vector<int>> vertex_distances(const Diagram& d) {
    const int a = d.vertex_count();
    std::vector<std::vector<int>> dist(static_cast<std::size_t>(a), std::vector<int>(static_cast<std::size_t>(a), -1));
    std::vector<char> edge_seen(static_cast<std::size_t>(d.edge_count()));
    for (int s = 0; s < a; ++s) {
        auto& row = dist[static_cast<std::size_t>(s)];
        std::fill(edge_seen.begin(), edge_seen.end(), 0);
        std::vector<int> frontier{s};
        row[static_cast<std::size_t>(s)] = 0;
        int level = 0;
        while (!frontier.empty()) {
            ++level;
            std::vector<int> next;
            for (int v : frontier)
                for (int e : d.incidence()[static_cast<std::size_t>(v)]) {
                    if (edge_seen[static_cast<std::size_t>(e)]) continue;
                    edge_seen[static_cast<std::size_t>(e)] = 1;
                    for (Vertex w : d.edge(e))
                        if (row[static_cast<std::size_t>(w)] < 0) {
                            row[static_cast<std::size_t>(w)] = level;
                            next.push_back(w);
                        }
                }
            frontier = std::move(next);
        }
    }
    return dist;
}

bool is_connected(const Diagram& d) {
    if (d.vertex_count() == 0) return true;
    std::vector<char> seen(static_cast<std::size_t>(d.vertex_count()));
    std::vector<char> edge_seen(static_cast<std::size_t>(d.edge_count()));
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int e : d.incidence()[static_cast<std::size_t>(v)]) {
            if (edge_seen[static_cast<std::size_t>(e)]) continue;
            edge_seen[static_cast<std::size_t>(e)] = 1;
            for (Vertex w : d.edge(e))
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    ++reached;
                    stack.push_back(w);
                }
        }
    }
    return reached == d.vertex_count();
}

}  // namespace ks
