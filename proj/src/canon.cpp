#include "ks/canon.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <numeric>

namespace ks {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            auto& p = parent[static_cast<std::size_t>(x)];
            p = parent[static_cast<std::size_t>(p)];
            x = p;
        }
        return x;
    }
    void unite(int x, int y) {
        x = find(x);
        y = find(y);
        if (x == y) return;
        if (x < y) std::swap(x, y);
        parent[static_cast<std::size_t>(x)] = y;  // root is the smaller id
    }
};

// Ordered partition of the incidence-graph nodes into contiguous cells.
struct Partition {
    std::vector<int> lab;       // position -> node
    std::vector<int> cell_of;   // node -> start position of its cell
    std::vector<int> cell_end;  // start position -> one past the cell
    int singletons = 0;

    bool discrete() const { return singletons == static_cast<int>(lab.size()); }
};

class Search {
public:
    explicit Search(const Diagram& d) : a_(d.vertex_count()), b_(d.edge_count()), n_(a_ + b_) {
        offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
        for (int v = 0; v < a_; ++v)
            offsets_[static_cast<std::size_t>(v) + 1] = static_cast<int>(d.incidence()[static_cast<std::size_t>(v)].size());
        for (int e = 0; e < b_; ++e) offsets_[static_cast<std::size_t>(a_ + e) + 1] = static_cast<int>(d.edge(e).size());
        std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
        adj_.resize(static_cast<std::size_t>(offsets_.back()));
        for (int v = 0; v < a_; ++v) {
            int k = offsets_[static_cast<std::size_t>(v)];
            for (int e : d.incidence()[static_cast<std::size_t>(v)]) adj_[static_cast<std::size_t>(k++)] = a_ + e;
        }
        for (int e = 0; e < b_; ++e) {
            int k = offsets_[static_cast<std::size_t>(a_ + e)];
            for (Vertex v : d.edge(e)) adj_[static_cast<std::size_t>(k++)] = v;
        }
        count_.assign(static_cast<std::size_t>(n_), 0);
        in_queue_.assign(static_cast<std::size_t>(n_), 0);
    }

    void run() {
        Partition p;
        p.lab.resize(static_cast<std::size_t>(n_));
        std::iota(p.lab.begin(), p.lab.end(), 0);
        p.cell_of.assign(static_cast<std::size_t>(n_), 0);
        p.cell_end.assign(static_cast<std::size_t>(n_), 0);
        std::deque<int> queue;
        auto make_cell = [&](int s, int e) {
            if (s == e) return;
            for (int k = s; k < e; ++k) p.cell_of[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(k)])] = s;
            p.cell_end[static_cast<std::size_t>(s)] = e;
            if (e - s == 1) ++p.singletons;
            queue.push_back(s);
            in_queue_[static_cast<std::size_t>(s)] = 1;
        };
        make_cell(0, a_);
        make_cell(a_, n_);
        if (n_ == 0) return;
        refine(p, queue);
        search(p, 0);
    }

    std::vector<int> best_lab;
    std::vector<std::vector<int>> gens;

private:
    int cell_size(const Partition& p, int s) const { return p.cell_end[static_cast<std::size_t>(s)] - s; }

    // Splits cell s by neighbour counts; returns starts of the fragments.
    void split_cell(Partition& p, int s, std::deque<int>& queue) {
        const int e = p.cell_end[static_cast<std::size_t>(s)];
        auto first = p.lab.begin() + s;
        auto last = p.lab.begin() + e;
        const int c0 = count_[static_cast<std::size_t>(*first)];
        if (std::all_of(first, last, [&](int x) { return count_[static_cast<std::size_t>(x)] == c0; })) return;
        std::sort(first, last, [&](int x, int y) {
            return count_[static_cast<std::size_t>(x)] < count_[static_cast<std::size_t>(y)];
        });
        std::vector<std::pair<int, int>> frags;  // [start, end)
        int start = s;
        for (int k = s + 1; k <= e; ++k) {
            if (k == e || count_[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(k)])] !=
                              count_[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(k - 1)])]) {
                frags.emplace_back(start, k);
                start = k;
            }
        }
        const bool was_queued = in_queue_[static_cast<std::size_t>(s)] != 0;
        std::size_t largest = 0;
        for (std::size_t i = 1; i < frags.size(); ++i)
            if (frags[i].second - frags[i].first > frags[largest].second - frags[largest].first) largest = i;
        for (std::size_t i = 0; i < frags.size(); ++i) {
            auto [fs, fe] = frags[i];
            for (int k = fs; k < fe; ++k) p.cell_of[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(k)])] = fs;
            p.cell_end[static_cast<std::size_t>(fs)] = fe;
            if (fe - fs == 1) ++p.singletons;
            if (i == 0) continue;  // same start as the old cell: queue state carries over
            if (was_queued || i != largest) {
                queue.push_back(fs);
                in_queue_[static_cast<std::size_t>(fs)] = 1;
            }
        }
        if (!was_queued && largest != 0) {
            queue.push_back(s);
            in_queue_[static_cast<std::size_t>(s)] = 1;
        }
    }

    void refine(Partition& p, std::deque<int>& queue) {
        std::vector<int> touched_nodes;
        std::vector<int> touched_cells;
        while (!queue.empty() && !p.discrete()) {
            const int w = queue.front();
            queue.pop_front();
            in_queue_[static_cast<std::size_t>(w)] = 0;
            const int we = p.cell_end[static_cast<std::size_t>(w)];
            for (int k = w; k < we; ++k) {
                const int x = p.lab[static_cast<std::size_t>(k)];
                for (int j = offsets_[static_cast<std::size_t>(x)]; j < offsets_[static_cast<std::size_t>(x) + 1]; ++j) {
                    const int y = adj_[static_cast<std::size_t>(j)];
                    if (count_[static_cast<std::size_t>(y)]++ == 0) touched_nodes.push_back(y);
                }
            }
            for (int y : touched_nodes) touched_cells.push_back(p.cell_of[static_cast<std::size_t>(y)]);
            std::sort(touched_cells.begin(), touched_cells.end());
            touched_cells.erase(std::unique(touched_cells.begin(), touched_cells.end()), touched_cells.end());
            for (int s : touched_cells)
                if (cell_size(p, s) > 1) split_cell(p, s, queue);
            for (int y : touched_nodes) count_[static_cast<std::size_t>(y)] = 0;
            touched_nodes.clear();
            touched_cells.clear();
        }
        for (int s : queue) in_queue_[static_cast<std::size_t>(s)] = 0;
        queue.clear();
    }

    int target_cell(const Partition& p) const {
        int best = -1;
        int best_size = n_ + 1;
        for (int s = 0; s < n_; s = p.cell_end[static_cast<std::size_t>(s)]) {
            int size = cell_size(p, s);
            if (size > 1 && size < best_size) {
                best = s;
                best_size = size;
            }
        }
        return best;
    }

    std::vector<int> certificate(const Partition& p) const {
        std::vector<int> pos(static_cast<std::size_t>(n_));
        for (int k = 0; k < n_; ++k) pos[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(k)])] = k;
        std::vector<int> cert;
        cert.reserve(adj_.size() / 2 + static_cast<std::size_t>(b_));
        std::vector<int> buf;
        for (int k = a_; k < n_; ++k) {
            const int x = p.lab[static_cast<std::size_t>(k)];
            buf.clear();
            for (int j = offsets_[static_cast<std::size_t>(x)]; j < offsets_[static_cast<std::size_t>(x) + 1]; ++j)
                buf.push_back(pos[static_cast<std::size_t>(adj_[static_cast<std::size_t>(j)])]);
            std::sort(buf.begin(), buf.end());
            cert.push_back(static_cast<int>(buf.size()));
            cert.insert(cert.end(), buf.begin(), buf.end());
        }
        return cert;
    }

    std::vector<int> automorphism(const std::vector<int>& from, const std::vector<int>& to) const {
        std::vector<int> g(static_cast<std::size_t>(n_));
        for (int k = 0; k < n_; ++k) g[static_cast<std::size_t>(from[static_cast<std::size_t>(k)])] = to[static_cast<std::size_t>(k)];
        return g;
    }

    void add_generator(std::vector<int> g) {
        for (int k = 0; k < n_; ++k)
            if (g[static_cast<std::size_t>(k)] != k) {
                gens.push_back(std::move(g));
                return;
            }
    }

    void leaf(const Partition& p) {
        std::vector<int> cert = certificate(p);
        if (first_lab_.empty()) {
            first_lab_ = best_lab = p.lab;
            first_cert_ = best_cert_ = std::move(cert);
            first_path_ = path_;
            return;
        }
        if (cert == first_cert_) {
            std::vector<int> g = automorphism(first_lab_, p.lab);
            std::size_t common = 0;
            while (common < path_.size() && path_[common] == first_path_[common]) ++common;
            bool maps_path = true;
            for (std::size_t j = 0; j <= common && j < path_.size(); ++j)
                if (g[static_cast<std::size_t>(first_path_[j])] != path_[j]) maps_path = false;
            add_generator(std::move(g));
            if (maps_path) jump_to_ = static_cast<int>(common);
            return;
        }
        if (cert == best_cert_) {
            add_generator(automorphism(best_lab, p.lab));
            return;
        }
        if (cert < best_cert_) {
            best_lab = p.lab;
            best_cert_ = std::move(cert);
        }
    }

    // True if some generator fixing the current path maps a smaller child onto v.
    bool equivalent_to_earlier(const std::vector<int>& children, std::size_t idx, UnionFind& uf,
                               std::size_t& gens_seen) const {
        for (; gens_seen < gens.size(); ++gens_seen) {
            const auto& g = gens[gens_seen];
            bool fixes = std::all_of(path_.begin(), path_.end(),
                                     [&](int x) { return g[static_cast<std::size_t>(x)] == x; });
            if (!fixes) continue;
            for (int k = 0; k < n_; ++k) uf.unite(k, g[static_cast<std::size_t>(k)]);
        }
        const int root = uf.find(children[idx]);
        for (std::size_t j = 0; j < idx; ++j)
            if (uf.find(children[j]) == root) return true;
        return false;
    }

    void search(const Partition& p, int level) {
        if (p.discrete()) {
            leaf(p);
            return;
        }
        const int s = target_cell(p);
        const int e = p.cell_end[static_cast<std::size_t>(s)];
        std::vector<int> children(p.lab.begin() + s, p.lab.begin() + e);
        std::sort(children.begin(), children.end());
        UnionFind uf(n_);
        std::size_t gens_seen = 0;
        for (std::size_t idx = 0; idx < children.size(); ++idx) {
            if (idx > 0 && equivalent_to_earlier(children, idx, uf, gens_seen)) continue;
            const int v = children[idx];
            Partition q = p;
            // individualize v: move it to the front of its cell
            auto it = std::find(q.lab.begin() + s, q.lab.begin() + e, v);
            std::iter_swap(q.lab.begin() + s, it);
            q.cell_end[static_cast<std::size_t>(s)] = s + 1;
            q.cell_end[static_cast<std::size_t>(s + 1)] = e;
            for (int k = s + 1; k < e; ++k) q.cell_of[static_cast<std::size_t>(q.lab[static_cast<std::size_t>(k)])] = s + 1;
            ++q.singletons;
            if (e - s == 2) ++q.singletons;
            std::deque<int> queue{s};
            in_queue_[static_cast<std::size_t>(s)] = 1;
            refine(q, queue);
            path_.push_back(v);
            search(q, level + 1);
            path_.pop_back();
            if (jump_to_ >= 0) {
                if (level > jump_to_) return;
                jump_to_ = -1;
            }
        }
    }

    int a_, b_, n_;
    std::vector<int> offsets_;
    std::vector<int> adj_;
    std::vector<int> count_;
    std::vector<char> in_queue_;

    std::vector<int> first_lab_;
    std::vector<int> first_cert_;
    std::vector<int> best_cert_;
    std::vector<int> first_path_;
    std::vector<int> path_;
    int jump_to_ = -1;
};

}  // namespace

std::vector<int> orbits_of(const std::vector<std::vector<int>>& gens, int size) {
    UnionFind uf(size);
    for (const auto& g : gens)
        for (int k = 0; k < size; ++k) uf.unite(k, g[static_cast<std::size_t>(k)]);
    std::vector<int> out(static_cast<std::size_t>(size));
    for (int k = 0; k < size; ++k) out[static_cast<std::size_t>(k)] = uf.find(k);
    return out;
}

Canonical canonicalize(const Diagram& d) {
    const int a = d.vertex_count();
    const int b = d.edge_count();
    Canonical out;
    if (b == 0) return out;

    Search search(d);
    search.run();
    const auto& lab = search.best_lab;

    // positions of vertex nodes are 0..a-1; relabel by first appearance in the
    // position-ordered edge list so forms read naturally ("123,145,...")
    std::vector<int> pos(static_cast<std::size_t>(a + b));
    for (int k = 0; k < a + b; ++k) pos[static_cast<std::size_t>(lab[static_cast<std::size_t>(k)])] = k;
    std::vector<std::pair<Edge, int>> edges;  // (edge over positions, input index)
    for (int k = a; k < a + b; ++k) {
        const int e = lab[static_cast<std::size_t>(k)] - a;
        Edge mapped;
        for (Vertex v : d.edge(e)) mapped.push_back(pos[static_cast<std::size_t>(v)]);
        std::sort(mapped.begin(), mapped.end());
        edges.emplace_back(std::move(mapped), e);
    }
    std::sort(edges.begin(), edges.end());
    std::vector<int> renum(static_cast<std::size_t>(a), -1);
    int next = 0;
    for (auto& [edge, idx] : edges)
        for (Vertex& v : edge) {
            if (renum[static_cast<std::size_t>(v)] < 0) renum[static_cast<std::size_t>(v)] = next++;
            v = renum[static_cast<std::size_t>(v)];
        }
    for (auto& [edge, idx] : edges) std::sort(edge.begin(), edge.end());
    std::sort(edges.begin(), edges.end());

    out.vertex_map.resize(static_cast<std::size_t>(a));
    for (int v = 0; v < a; ++v) out.vertex_map[static_cast<std::size_t>(v)] = renum[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])];
    out.edge_map.resize(static_cast<std::size_t>(b));
    std::vector<Edge> form_edges;
    for (int i = 0; i < b; ++i) {
        out.edge_map[static_cast<std::size_t>(edges[static_cast<std::size_t>(i)].second)] = i;
        form_edges.push_back(edges[static_cast<std::size_t>(i)].first);
    }
    out.form = Diagram(std::move(form_edges));
    out.generators = std::move(search.gens);

    auto orbit = orbits_of(out.generators, a + b);
    out.vertex_orbit.assign(orbit.begin(), orbit.begin() + a);
    out.edge_orbit.resize(static_cast<std::size_t>(b));
    for (int e = 0; e < b; ++e) out.edge_orbit[static_cast<std::size_t>(e)] = orbit[static_cast<std::size_t>(a + e)] - a;
    return out;
}

std::uint64_t canonical_hash(const Diagram& d) {
    const Diagram form = canonical_form(d);
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::uint64_t x) {
        h ^= x;
        h *= 1099511628211ULL;
    };
    mix(static_cast<std::uint64_t>(form.vertex_count()));
    for (const auto& e : form.edges()) {
        mix(0xFFFFu);
        for (Vertex v : e) mix(static_cast<std::uint64_t>(v));
    }
    return h;
}

std::string canonical_hash_hex(const Diagram& d) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(canonical_hash(d)));
    return buf;
}

}  // namespace ks
