#include "ks/generate.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "ks/loops.hpp"

namespace ks {

namespace {

struct VectorHash {
    std::size_t operator()(const std::vector<int>& v) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (int x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

bool connected_without(const Diagram& d, int removed) {
    const int b = d.edge_count();
    if (b <= 2) return true;
    std::vector<char> edge_seen(static_cast<std::size_t>(b));
    std::vector<char> vertex_seen(static_cast<std::size_t>(d.vertex_count()));
    int start = removed == 0 ? 1 : 0;
    std::vector<int> stack{start};
    edge_seen[static_cast<std::size_t>(start)] = 1;
    edge_seen[static_cast<std::size_t>(removed)] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int e = stack.back();
        stack.pop_back();
        for (Vertex v : d.edge(e)) {
            if (vertex_seen[static_cast<std::size_t>(v)]) continue;
            vertex_seen[static_cast<std::size_t>(v)] = 1;
            for (int f : d.incidence()[static_cast<std::size_t>(v)])
                if (!edge_seen[static_cast<std::size_t>(f)]) {
                    edge_seen[static_cast<std::size_t>(f)] = 1;
                    ++reached;
                    stack.push_back(f);
                }
        }
    }
    return reached == b - 1;
}

// Isomorphism-invariant preference among edges; the designated edge has the
// smallest key. Edges with many low-degree vertices come first.
std::vector<int> edge_key(const Diagram& d, int e) {
    std::vector<int> key;
    for (Vertex v : d.edge(e)) key.push_back(d.degree(v));
    std::sort(key.begin(), key.end());
    key.push_back(static_cast<int>(d.edge(e).size()));
    return key;
}

std::vector<int> edge_key_fine(const Diagram& d, int e) {
    std::vector<int> weights;
    for (Vertex v : d.edge(e))
        for (int f : d.incidence()[static_cast<std::size_t>(v)]) {
            if (f == e) continue;
            int w = 0;
            for (Vertex x : d.edge(f)) w += d.degree(x);
            weights.push_back(w);
        }
    std::sort(weights.begin(), weights.end());
    return weights;
}

// Designated-edge test for the last edge of `child`. Fills canon when it had
// to be computed.
bool last_edge_is_designated(const Diagram& child, const GenerationConfig& cfg, std::optional<Canonical>* canon_out) {
    const int b = child.edge_count();
    const int last = b - 1;
    if (b == 1) return true;
    auto eligible = [&](int e) { return !cfg.connected || connected_without(child, e); };
    if (!eligible(last)) return false;
    const auto key_last = edge_key(child, last);
    std::vector<int> ties{last};
    for (int e = 0; e < last; ++e) {
        const auto key = edge_key(child, e);
        if (key > key_last) continue;
        if (!eligible(e)) continue;
        if (key < key_last) return false;
        ties.push_back(e);
    }
    if (ties.size() > 1) {
        const auto fine_last = edge_key_fine(child, last);
        std::vector<int> kept{last};
        for (std::size_t i = 1; i < ties.size(); ++i) {
            const auto fine = edge_key_fine(child, ties[i]);
            if (fine < fine_last) return false;
            if (fine == fine_last) kept.push_back(ties[i]);
        }
        ties = std::move(kept);
    }
    if (ties.size() == 1) return true;
    Canonical canon = canonicalize(child);
    int designated = ties[0];
    for (int e : ties)
        if (canon.edge_map[static_cast<std::size_t>(e)] < canon.edge_map[static_cast<std::size_t>(designated)]) designated = e;
    const bool ok = canon.edge_orbit[static_cast<std::size_t>(designated)] == canon.edge_orbit[static_cast<std::size_t>(last)];
    if (canon_out) *canon_out = std::move(canon);
    return ok;
}

int designated_edge(const Diagram& d, const GenerationConfig& cfg) {
    const int b = d.edge_count();
    std::vector<int> best;
    std::pair<std::vector<int>, std::vector<int>> best_key;
    for (int e = 0; e < b; ++e) {
        if (cfg.connected && !connected_without(d, e)) continue;
        auto key = std::make_pair(edge_key(d, e), edge_key_fine(d, e));
        if (best.empty() || key < best_key) {
            best = {e};
            best_key = std::move(key);
        } else if (key == best_key) {
            best.push_back(e);
        }
    }
    if (best.size() == 1) return best[0];
    Canonical canon = canonicalize(d);
    int designated = best[0];
    for (int e : best)
        if (canon.edge_map[static_cast<std::size_t>(e)] < canon.edge_map[static_cast<std::size_t>(designated)]) designated = e;
    return designated;
}

bool can_reach_terminal(const Diagram& d, const GenerationConfig& cfg) {
    const int remaining = cfg.target_edges - d.edge_count();
    if (cfg.exact_vertices) {
        const int fresh = cfg.connected && d.edge_count() > 0 ? cfg.edge_size - 1 : cfg.edge_size;
        if (d.vertex_count() + static_cast<long>(fresh) * remaining < cfg.max_vertices) return false;
    }
    return true;
}

class Generator {
public:
    Generator(const GenerationConfig& cfg, const std::function<Visit(const GenNode&)>& visit)
        : cfg_(cfg), visit_(visit) {}

    GenerationStats run() {
        Diagram root;
        resuming_ = !cfg_.resume_path.empty();
        expand(root, std::nullopt, 0);
        return stats_;
    }

private:
    bool is_terminal(const Diagram& d) const {
        if (d.edge_count() != cfg_.target_edges) return false;
        if (cfg_.exact_vertices && d.vertex_count() != cfg_.max_vertices) return false;
        return true;
    }

    void expand(const Diagram& d, std::optional<Canonical> canon, int depth) {
        if (depth >= cfg_.target_edges) return;
        if (!canon) canon = canonicalize(d);
        auto moves = extensions(d, cfg_, *canon);
        std::vector<std::pair<Diagram, std::optional<Canonical>>> children;
        for (auto& m : moves) {
            std::optional<Canonical> child_canon;
            if (last_edge_is_designated(m.child, cfg_, &child_canon))
                children.emplace_back(std::move(m.child), std::move(child_canon));
        }
        const bool sliced = cfg_.slice && cfg_.slice->count > 1;
        for (std::size_t i = 0; i < children.size(); ++i) {
            auto& [child, child_canon] = children[i];
            const int child_depth = depth + 1;
            path_.push_back(static_cast<int>(i));
            bool on_resume_prefix = false;
            if (resuming_ && depth < static_cast<int>(cfg_.resume_path.size())) {
                const int want = cfg_.resume_path[static_cast<std::size_t>(depth)];
                if (static_cast<int>(i) < want) {
                    path_.pop_back();
                    continue;
                }
                if (static_cast<int>(i) == want) {
                    if (child_depth == static_cast<int>(cfg_.resume_path.size())) {
                        resuming_ = false;  // this subtree was finished
                        path_.pop_back();
                        continue;
                    }
                    on_resume_prefix = true;
                } else {
                    resuming_ = false;
                }
            }

            bool owned = true;
            if (sliced) {
                if (child_depth == cfg_.slice->depth) {
                    // round-robin over siblings, offset per parent so small
                    // families still spread across workers
                    std::uint64_t ticket = i;
                    for (std::size_t k = 0; k + 1 < path_.size(); ++k)
                        ticket += (static_cast<std::uint64_t>(path_[k]) + 1) * (2654435761ULL >> k);
                    if (static_cast<int>(ticket % static_cast<std::uint64_t>(cfg_.slice->count)) != cfg_.slice->index) {
                        path_.pop_back();
                        continue;
                    }
                } else if (child_depth < cfg_.slice->depth) {
                    owned = cfg_.slice->index == 0;
                }
            }

            if (on_resume_prefix) {
                expand(child, std::move(child_canon), child_depth);
            } else if (cfg_.prune && cfg_.prune(child)) {
                if (owned) ++stats_.pruned;
            } else {
                const bool terminal = is_terminal(child);
                const bool reachable = terminal || cfg_.emit_intermediate || can_reach_terminal(child, cfg_);
                Visit verdict = Visit::Keep;
                if (reachable && (terminal || cfg_.emit_intermediate)) {
                    verdict = visit_(GenNode{child, child_depth, terminal, owned, path_});
                    if (owned) {
                        ++stats_.nodes;
                        ++stats_.by_signature[{child.vertex_count(), child.edge_count()}];
                        if (terminal) {
                            ++stats_.terminals;
                            ++stats_.terminals_by_signature[{child.vertex_count(), child.edge_count()}];
                        }
                    }
                }
                if (reachable && verdict == Visit::Keep) expand(child, std::move(child_canon), child_depth);
            }
            if (cfg_.checkpoint && child_depth <= cfg_.checkpoint_depth && !resuming_) cfg_.checkpoint(path_);
            path_.pop_back();
        }
    }

    const GenerationConfig& cfg_;
    const std::function<Visit(const GenNode&)>& visit_;
    GenerationStats stats_;
    std::vector<int> path_;
    bool resuming_ = false;
};

}  // namespace

void GenerationStats::merge(const GenerationStats& other) {
    nodes += other.nodes;
    terminals += other.terminals;
    pruned += other.pruned;
    for (const auto& [k, v] : other.by_signature) by_signature[k] += v;
    for (const auto& [k, v] : other.terminals_by_signature) terminals_by_signature[k] += v;
}

std::vector<ExtensionMove> extensions(const Diagram& d, const GenerationConfig& cfg) {
    return extensions(d, cfg, canonicalize(d));
}

std::vector<ExtensionMove> extensions(const Diagram& d, const GenerationConfig& cfg, const Canonical& canon) {
    const int n = cfg.edge_size;
    const int a = d.vertex_count();
    if (n < 3) throw std::invalid_argument("edge size must be at least 3");
    const int budget = cfg.max_vertices - a;  // fresh vertices still allowed
    if (budget < 0) return {};
    const int min_existing = std::max(cfg.connected && a > 0 ? 1 : 0, n - budget);
    const int max_existing = std::min(n, a);
    if (min_existing > max_existing) return {};

    const auto dist = vertex_distances(d);
    // per-edge count of chosen vertices, to cap overlaps at n-2
    std::vector<int> overlap(static_cast<std::size_t>(d.edge_count()), 0);
    std::vector<std::vector<int>> candidates;
    std::vector<int> chosen;

    auto compatible = [&](int v) {
        for (int u : chosen) {
            const int duv = dist[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
            if (duv < 0) continue;
            if (duv == 1) {
                if (cfg.min_loop > 2) return false;
            } else if (duv < cfg.min_loop - 1) {
                return false;
            }
        }
        for (int e : d.incidence()[static_cast<std::size_t>(v)])
            if (overlap[static_cast<std::size_t>(e)] + 1 > n - 2) return false;
        return true;
    };
    auto rec = [&](auto&& self, int from) -> void {
        if (static_cast<int>(chosen.size()) >= min_existing) candidates.push_back(chosen);
        if (static_cast<int>(chosen.size()) == max_existing) return;
        for (int v = from; v < a; ++v) {
            if (!compatible(v)) continue;
            chosen.push_back(v);
            for (int e : d.incidence()[static_cast<std::size_t>(v)]) ++overlap[static_cast<std::size_t>(e)];
            self(self, v + 1);
            for (int e : d.incidence()[static_cast<std::size_t>(v)]) --overlap[static_cast<std::size_t>(e)];
            chosen.pop_back();
        }
    };
    rec(rec, 0);

    // quotient by Aut(d)
    std::vector<int> rep(candidates.size());
    std::iota(rep.begin(), rep.end(), 0);
    if (!canon.generators.empty() && candidates.size() > 1) {
        std::unordered_map<std::vector<int>, int, VectorHash> index;
        index.reserve(candidates.size() * 2);
        for (std::size_t i = 0; i < candidates.size(); ++i) index.emplace(candidates[i], static_cast<int>(i));
        std::function<int(int)> find = [&](int x) {
            while (rep[static_cast<std::size_t>(x)] != x) x = rep[static_cast<std::size_t>(x)] = rep[static_cast<std::size_t>(rep[static_cast<std::size_t>(x)])];
            return x;
        };
        std::vector<int> image;
        for (const auto& g : canon.generators) {
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                image.clear();
                for (int v : candidates[i]) image.push_back(g[static_cast<std::size_t>(v)]);
                std::sort(image.begin(), image.end());
                auto it = index.find(image);
                if (it == index.end()) continue;  // cannot happen for a true automorphism
                int x = find(static_cast<int>(i));
                int y = find(it->second);
                if (x == y) continue;
                if (x < y) std::swap(x, y);
                rep[static_cast<std::size_t>(x)] = y;
            }
        }
        for (std::size_t i = 0; i < candidates.size(); ++i) rep[i] = find(static_cast<int>(i));
    }

    std::vector<ExtensionMove> moves;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (rep[i] != static_cast<int>(i)) continue;
        Edge e = candidates[i];
        for (int k = static_cast<int>(e.size()), fresh = a; k < n; ++k) e.push_back(fresh++);
        Diagram child = d.with_edge(e);
        moves.push_back({std::move(e), std::move(child)});
    }
    return moves;
}

bool is_canonical_child(const ExtensionMove& move, const GenerationConfig& cfg) {
    return last_edge_is_designated(move.child, cfg, nullptr);
}

Diagram canonical_parent(const Diagram& d, const GenerationConfig& cfg) {
    if (d.empty()) return d;
    return d.without_edge(designated_edge(d, cfg));
}

GenerationStats generate(const GenerationConfig& cfg, const std::function<Visit(const GenNode&)>& visit) {
    if (cfg.edge_size < 3) throw std::invalid_argument("edge size must be at least 3");
    if (cfg.target_edges < 1) throw std::invalid_argument("target edge count must be at least 1");
    if (cfg.min_loop < 2) throw std::invalid_argument("minimum loop size must be at least 2");
    Generator gen(cfg, visit);
    return gen.run();
}

}  // namespace ks
