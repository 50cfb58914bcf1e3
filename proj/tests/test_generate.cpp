#include <algorithm>
#include <set>

#include "doctest.h"
#include "ks/canon.hpp"
#include "ks/diagram.hpp"
#include "ks/generate.hpp"
#include "ks/loops.hpp"
#include "ks/match.hpp"
#include "oracles.hpp"

using namespace ks;

namespace {

GenerationConfig config(int n, int b) {
    GenerationConfig cfg;
    cfg.edge_size = n;
    cfg.target_edges = b;
    return cfg;
}

// Number of isomorphism classes among all valid one-edge extensions of d,
// found without using automorphism orbits.
int extension_classes_brute(const Diagram& d, const GenerationConfig& cfg) {
    const int a = d.vertex_count();
    const int n = cfg.edge_size;
    std::vector<Diagram> classes;
    for (int fresh = 0; fresh <= n; ++fresh) {
        const int old = n - fresh;
        if (old > a || a + fresh > cfg.max_vertices) continue;
        std::vector<int> pick(static_cast<std::size_t>(a), 0);
        std::fill(pick.end() - old, pick.end(), 1);
        do {
            Edge e;
            for (int v = 0; v < a; ++v)
                if (pick[static_cast<std::size_t>(v)]) e.push_back(v);
            for (int k = 0; k < fresh; ++k) e.push_back(a + k);
            Diagram child = d.with_edge(e);
            if (!validate(child).empty()) continue;
            if (std::any_of(d.edges().begin(), d.edges().end(), [&](const Edge& f) { return shared_count(e, f) > n - 2; }))
                continue;
            if (cfg.min_loop > 2) {
                auto g = girth(child).girth;
                if (g && *g < cfg.min_loop) continue;
            }
            if (std::none_of(classes.begin(), classes.end(), [&](const Diagram& c) { return is_isomorphic(c, child); }))
                classes.push_back(child);
        } while (std::next_permutation(pick.begin(), pick.end()));
    }
    return static_cast<int>(classes.size());
}

}  // namespace

TEST_CASE("extensions of small diagrams") {
    auto cfg = config(3, 5);
    auto root = extensions(Diagram{}, cfg);
    REQUIRE(root.size() == 1);
    CHECK(root[0].child.edge_count() == 1);
    CHECK(root[0].child.vertex_count() == 3);

    cfg.min_loop = 5;
    auto one = extensions(parse_mmp("123."), cfg);
    CHECK(one.size() == 2);  // share one vertex or none

    auto cfg4 = config(4, 5);
    auto four = extensions(parse_mmp("1234."), cfg4);
    CHECK(four.size() == 3);  // share 0, 1 or 2 vertices
    for (const auto& m : four) {
        CHECK(m.child.edge_count() == 2);
        CHECK(m.child.written_edge(1).size() == 4);
    }
}

TEST_CASE("extensions are one per isomorphism class of children") {
    for (const char* text : {"123,345.", "123,345,567.", "123,456.", "123,345,561."}) {
        auto cfg = config(3, 8);
        Diagram d = parse_mmp(text);
        auto moves = extensions(d, cfg);
        CHECK_MESSAGE(static_cast<int>(moves.size()) == extension_classes_brute(d, cfg), std::string(text));
    }
    for (const char* text : {"1234,4567.", "1234,2356."}) {
        auto cfg = config(4, 8);
        Diagram d = parse_mmp(text);
        CHECK_MESSAGE(static_cast<int>(extensions(d, cfg).size()) == extension_classes_brute(d, cfg), std::string(text));
    }
}

TEST_CASE("extensions respect vertex budget and girth") {
    auto cfg = config(3, 5);
    cfg.max_vertices = 5;
    for (const auto& m : extensions(parse_mmp("123,345."), cfg)) CHECK(m.child.vertex_count() <= 5);
    cfg.max_vertices = 100;
    cfg.min_loop = 4;
    for (const auto& m : extensions(parse_mmp("123,345,567."), cfg)) {
        auto g = girth(m.child).girth;
        CHECK((!g || *g >= 4));
    }
}

TEST_CASE("the first edge is a canonical child") {
    auto cfg = config(3, 3);
    auto root = extensions(Diagram{}, cfg);
    CHECK(is_canonical_child(root[0], cfg));
}

TEST_CASE("each class is accepted from exactly one parent move") {
    // Level-b classes from every level-(b-1) class: exactly one accepted
    // (parent, move) pair lands in each child class.
    for (int n : {3, 4}) {
        auto cfg = config(n, 6);
        for (int b = 2; b <= (n == 3 ? 4 : 3); ++b) {
            auto parents = oracle::all_classes_brute(n, b - 1);
            auto children = oracle::all_classes_brute(n, b);
            std::vector<int> hits(children.size(), 0);
            for (const auto& p : parents)
                for (const auto& m : extensions(p, cfg)) {
                    if (!is_canonical_child(m, cfg)) continue;
                    for (std::size_t i = 0; i < children.size(); ++i)
                        if (is_isomorphic(children[i], m.child)) ++hits[i];
                }
            for (std::size_t i = 0; i < children.size(); ++i)
                CHECK_MESSAGE(hits[i] == 1, serialize_mmp(children[i]));
        }
    }
}

TEST_CASE("canonical parent is a one-edge-smaller subdiagram") {
    Diagram d = parse_mmp("123,345,567,789.");
    Diagram p = canonical_parent(d);
    CHECK(p.edge_count() == 3);
    CHECK(contains_subdiagram(d, p));
}

TEST_CASE("single edge generation") {
    auto cfg = config(3, 1);
    auto out = oracle::collect(cfg);
    REQUIRE(out.size() == 1);
    CHECK(serialize_mmp(out[0]) == "123.");
}

TEST_CASE("four-dimensional three-edge diagrams include 6-3") {
    auto cfg = config(4, 3);
    cfg.max_vertices = 6;
    cfg.exact_vertices = true;
    auto out = oracle::collect(cfg);
    Diagram six = parse_mmp("1234,2356,1456.");
    CHECK(std::any_of(out.begin(), out.end(), [&](const Diagram& d) { return is_isomorphic(d, six); }));
    for (const auto& d : out) {
        CHECK(d.vertex_count() == 6);
        CHECK(d.edge_count() == 3);
    }
}

TEST_CASE("stats count terminals by signature") {
    auto cfg = config(3, 3);
    cfg.emit_intermediate = true;
    std::uint64_t seen = 0;
    auto stats = generate(cfg, [&](const GenNode&) {
        ++seen;
        return Visit::Keep;
    });
    CHECK(stats.nodes == seen);
    std::uint64_t terminals = 0;
    for (const auto& [sig, count] : stats.terminals_by_signature) {
        CHECK(sig.second == 3);
        terminals += count;
    }
    CHECK(terminals == stats.terminals);
}

TEST_CASE("visit can cut a subtree") {
    auto cfg = config(3, 4);
    cfg.emit_intermediate = true;
    std::vector<Diagram> out;
    generate(cfg, [&](const GenNode& node) {
        out.push_back(node.diagram);
        return node.depth >= 2 ? Visit::Prune : Visit::Keep;
    });
    for (const auto& d : out) CHECK(d.edge_count() <= 2);
}

TEST_CASE("connected generation keeps every node connected") {
    auto cfg = config(3, 4);
    cfg.connected = true;
    cfg.emit_intermediate = true;
    for (const auto& d : oracle::collect(cfg)) CHECK(is_connected(d));
}

TEST_CASE("slices partition the terminals") {
    auto cfg = config(3, 5);
    cfg.max_vertices = 10;
    std::multiset<std::string> all;
    for (const auto& d : oracle::collect(cfg)) all.insert(canonical_hash_hex(d));
    for (int depth : {1, 2, 3}) {
        std::multiset<std::string> merged;
        for (int k = 0; k < 3; ++k) {
            auto part = cfg;
            part.slice = WorkSlice{k, 3, depth};
            for (const auto& d : oracle::collect(part)) merged.insert(canonical_hash_hex(d));
        }
        CHECK(merged == all);
    }
}

TEST_CASE("resume continues after a checkpointed subtree") {
    auto cfg = config(3, 4);
    cfg.emit_intermediate = true;
    std::vector<std::pair<std::vector<int>, std::string>> full;
    std::vector<std::vector<int>> checkpoints;
    cfg.checkpoint_depth = 2;
    cfg.checkpoint = [&](const std::vector<int>& p) { checkpoints.push_back(p); };
    generate(cfg, [&](const GenNode& node) {
        full.emplace_back(node.path, serialize_mmp(node.diagram));
        return Visit::Keep;
    });
    REQUIRE(checkpoints.size() >= 3);
    for (const auto& cp : {checkpoints[checkpoints.size() / 2], checkpoints[1]}) {
        // Expected: every node visited after the last node of cp's subtree.
        std::size_t last = 0;
        for (std::size_t i = 0; i < full.size(); ++i) {
            const auto& p = full[i].first;
            if (p.size() >= cp.size() && std::equal(cp.begin(), cp.end(), p.begin())) last = i;
        }
        auto rcfg = cfg;
        rcfg.checkpoint = nullptr;
        rcfg.resume_path = cp;
        std::vector<std::string> resumed;
        generate(rcfg, [&](const GenNode& node) {
            resumed.push_back(serialize_mmp(node.diagram));
            return Visit::Keep;
        });
        std::vector<std::string> expected;
        for (std::size_t i = last + 1; i < full.size(); ++i) expected.push_back(full[i].second);
        CHECK(resumed == expected);
    }
}

TEST_CASE("girth five run for 19 vertices and 13 edges") {
    GenerationConfig cfg = config(3, 13);
    cfg.min_loop = 5;
    cfg.max_vertices = 19;
    cfg.exact_vertices = true;
    auto out = oracle::collect(cfg);
    CHECK(out.size() == 6);
    Diagram target = parse_mmp("123,345,567,789,9AB,BCD,DE1,2GA,4HC,6IG,6JD,8FE,FGH.");
    CHECK(std::any_of(out.begin(), out.end(), [&](const Diagram& d) { return is_isomorphic(d, target); }));
}
