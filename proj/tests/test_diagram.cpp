#include <doctest.h>

#include "ks/diagram.hpp"
#include "ks/loops.hpp"

using namespace ks;

namespace {

MmpErrorKind error_of(std::string_view text) {
    try {
        parse_mmp(text);
    } catch (const MmpError& e) {
        return e.kind();
    }
    FAIL("no error for " << text);
    return MmpErrorKind::UnknownSymbol;
}

const char* k193 = "123,345,567,789,9AB,BCD,DE1,2GA,4HC,6IG,6JD,8FE,FGH.";

}  // namespace

TEST_CASE("alphabet") {
    CHECK(vertex_symbol(0) == '1');
    CHECK(vertex_symbol(8) == '9');
    CHECK(vertex_symbol(9) == 'A');
    CHECK(vertex_symbol(34) == 'Z');
    CHECK(vertex_symbol(35) == 'a');
    CHECK(vertex_symbol(60) == 'z');
    CHECK_THROWS(vertex_symbol(61));
    for (int i = 0; i < kAlphabetSize; ++i) CHECK(symbol_index(vertex_symbol(i)) == i);
    CHECK_FALSE(symbol_index('0').has_value());
    CHECK_FALSE(symbol_index('_').has_value());
}

TEST_CASE("parse 6-3") {
    const Diagram d = parse_mmp("1234,2356,1456.");
    CHECK(d.vertex_count() == 6);
    CHECK(d.edge_count() == 3);
    CHECK(d.edge_size() == 4);
    CHECK(d.uniform());
    CHECK(validate(d).empty());
}

TEST_CASE("parse 19-13") {
    const Diagram d = parse_mmp(k193);
    CHECK(d.vertex_count() == 19);
    CHECK(d.edge_count() == 13);
    CHECK(d.edge_size() == 3);
    CHECK(serialize_mmp(d) == k193);
}

TEST_CASE("ids follow first appearance and labels are kept") {
    const Diagram d = parse_mmp("ZA1,1BC.");
    CHECK(d.label(0) == "Z");
    CHECK(d.label(1) == "A");
    CHECK(d.label(2) == "1");
    CHECK(d.edge(1) == Edge{2, 3, 4});
    CHECK(serialize_mmp(d) == "ZA1,1BC.");
}

TEST_CASE("whitespace and comments") {
    const Diagram d = parse_mmp("  123 , 345 .  # two triples");
    CHECK(d.edge_count() == 2);
    CHECK(serialize_mmp(d) == "123,345.");
}

TEST_CASE("parse errors") {
    CHECK(error_of("12,34.") == MmpErrorKind::EdgeTooSmall);
    CHECK(error_of("123,3#4.") == MmpErrorKind::MissingTerminator);
    CHECK(error_of("12_.") == MmpErrorKind::UnknownSymbol);
    CHECK(error_of("1123.") == MmpErrorKind::DuplicateVertexInEdge);
    CHECK(error_of("123,134.") == MmpErrorKind::Condition3Violation);
    CHECK(error_of("123,321.") == MmpErrorKind::DuplicateEdge);
    CHECK(error_of("123,345") == MmpErrorKind::MissingTerminator);
}

TEST_CASE("error message names the token") {
    try {
        parse_mmp("123,4_5.");
        FAIL("expected error");
    } catch (const MmpError& e) {
        CHECK(std::string(e.what()).find('_') != std::string::npos);
    }
}

TEST_CASE("validate") {
    CHECK(validate(Diagram({{0, 1, 2, 3}, {1, 2, 4, 5}, {0, 3, 4, 5}})).empty());
    const auto v = validate(Diagram({{0, 1, 2}, {0, 2, 3}}));
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == ViolationKind::Condition3Violation);
    CHECK(v[0].edges == std::vector<int>{0, 1});
    CHECK(v[0].vertices == std::vector<Vertex>{0, 2});
    CHECK(validate(Diagram({{0, 1, 2}, {3, 4, 5}})).empty());
    CHECK(validate(Diagram({{0, 1}, {1, 2, 3}}))[0].kind == ViolationKind::EdgeTooSmall);
    CHECK(validate(Diagram({{0, 1, 2}, {2, 1, 0}}))[0].kind == ViolationKind::DuplicateEdge);
}

TEST_CASE("serialize") {
    CHECK(serialize_mmp(Diagram({{0, 1, 2}})) == "123.");
    CHECK(serialize_mmp(Diagram{}) == ".");
    std::vector<Edge> edges;
    for (int k = 0; k < 31; ++k) edges.push_back({2 * k, 2 * k + 1, 62 + k});
    const Diagram big(edges);
    CHECK(big.vertex_count() == 93);
    try {
        serialize_mmp(big);
        FAIL("expected error");
    } catch (const MmpError& e) {
        CHECK(e.kind() == MmpErrorKind::TooManyVertices);
    }
    const std::string text = serialize_mmp(big, Notation::Long);
    CHECK(text.substr(0, 8) == "v1v2v63,");
    CHECK(serialize_mmp(parse_mmp(text, Notation::Long), Notation::Long) == text);
}

TEST_CASE("61 vertices still serialize") {
    std::vector<Edge> edges;
    for (int k = 0; k + 2 < 61; k += 2) edges.push_back({k, k + 1, k + 2});
    const Diagram d(edges);
    CHECK(d.vertex_count() == 61);
    CHECK(serialize_mmp(d).find('z') != std::string::npos);
}

TEST_CASE("edge removal renumbers") {
    const Diagram d = parse_mmp("123,345,567.");
    const Diagram r = d.without_edge(1);
    CHECK(r.vertex_count() == 6);
    CHECK(r.edge_count() == 2);
    CHECK(validate(r).empty());
}

TEST_CASE("girth examples") {
    CHECK(girth(parse_mmp("1234,2356,1456.")).girth == 2);
    CHECK(girth(parse_mmp("123,345,561.")).girth == 3);
    const LoopReport r = girth(parse_mmp(k193));
    CHECK(r.girth == 5);
    CHECK(verify_loop(parse_mmp(k193), r.edges, r.vertices));
    CHECK_FALSE(girth(parse_mmp("123,345,567.")).girth.has_value());
    CHECK_FALSE(girth(parse_mmp("123.")).girth.has_value());
}

TEST_CASE("loop witness checks") {
    const Diagram d = parse_mmp("123,345,561.");
    CHECK(verify_loop(d, {0, 1, 2}, {2, 4, 0}));
    CHECK_FALSE(verify_loop(d, {0, 1, 2}, {2, 2, 0}));
    CHECK_FALSE(verify_loop(d, {0, 1, 1}, {2, 4, 0}));
    CHECK_FALSE(verify_loop(d, {0, 1, 2}, {1, 4, 0}));
}

TEST_CASE("distances and connectivity") {
    const Diagram d = parse_mmp("123,345,678.");
    const auto dist = vertex_distances(d);
    CHECK(dist[0][0] == 0);
    CHECK(dist[0][1] == 1);
    CHECK(dist[0][4] == 2);
    CHECK(dist[0][5] == -1);
    CHECK_FALSE(is_connected(d));
    CHECK(is_connected(parse_mmp("123,345.")));
}
