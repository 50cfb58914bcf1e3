#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "ks/canon.hpp"
#include "ks/diagram.hpp"
#include "ks/loops.hpp"
#include "ks/match.hpp"
#include "ks/pipeline.hpp"
#include "ks/states.hpp"

using namespace ks;

TEST_CASE("catalog integrity") {
    Catalog c = Catalog::builtin();
    REQUIRE(c.entries().size() == 5);
    for (const auto& [name, mmp] : c.entries()) {
        Diagram d = parse_mmp(mmp);
        CHECK_MESSAGE(validate(d).empty(), name);
        CHECK_MESSAGE(!find_01_state(d), name);
        CHECK(c.find(name).has_value());
    }
    CHECK(c.find("6-3")->edge_size() == 4);
    CHECK(girth(*c.find("19-13")).girth == 5);
    CHECK_FALSE(c.find("nope"));
}

TEST_CASE("catalog save and load") {
    Catalog c = Catalog::builtin();
    std::ostringstream out;
    c.save(out);
    Catalog back;
    std::istringstream in("# imported\n" + out.str() + "\n");
    back.load(in);
    CHECK(back.entries() == c.entries());
    std::istringstream bad("lonely\n");
    CHECK_THROWS_AS(back.load(bad), std::invalid_argument);
}

TEST_CASE("classification") {
    Catalog cat = Catalog::builtin();
    ClassifyOptions opts;
    opts.catalog = &cat;

    auto six = classify(*cat.find("6-3"), opts);
    CHECK(six.classification == KsClass::Unrealizable);
    CHECK_FALSE(six.has_state);
    CHECK(six.realization == Realization::Unsat);
    CHECK(six.solution_ref == "-");

    auto peres = classify(*cat.find("24-24-peres"), opts);
    CHECK(peres.classification == KsClass::Ks);
    CHECK(peres.realization == Realization::Sat);
    CHECK(std::count(peres.tags.begin(), peres.tags.end(), "22-13-a") == 1);
    CHECK(std::count(peres.tags.begin(), peres.tags.end(), "22-13-b") == 1);
    CHECK(std::count(peres.tags.begin(), peres.tags.end(), "24-24-peres") == 1);
    CHECK(peres.solution_ref == "sol:" + canonical_hash_hex(peres.diagram));
    REQUIRE(peres.solution);
    CHECK(verify_solution(peres.diagram, *peres.solution).ok);

    auto edge = classify(parse_mmp("123."), opts);
    CHECK(edge.classification == KsClass::RealizableClassical);
    CHECK(edge.tags.empty());

    opts.interval.max_boxes = 5;
    auto pending = classify(*cat.find("19-13"), opts);
    CHECK(pending.classification == KsClass::Pending);
    CHECK(pending.solution_ref == "pending:max_boxes=5");
}

TEST_CASE("inequality check") {
    KsRecord r;
    r.diagram = parse_mmp("1234,2356,1456.");
    CHECK(inequality_check(r));
    r.diagram = parse_mmp("123,345,567,789,9AB,BCD,DE1,2GA,4HC,6IG,6JD,8FE,FGH.");
    CHECK(inequality_check(r));
    r.diagram = parse_mmp("1234,4567,1357.");  // a = 7, b = 3, n = 4
    CHECK_FALSE(inequality_check(r));

    PipelineStats stats;
    r.has_state = false;
    stats.add(r);
    CHECK(stats.inequality_violations == 1);
    CHECK(stats.violating.size() == 1);
}

TEST_CASE("record lines round trip") {
    Catalog cat = Catalog::builtin();
    ClassifyOptions opts;
    opts.catalog = &cat;
    auto rec = classify(*cat.find("24-24-peres"), opts);
    auto line = format_record(rec);
    auto back = parse_record(line);
    REQUIRE(back);
    CHECK(back->mmp == serialize_mmp(rec.diagram));
    CHECK(back->a == 24);
    CHECK(back->b == 24);
    CHECK(back->n == 4);
    CHECK(back->states == "NONE");
    CHECK(back->realize == "SAT");
    CHECK(back->classification == "KS");
    CHECK(back->tags == rec.tags);
    CHECK(back->solution_ref == rec.solution_ref);
    CHECK_FALSE(parse_record("123.\t3"));

    auto block = format_solution_block(rec);
    CHECK(block.rfind("@ " + canonical_hash_hex(rec.diagram), 0) == 0);
}

TEST_CASE("small pipeline run") {
    GenerationConfig cfg;
    cfg.edge_size = 3;
    cfg.target_edges = 4;
    cfg.max_vertices = 9;
    cfg.emit_intermediate = true;
    std::vector<KsRecord> records;
    auto stats = run_pipeline(cfg, {}, [&](const KsRecord& r) { records.push_back(r); });
    CHECK(stats.records == records.size());
    CHECK(stats.errors == 0);
    for (const auto& r : records) {
        CHECK(r.classification != KsClass::Ks);
        CHECK(r.classification != KsClass::Pending);
    }
    // The triangle is pruned before it is classified.
    Diagram tri = parse_mmp("123,345,561.");
    CHECK(std::none_of(records.begin(), records.end(), [&](const KsRecord& r) { return is_isomorphic(r.diagram, tri); }));
    CHECK(stats.generation.pruned > 0);
    auto text = format_stats(stats);
    CHECK(text.find("class_KS\t0") != std::string::npos);
}
