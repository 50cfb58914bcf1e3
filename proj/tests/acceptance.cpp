// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ks/canon.hpp"
#include "ks/diagram.hpp"
#include "ks/generate.hpp"
#include "ks/loops.hpp"
#include "ks/match.hpp"
#include "ks/pipeline.hpp"
#include "ks/realize.hpp"
#include "ks/states.hpp"
#include "oracles.hpp"

using namespace ks;

namespace {

const std::vector<std::pair<std::string, std::string>> kNamed = {
    {"6-3", "1234,2356,1456."},
    {"19-13", "123,345,567,789,9AB,BCD,DE1,2GA,4HC,6IG,6JD,8FE,FGH."},
    {"22-13-a", "1234,4567,789A,ABCD,DEFG,GHI1,2ILA,345J,4JEC,678K,7KMG,9ABL,FGHM."},
    {"22-13-b", "1234,4567,789A,ABCD,DEFG,GHI1,12IJ,345K,678L,GML7,1J9B,4KEC,FGHM."},
    {"24-24", "1234,4567,789A,ABCD,DEFG,GHI1,12IJ,345K,678L,7LOG,68FH,1J9B,AMI2,4KCE,DN35,CDEN,IJK5,38KL,6BML,"
              "9EMN,CHNO,2JOF,9ABM,OFGH."},
};

Diagram named(const std::string& name) {
    for (const auto& [n, text] : kNamed)
        if (n == name) return parse_mmp(text);
    throw std::logic_error("unknown fixture " + name);
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::vector<Diagram> corpus(int n, int b, int max_a, int min_loop = 2) {
    GenerationConfig cfg;
    cfg.edge_size = n;
    cfg.target_edges = b;
    cfg.max_vertices = max_a;
    cfg.min_loop = min_loop;
    cfg.emit_intermediate = true;
    return oracle::collect(cfg);
}

// Shared between criteria 3, 7 and 8.
std::vector<Diagram> girth5_terminals;
std::vector<KsRecord> reduced_pipeline_records;

Outcome parsing_fidelity() {
    Outcome o;
    for (const auto& [name, text] : kNamed) {
        Diagram d = parse_mmp(text);
        o.require(validate(d).empty(), name + " invalid");
        o.require(serialize_mmp(d) == text, name + " does not round-trip");
    }
    Diagram six = named("6-3");
    o.require(six.vertex_count() == 6 && six.edge_count() == 3, "6-3 size");
    o.require(girth(six).girth == 2, "6-3 girth");
    o.require(girth(named("19-13")).girth == 5, "19-13 girth");
    std::ostringstream d;
    d << "a/b of 6-3 = " << six.vertex_count() << "/" << six.edge_count() << ", girths 2 and 5";
    if (o.pass) o.detail = d.str();
    return o;
}

Outcome state_verdicts() {
    Outcome o;
    for (const auto& [name, text] : kNamed) o.require(!find_01_state(parse_mmp(text)), name + " has a 0-1 state");
    if (o.pass) o.detail = "all five named diagrams: NONE";
    return o;
}

Outcome generation_count() {
    Outcome o;
    GenerationConfig cfg;
    cfg.edge_size = 3;
    cfg.target_edges = 13;
    cfg.min_loop = 5;
    cfg.max_vertices = 19;
    cfg.exact_vertices = true;
    girth5_terminals = oracle::collect(cfg);
    int none = 0;
    bool found = false;
    const Diagram target = named("19-13");
    for (std::size_t i = 0; i < girth5_terminals.size(); ++i) {
        const Diagram& d = girth5_terminals[i];
        o.require(d.vertex_count() == 19 && d.edge_count() == 13, "wrong size");
        auto g = girth(d).girth;
        o.require(!g || *g >= 5, "girth below 5");
        for (std::size_t j = 0; j < i; ++j) o.require(!is_isomorphic(d, girth5_terminals[j]), "duplicate class");
        if (!find_01_state(d)) {
            ++none;
            found = found || is_isomorphic(d, target);
        }
    }
    o.require(girth5_terminals.size() == 6, "expected 6 classes, got " + std::to_string(girth5_terminals.size()));
    o.require(none == 2, "expected 2 without states, got " + std::to_string(none));
    o.require(found, "19-13 not among them");
    if (o.pass) o.detail = "6 classes, 2 without 0-1 states, 19-13 among them";
    return o;
}

Outcome peres_realization() {
    Outcome o;
    Diagram peres = named("24-24");
    auto sol = solve_discrete(peres, parse_component_set("-1,0,1"));
    o.require(sol.has_value(), "no {-1,0,1} solution");
    if (sol) {
        o.require(sol->exact.has_value(), "solution not exact");
        auto check = verify_solution(peres, *sol);
        o.require(check.ok, "verify failed: " + check.problem);
        o.require(check.max_residual == 0.0, "nonzero residual");
    }
    for (const char* name : {"22-13-a", "22-13-b"}) {
        Diagram p = named(name);
        auto map = find_subdiagram(peres, p);
        o.require(map && verify_embedding(peres, p, *map), std::string(name) + " not found in 24-24");
    }
    if (o.pass) o.detail = "exact SAT, residual 0, contains 22-13-a and 22-13-b";
    return o;
}

Outcome infeasibility_certificates() {
    Outcome o;
    auto tri = solve_interval(build_equations(parse_mmp("123,345,561.")));
    o.require(tri.verdict == Realization::Unsat, "triangle not UNSAT");
    auto six = solve_interval(build_equations(named("6-3")));
    o.require(six.verdict == Realization::Unsat, "6-3 not UNSAT");

    // Realizable fixtures, each randomly relabeled and reordered so a
    // different edge carries the gauge; their {-1,0,1} solutions are checked
    // under random orthogonal transforms as well.
    std::mt19937_64 rng(2024);
    std::vector<std::pair<Diagram, VectorSolution>> fixtures;
    const auto set = parse_component_set("-1,0,1");
    for (int k = 0; k < 4; ++k) {
        Diagram d = oracle::shuffled(named("24-24"), rng);
        fixtures.emplace_back(d, *solve_discrete(d, set));
    }
    for (auto part : {corpus(4, 5, 12), corpus(3, 6, 12)}) {
        std::shuffle(part.begin(), part.end(), rng);
        for (const auto& d : part) {
            if (fixtures.size() >= 20) break;
            if (d.edge_count() < 4) continue;
            if (!solve_discrete(d, set)) continue;
            Diagram moved = oracle::shuffled(d, rng);
            fixtures.emplace_back(moved, *solve_discrete(moved, set));
        }
    }
    o.require(fixtures.size() == 20, "could not assemble 20 fixtures");
    int sat = 0;
    int unsat = 0;
    IntervalOptions opts;
    opts.max_boxes = 200000;
    for (auto& [d, sol] : fixtures) {
        auto q = oracle::random_rotation(d.edge_size(), rng);
        o.require(verify_solution(d, oracle::rotated(sol, q)).ok, "rotated solution rejected");
        auto r = solve_interval(build_equations(d), opts);
        unsat += r.verdict == Realization::Unsat;
        sat += r.verdict == Realization::Sat;
        if (r.solution) o.require(verify_solution(d, *r.solution).ok, "interval certificate fails verification");
    }
    o.require(unsat == 0, std::to_string(unsat) + " realizable fixtures reported UNSAT");
    if (o.pass) {
        std::ostringstream d;
        d << "triangle UNSAT in " << tri.boxes << " boxes, 6-3 UNSAT in " << six.boxes << " boxes; fixtures: " << sat
          << "/20 SAT, 0 UNSAT";
        o.detail = d.str();
    }
    return o;
}

Outcome oracle_equivalences() {
    Outcome o;
    // (a) 0-1 verdicts against 2^a enumeration.
    std::vector<Diagram> pool;
    for (auto part : {corpus(3, 6, 16), corpus(4, 4, 16), corpus(3, 11, 16, 5)})
        pool.insert(pool.end(), part.begin(), part.end());
    for (const auto& d : pool) {
        if (d.vertex_count() > 16) continue;
        o.require(find_01_state(d).has_value() == oracle::has_state_brute(d), "state verdict differs: " + serialize_mmp(d));
    }
    // (b) generator against brute-force classes, n = 3, b <= 4.
    std::size_t classes = 0;
    for (int b = 1; b <= 4; ++b) {
        GenerationConfig cfg;
        cfg.edge_size = 3;
        cfg.target_edges = b;
        auto generated = oracle::collect(cfg);
        auto brute = oracle::all_classes_brute(3, b);
        classes += brute.size();
        o.require(generated.size() == brute.size(), "class count differs at b=" + std::to_string(b));
        for (const auto& g : brute)
            o.require(std::count_if(generated.begin(), generated.end(), [&](const Diagram& d) { return is_isomorphic(d, g); }) == 1,
                      "class not generated exactly once: " + serialize_mmp(g));
    }
    // (c) canonical form agreement vs isomorphism on 1000 random permuted pairs.
    std::mt19937_64 rng(99);
    std::map<std::tuple<int, int, int>, std::vector<const Diagram*>> by_sig;
    for (const auto& d : pool) by_sig[{d.edge_size(), d.vertex_count(), d.edge_count()}].push_back(&d);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    int agree = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Diagram& d = pool[pick(rng)];
        const auto& peers = by_sig[{d.edge_size(), d.vertex_count(), d.edge_count()}];
        const Diagram& other = trial % 2 ? d : *peers[std::uniform_int_distribution<std::size_t>(0, peers.size() - 1)(rng)];
        Diagram x = oracle::shuffled(d, rng);
        Diagram y = oracle::shuffled(other, rng);
        agree += (canonical_form(x) == canonical_form(y)) == is_isomorphic(x, y);
    }
    o.require(agree == 1000, std::to_string(1000 - agree) + " canonical/isomorphism disagreements");
    if (o.pass) {
        std::ostringstream d;
        d << pool.size() << " state verdicts, " << classes << " classes for b<=4, 1000/1000 pairs agree";
        o.detail = d.str();
    }
    return o;
}

Outcome reduced_ks_absence() {
    Outcome o;
    GenerationConfig cfg;
    cfg.edge_size = 3;
    cfg.target_edges = 30;  // never reached: a <= 12 caps b first
    cfg.max_vertices = 12;
    cfg.emit_intermediate = true;
    PipelineOptions opts;
    const Catalog catalog = Catalog::builtin();
    opts.classify.catalog = &catalog;
    auto stats = run_pipeline(cfg, opts, [](const KsRecord& r) { reduced_pipeline_records.push_back(r); });
    auto count = [&](KsClass c) {
        const auto it = stats.by_class.find(c);
        return it == stats.by_class.end() ? std::uint64_t{0} : it->second;
    };
    o.require(stats.errors == 0, "pipeline errors");
    o.require(count(KsClass::Ks) == 0, std::to_string(count(KsClass::Ks)) + " KS records");
    o.require(count(KsClass::Pending) == 0, std::to_string(count(KsClass::Pending)) + " PENDING records");
    std::ostringstream d;
    d << stats.records << " records (" << count(KsClass::RealizableClassical) << " classical, "
      << count(KsClass::Unrealizable) << " unrealizable), " << stats.generation.pruned << " subtrees pruned, 0 KS";
    if (o.pass) o.detail = d.str();
    return o;
}

Outcome inequality() {
    Outcome o;
    int checked = 0;
    auto check = [&](const Diagram& d) {
        if (find_01_state(d)) return;
        ++checked;
        o.require(d.edge_size() * d.edge_count() >= 2 * d.vertex_count(), "violation: " + serialize_mmp(d));
    };
    for (const auto& d : girth5_terminals) check(d);
    for (const auto& r : reduced_pipeline_records) check(r.diagram);
    o.require(!girth5_terminals.empty() && !reduced_pipeline_records.empty(), "corpora missing");
    if (o.pass) o.detail = std::to_string(checked) + " no-state diagrams checked, 0 violations";
    return o;
}

}  // namespace

int main() {
    using Clock = std::chrono::steady_clock;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 parsing fidelity", parsing_fidelity},
        {"2 0-1 state verdicts", state_verdicts},
        {"3 girth-5 19/13 generation count", generation_count},
        {"4 Peres realization and containment", peres_realization},
        {"5 infeasibility certificates", infeasibility_certificates},
        {"6 oracle equivalences", oracle_equivalences},
        {"8 3-dim KS absence for a <= 12", reduced_ks_absence},
        {"7 nb >= 2a on the criterion 3 and 8 corpora", inequality},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = Clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
        std::printf("%s criterion %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), seconds, o.detail.c_str());
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
