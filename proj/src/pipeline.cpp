#include "ks/pipeline.hpp"

#include <iostream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ks/canon.hpp"
#include "ks/match.hpp"
#include "ks/states.hpp"

namespace ks {

Catalog Catalog::builtin() {
    Catalog c;
    c.add("6-3", "1234,2356,1456.");
    c.add("19-13", "123,345,567,789,9AB,BCD,DE1,2GA,4HC,6IG,6JD,8FE,FGH.");
    c.add("22-13-a", "1234,4567,789A,ABCD,DEFG,GHI1,2ILA,345J,4JEC,678K,7KMG,9ABL,FGHM.");
    c.add("22-13-b", "1234,4567,789A,ABCD,DEFG,GHI1,12IJ,345K,678L,GML7,1J9B,4KEC,FGHM.");
    c.add("24-24-peres",
          "1234,4567,789A,ABCD,DEFG,GHI1,12IJ,345K,678L,7LOG,68FH,1J9B,AMI2,4KCE,DN35,CDEN,IJK5,38KL,6BML,"
          "9EMN,CHNO,2JOF,9ABM,OFGH.");
    return c;
}

void Catalog::add(const std::string& name, const std::string& mmp) {
    Diagram d = parse_mmp(mmp);
    const std::string text = serialize_mmp(d);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].first == name) {
            entries_[i].second = text;
            parsed_[i] = std::move(d);
            return;
        }
    entries_.emplace_back(name, text);
    parsed_.push_back(std::move(d));
}

std::optional<Diagram> Catalog::find(const std::string& name) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].first == name) return parsed_[i];
    return std::nullopt;
}

std::vector<std::string> Catalog::tags_for(const Diagram& d) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const Diagram& p = parsed_[i];
        if (p.edge_size() != d.edge_size()) continue;
        if (contains_subdiagram(d, p)) out.push_back(entries_[i].first);
    }
    return out;
}

void Catalog::load(std::istream& in) {
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string name;
        std::string mmp;
        if (!(fields >> name)) continue;
        if (!(fields >> mmp)) throw std::invalid_argument("catalog line " + std::to_string(number) + ": missing diagram");
        add(name, mmp);
    }
}

void Catalog::save(std::ostream& out) const {
    for (const auto& [name, mmp] : entries_) out << name << '\t' << mmp << '\n';
}

std::string_view to_string(KsClass c) {
    switch (c) {
        case KsClass::Ks: return "KS";
        case KsClass::RealizableClassical: return "REALIZABLE_CLASSICAL";
        case KsClass::Unrealizable: return "UNREALIZABLE";
        case KsClass::Pending: return "PENDING";
    }
    return "?";
}

KsRecord classify(const Diagram& d, const ClassifyOptions& opts) {
    KsRecord rec;
    rec.diagram = canonical_form(d);
    rec.has_state = find_01_state(rec.diagram).has_value();
    if (auto sol = solve_discrete(rec.diagram, opts.component_set)) {
        rec.realization = Realization::Sat;
        rec.solution = std::move(sol);
    } else {
        IntervalResult r = solve_interval(build_equations(rec.diagram), opts.interval);
        rec.realization = r.verdict;
        rec.solution = std::move(r.solution);
    }
    switch (rec.realization) {
        case Realization::Sat:
            rec.classification = rec.has_state ? KsClass::RealizableClassical : KsClass::Ks;
            rec.solution_ref = "sol:" + canonical_hash_hex(rec.diagram);
            break;
        case Realization::Unsat:
            rec.classification = KsClass::Unrealizable;
            rec.solution_ref = "-";
            break;
        case Realization::Inconclusive:
            rec.classification = KsClass::Pending;
            rec.solution_ref = "pending:max_boxes=" + std::to_string(opts.interval.max_boxes);
            break;
    }
    if (opts.catalog) rec.tags = opts.catalog->tags_for(rec.diagram);
    return rec;
}

bool inequality_check(const KsRecord& rec) { return rec.n() * rec.b() >= 2 * rec.a(); }

void PipelineStats::add(const KsRecord& rec) {
    ++records;
    ++by_class[rec.classification];
    if (!rec.has_state) {
        ++no_state;
        if (!inequality_check(rec)) {
            ++inequality_violations;
            violating.push_back(serialize_mmp(rec.diagram, rec.a() > kAlphabetSize ? Notation::Long : Notation::Classic));
        }
    }
}

void PipelineStats::merge(const PipelineStats& other) {
    generation.merge(other.generation);
    records += other.records;
    for (const auto& [k, v] : other.by_class) by_class[k] += v;
    no_state += other.no_state;
    inequality_violations += other.inequality_violations;
    violating.insert(violating.end(), other.violating.begin(), other.violating.end());
    errors += other.errors;
}

namespace {

Notation notation_for(const Diagram& d, Notation requested) {
    return d.vertex_count() > kAlphabetSize ? Notation::Long : requested;
}

}  // namespace

PipelineStats run_pipeline(GenerationConfig cfg, const PipelineOptions& opts,
                           const std::function<void(const KsRecord&)>& sink) {
    if (opts.prune_budget > 0) {
        auto user = std::move(cfg.prune);
        const auto budget = opts.prune_budget;
        cfg.prune = [user, budget](const Diagram& d) {
            if (user && user(d)) return true;
            return feasibility_prune(d, budget) == Feasibility::Infeasible;
        };
    }
    PipelineStats stats;
    stats.generation = generate(cfg, [&](const GenNode& node) {
        if (!node.owned || !(node.terminal || cfg.emit_intermediate)) return Visit::Keep;
        try {
            KsRecord rec = classify(node.diagram, opts.classify);
            stats.add(rec);
            sink(rec);
        } catch (const std::exception& e) {
            ++stats.errors;
            std::cerr << "error: " << serialize_mmp(node.diagram, notation_for(node.diagram, Notation::Classic)) << ": "
                      << e.what() << '\n';
        }
        return Visit::Keep;
    });
    return stats;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string format_record(const KsRecord& rec, Notation notation) {
    std::string tags;
    for (const auto& t : rec.tags) tags += (tags.empty() ? "" : ",") + t;
    if (tags.empty()) tags = "-";
    std::ostringstream out;
    out << serialize_mmp(rec.diagram, notation_for(rec.diagram, notation)) << '\t' << rec.a() << '\t' << rec.b()
        << '\t' << rec.n() << '\t' << (rec.has_state ? "SAT" : "NONE") << '\t' << to_string(rec.realization) << '\t'
        << to_string(rec.classification) << '\t' << tags << '\t' << rec.solution_ref;
    return out.str();
}

std::optional<RecordLine> parse_record(const std::string& line) {
    const auto f = split(line, '\t');
    if (f.size() != 9) return std::nullopt;
    RecordLine r;
    try {
        r.mmp = f[0];
        r.a = std::stoi(f[1]);
        r.b = std::stoi(f[2]);
        r.n = std::stoi(f[3]);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    r.states = f[4];
    r.realize = f[5];
    r.classification = f[6];
    if (f[7] != "-") r.tags = split(f[7], ',');
    r.solution_ref = f[8];
    return r;
}

std::string format_solution_block(const KsRecord& rec, Notation notation) {
    if (!rec.solution) return {};
    return "@ " + canonical_hash_hex(rec.diagram) + " " + serialize_mmp(rec.diagram, notation_for(rec.diagram, notation)) +
           "\n" + format_solution(rec.diagram, *rec.solution);
}

std::string format_stats(const PipelineStats& stats) {
    std::ostringstream out;
    out << "generated_nodes\t" << stats.generation.nodes << '\n';
    out << "pruned\t" << stats.generation.pruned << '\n';
    out << "records\t" << stats.records << '\n';
    for (KsClass c : {KsClass::Ks, KsClass::RealizableClassical, KsClass::Unrealizable, KsClass::Pending}) {
        const auto it = stats.by_class.find(c);
        out << "class_" << to_string(c) << '\t' << (it == stats.by_class.end() ? 0 : it->second) << '\n';
    }
    out << "states_none\t" << stats.no_state << '\n';
    out << "inequality_checked\t" << stats.no_state << '\n';
    out << "inequality_violations\t" << stats.inequality_violations << '\n';
    for (const auto& v : stats.violating) out << "violation\t" << v << '\n';
    if (stats.errors) out << "errors\t" << stats.errors << '\n';
    return out.str();
}

}  // namespace ks
