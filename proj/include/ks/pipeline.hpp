#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ks/diagram.hpp"
#include "ks/generate.hpp"
#include "ks/realize.hpp"

namespace ks {

/// Named diagrams used for containment tags.
class Catalog {
public:
    /// The shipped entries: 6-3, 19-13, 22-13-a, 22-13-b, 24-24-peres.
    static Catalog builtin();

    /// Adds or replaces an entry. Throws MmpError if mmp is not a valid diagram.
    void add(const std::string& name, const std::string& mmp);

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    std::optional<Diagram> find(const std::string& name) const;

    /// Names of entries contained in d (same edge size only).
    std::vector<std::string> tags_for(const Diagram& d) const;

    /// Lines "name<whitespace>mmp"; '#' starts a comment. Throws on bad lines.
    void load(std::istream& in);
    void save(std::ostream& out) const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::vector<Diagram> parsed_;
};

enum class KsClass { Ks, RealizableClassical, Unrealizable, Pending };
std::string_view to_string(KsClass c);

struct KsRecord {
    Diagram diagram;  // canonical form
    bool has_state = false;
    Realization realization = Realization::Inconclusive;
    KsClass classification = KsClass::Pending;
    std::vector<std::string> tags;
    std::optional<VectorSolution> solution;  // vectors for `diagram`
    std::string solution_ref;                // "sol:<hash>", "pending:max_boxes=<n>" or "-"

    int a() const { return diagram.vertex_count(); }
    int b() const { return diagram.edge_count(); }
    int n() const { return diagram.edge_size(); }
};

struct ClassifyOptions {
    std::vector<Rational> component_set{Rational(-1), Rational(0), Rational(1)};
    IntervalOptions interval;
    const Catalog* catalog = nullptr;
};

/// States first, then the discrete solver, then the interval solver when the
/// discrete search finds nothing. INCONCLUSIVE becomes PENDING.
KsRecord classify(const Diagram& d, const ClassifyOptions& opts);

/// n*b >= 2*a.
bool inequality_check(const KsRecord& rec);

struct PipelineOptions {
    ClassifyOptions classify;
    /// Wire feasibility_prune into generation with this box budget; 0 disables it.
    std::uint64_t prune_budget = 2000;
};

struct PipelineStats {
    GenerationStats generation;
    std::uint64_t records = 0;
    std::map<KsClass, std::uint64_t> by_class;
    std::uint64_t no_state = 0;
    std::uint64_t inequality_violations = 0;
    std::vector<std::string> violating;  // MMP strings of violations
    std::uint64_t errors = 0;

    void add(const KsRecord& rec);
    void merge(const PipelineStats& other);
};

/// Generates, classifies every reported diagram (terminals, plus
/// intermediates when cfg.emit_intermediate), and hands each record to sink.
PipelineStats run_pipeline(GenerationConfig cfg, const PipelineOptions& opts,
                           const std::function<void(const KsRecord&)>& sink);

/// Tab-separated record line: MMP A B N STATES REALIZE CLASS TAGS SOLUTION_REF.
std::string format_record(const KsRecord& rec, Notation notation = Notation::Classic);

/// Parsed record line (solution vectors are not part of the line).
struct RecordLine {
    std::string mmp;
    int a = 0;
    int b = 0;
    int n = 0;
    std::string states;
    std::string realize;
    std::string classification;
    std::vector<std::string> tags;
    std::string solution_ref;
};
std::optional<RecordLine> parse_record(const std::string& line);

/// Solution store block: "@ <hash> <mmp>" followed by the vector lines.
std::string format_solution_block(const KsRecord& rec, Notation notation = Notation::Classic);

/// Tab-separated "key<TAB>value" lines.
std::string format_stats(const PipelineStats& stats);

}  // namespace ks
