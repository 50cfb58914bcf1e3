// ks: command-line front end for diagram generation, 0-1 state checks,
// vector realization and the combined search pipeline.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "ks/canon.hpp"
#include "ks/diagram.hpp"
#include "ks/generate.hpp"
#include "ks/loops.hpp"
#include "ks/match.hpp"
#include "ks/pipeline.hpp"
#include "ks/realize.hpp"
#include "ks/states.hpp"

namespace {

using namespace ks;

// Errors caused by the user's input; reported with exit code 1.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string format = "classic";
    std::vector<std::string> inputs;

    Notation notation() const { return format == "long" ? Notation::Long : Notation::Classic; }
};

void add_common(CLI::App* cmd, Common& c, bool with_inputs = true) {
    cmd->add_option("--format", c.format, "Vertex notation: classic (1..9A..Za..z) or long (v1,v2,...)")
        ->check(CLI::IsMember({"classic", "long"}))
        ->capture_default_str();
    if (with_inputs) cmd->add_option("inputs", c.inputs, "Input files (default: standard input)");
}

std::string out_mmp(const Diagram& d, Notation n) {
    return serialize_mmp(d, d.vertex_count() > kAlphabetSize ? Notation::Long : n);
}

// Calls f(diagram, original line) for every non-blank, non-comment line.
template <typename F>
void for_each_diagram(const Common& c, F&& f) {
    auto run = [&](std::istream& in, const std::string& name) {
        std::string line;
        int number = 0;
        while (std::getline(in, line)) {
            ++number;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            std::string text = line.substr(first);
            // Record lines carry the diagram in their first field.
            if (const auto tab = text.find('\t'); tab != std::string::npos) text.erase(tab);
            Diagram d;
            try {
                d = parse_mmp(text, c.notation());
            } catch (const MmpError& e) {
                throw InputError(name + ":" + std::to_string(number) + ": " + e.what());
            }
            f(d, text);
        }
    };
    if (c.inputs.empty()) {
        run(std::cin, "<stdin>");
        return;
    }
    for (const auto& path : c.inputs) {
        std::ifstream in(path);
        if (!in) throw InputError("cannot open '" + path + "'");
        run(in, path);
    }
}

Diagram diagram_arg(const std::string& text, Notation n) {
    try {
        return parse_mmp(text, n);
    } catch (const MmpError& e) {
        throw InputError(e.what());
    }
}

// ---------------------------------------------------------------- generation flags

struct GenFlags {
    int edge_size = 3;
    int edges = 1;
    int vertices = 0;
    int max_vertices = 0;
    int min_loop = 2;
    bool intermediate = false;
    bool connected = false;
    int jobs = 1;
    std::string slice;
    int slice_depth = 2;
    std::string resume;
    std::string checkpoint;
    int checkpoint_depth = 2;

    void add(CLI::App* cmd) {
        cmd->add_option("--edge-size,-n", edge_size, "Vertices per edge")->check(CLI::Range(3, 61))->capture_default_str();
        cmd->add_option("--edges,-b", edges, "Edges of terminal diagrams")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--vertices", vertices, "Terminal diagrams have exactly this many vertices");
        cmd->add_option("--max-vertices", max_vertices, "Upper bound on vertices");
        cmd->add_option("--min-loop", min_loop, "Smallest allowed loop size (2 = no constraint)")
            ->check(CLI::Range(2, 1000))
            ->capture_default_str();
        cmd->add_flag("--intermediate", intermediate, "Also report diagrams with fewer edges");
        cmd->add_flag("--connected", connected, "Connected diagrams only");
        cmd->add_option("--jobs,-j", jobs, "Worker threads; output is sorted when > 1")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--slice", slice, "Run only worker K of M, written K/M (0-based K)");
        cmd->add_option("--slice-depth", slice_depth, "Tree depth at which subtrees are dealt out")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--resume", resume, "Resume after the path stored in this file");
        cmd->add_option("--checkpoint", checkpoint, "Store the last completed path in this file");
        cmd->add_option("--checkpoint-depth", checkpoint_depth, "Deepest level at which checkpoints are written")
            ->capture_default_str();
    }

    GenerationConfig config() const {
        GenerationConfig cfg;
        cfg.edge_size = edge_size;
        cfg.target_edges = edges;
        cfg.min_loop = min_loop;
        cfg.emit_intermediate = intermediate;
        cfg.connected = connected;
        if (max_vertices > 0) cfg.max_vertices = max_vertices;
        if (vertices > 0) {
            cfg.max_vertices = vertices;
            cfg.exact_vertices = true;
        }
        if (!slice.empty()) {
            const auto slash = slice.find('/');
            try {
                if (slash == std::string::npos) throw std::invalid_argument(slice);
                WorkSlice s;
                s.index = std::stoi(slice.substr(0, slash));
                s.count = std::stoi(slice.substr(slash + 1));
                s.depth = slice_depth;
                if (s.count < 1 || s.index < 0 || s.index >= s.count) throw std::invalid_argument(slice);
                cfg.slice = s;
            } catch (const std::exception&) {
                throw InputError("bad --slice '" + slice + "', expected K/M");
            }
        }
        if (!resume.empty()) {
            std::ifstream in(resume);
            if (!in) throw InputError("cannot open '" + resume + "'");
            int x = 0;
            while (in >> x) cfg.resume_path.push_back(x);
            if (!in.eof()) throw InputError("bad resume file '" + resume + "'");
        }
        if (!checkpoint.empty()) {
            cfg.checkpoint_depth = checkpoint_depth;
            const std::string path = checkpoint;
            cfg.checkpoint = [path](const std::vector<int>& p) {
                std::ofstream out(path + ".tmp");
                for (std::size_t i = 0; i < p.size(); ++i) out << (i ? " " : "") << p[i];
                out << '\n';
                out.close();
                std::rename((path + ".tmp").c_str(), path.c_str());
            };
        }
        return cfg;
    }
};

// Runs body(cfg) once, or once per worker slice on jobs threads.
template <typename Body>
void run_workers(const GenerationConfig& base, int jobs, int slice_depth, Body&& body) {
    if (jobs <= 1) {
        body(base, 0);
        return;
    }
    if (base.slice) throw InputError("--jobs and --slice cannot be combined");
    if (!base.resume_path.empty() || base.checkpoint) throw InputError("--resume/--checkpoint need --jobs 1");
    std::vector<std::thread> threads;
    std::mutex failure_mutex;
    std::exception_ptr failure;
    for (int k = 0; k < jobs; ++k) {
        threads.emplace_back([&, k] {
            try {
                GenerationConfig cfg = base;
                cfg.slice = WorkSlice{k, jobs, slice_depth};
                body(cfg, k);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
}

void print_generation_stats(std::ostream& out, const GenerationStats& s) {
    out << "nodes\t" << s.nodes << '\n' << "terminals\t" << s.terminals << '\n' << "pruned\t" << s.pruned << '\n';
    for (const auto& [sig, count] : s.terminals_by_signature)
        out << "terminals_" << sig.first << '-' << sig.second << '\t' << count << '\n';
}

// ---------------------------------------------------------------- subcommands

int cmd_gen(const GenFlags& g, const Common& c, bool count_only, bool stats) {
    const GenerationConfig base = g.config();
    std::vector<std::vector<std::string>> lines(static_cast<std::size_t>(std::max(1, g.jobs)));
    std::vector<GenerationStats> all(lines.size());
    std::atomic<std::uint64_t> count{0};
    const bool stream = g.jobs <= 1;
    run_workers(base, g.jobs, g.slice_depth, [&](const GenerationConfig& cfg, int k) {
        auto& mine = lines[static_cast<std::size_t>(k)];
        all[static_cast<std::size_t>(k)] = generate(cfg, [&](const GenNode& node) {
            if (!node.owned || !(node.terminal || cfg.emit_intermediate)) return Visit::Keep;
            ++count;
            if (count_only) return Visit::Keep;
            if (stream)
                std::cout << out_mmp(node.diagram, c.notation()) << '\n';
            else
                mine.push_back(out_mmp(node.diagram, c.notation()));
            return Visit::Keep;
        });
    });
    if (!stream && !count_only) {
        std::vector<std::string> merged;
        for (auto& l : lines) merged.insert(merged.end(), l.begin(), l.end());
        std::sort(merged.begin(), merged.end());
        for (const auto& l : merged) std::cout << l << '\n';
    }
    if (count_only) std::cout << count.load() << '\n';
    if (stats) {
        GenerationStats total;
        for (const auto& s : all) total.merge(s);
        print_generation_stats(std::cerr, total);
    }
    return 0;
}

int cmd_states(const Common& c, bool count, std::uint64_t limit) {
    for_each_diagram(c, [&](const Diagram& d, const std::string& text) {
        std::cout << text << "\tSTATES=" << (find_01_state(d) ? "SAT" : "NONE");
        if (count) std::cout << "\tCOUNT=" << count_01_states(d, limit ? std::optional(limit) : std::nullopt);
        std::cout << '\n';
    });
    return 0;
}

int cmd_equations(const Common& c) {
    bool first = true;
    for_each_diagram(c, [&](const Diagram& d, const std::string& text) {
        if (!first) std::cout << '\n';
        first = false;
        std::cout << "# " << text << '\n';
        try {
            std::cout << format_equations(d, build_equations(d));
        } catch (const std::invalid_argument& e) {
            throw InputError(text + ": " + e.what());
        }
    });
    return 0;
}

struct SolveFlags {
    std::string set;
    bool interval = false;
    IntervalOptions opts;

    void add(CLI::App* cmd, bool with_mode) {
        if (with_mode) {
            cmd->add_option("--set", set, "Discrete component set, e.g. -1,0,1");
            cmd->add_flag("--interval", interval, "Use the interval solver");
        }
        cmd->add_option("--eps-box", opts.eps_box, "Smallest box width that is still split")->capture_default_str();
        cmd->add_option("--eps-res", opts.eps_res, "Residual tolerance for certificates")->capture_default_str();
        cmd->add_option("--eps-ray", opts.eps_ray, "Smallest allowed angle between rays (radians)")->capture_default_str();
        cmd->add_option("--max-boxes", opts.max_boxes, "Box budget")->capture_default_str();
    }
};

int cmd_solve(const SolveFlags& s, const Common& c) {
    if (s.set.empty() == !s.interval) throw InputError("solve needs exactly one of --set or --interval");
    std::vector<Rational> set;
    if (!s.interval) {
        try {
            set = parse_component_set(s.set);
        } catch (const std::invalid_argument& e) {
            throw InputError(std::string("--set: ") + e.what());
        }
    }
    bool first = true;
    for_each_diagram(c, [&](const Diagram& d, const std::string& text) {
        if (!first) std::cout << '\n';
        first = false;
        if (!d.uniform() || d.empty()) throw InputError(text + ": edges must all have the same size");
        if (s.interval) {
            const IntervalResult r = solve_interval(build_equations(d), s.opts);
            std::cout << "REALIZE=" << to_string(r.verdict) << "\tBOXES=" << r.boxes << '\n';
            if (r.solution) std::cout << format_solution(d, *r.solution);
        } else if (auto sol = solve_discrete(d, set)) {
            std::cout << "REALIZE=SAT\n" << format_solution(d, *sol);
        } else {
            std::cout << "REALIZE=INCONCLUSIVE\tSET=NONE\n";
        }
    });
    return 0;
}

int cmd_check(const std::string& diagram, const std::string& solution, const Common& c, double eps_res,
              double eps_ray) {
    const Diagram d = diagram_arg(diagram, c.notation());
    std::ifstream in(solution);
    if (!in) throw InputError("cannot open '" + solution + "'");
    VectorSolution sol;
    try {
        sol = parse_solution(d, in);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    if (sol.dimension != d.edge_size())
        throw InputError("solution vectors have " + std::to_string(sol.dimension) + " components, edges have " +
                         std::to_string(d.edge_size()) + " vertices");
    const SolutionCheck check = verify_solution(d, sol, eps_res, eps_ray);
    std::cout << "CHECK=" << (check.ok ? "PASS" : "FAIL") << "\tRESIDUAL=" << check.max_residual
              << "\tMIN_ANGLE=" << check.min_angle;
    if (!check.ok) std::cout << "\tPROBLEM=" << check.problem;
    std::cout << '\n';
    return check.ok ? 0 : 1;
}

Catalog load_catalog(const std::string& path) {
    Catalog cat = Catalog::builtin();
    if (path.empty()) return cat;
    std::ifstream in(path);
    if (!in) return cat;  // a missing user catalog is simply empty
    try {
        cat.load(in);
    } catch (const std::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    return cat;
}

int cmd_contains(const std::string& pattern_text, const std::string& catalog_path, const Common& c) {
    const Catalog cat = load_catalog(catalog_path);
    Diagram pattern;
    if (auto named = cat.find(pattern_text))
        pattern = *named;
    else
        pattern = diagram_arg(pattern_text, c.notation());
    for_each_diagram(c, [&](const Diagram& d, const std::string& text) {
        std::cout << text;
        if (pattern.edge_size() != d.edge_size()) {
            std::cout << "\tCONTAINS=NO\n";
            return;
        }
        const auto map = find_subdiagram(d, pattern);
        if (!map) {
            std::cout << "\tCONTAINS=NO\n";
            return;
        }
        std::cout << "\tCONTAINS=YES\tMAP=";
        for (Vertex v = 0; v < pattern.vertex_count(); ++v)
            std::cout << (v ? "," : "") << pattern.label(v) << "->" << d.label((*map)[static_cast<std::size_t>(v)]);
        std::cout << '\n';
    });
    return 0;
}

struct PipelineFlags {
    std::string records;
    std::string solutions;
    std::string catalog;
    std::string set = "-1,0,1";
    std::uint64_t prune_budget = 2000;
    bool stats = false;
};

int cmd_pipeline(const GenFlags& g, const SolveFlags& s, const PipelineFlags& p, const Common& c) {
    const Catalog cat = load_catalog(p.catalog);
    PipelineOptions opts;
    try {
        opts.classify.component_set = parse_component_set(p.set);
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("--set: ") + e.what());
    }
    opts.classify.interval = s.opts;
    opts.classify.catalog = &cat;
    opts.prune_budget = p.prune_budget;

    std::ofstream record_file;
    std::ostream* records = &std::cout;
    if (!p.records.empty()) {
        record_file.open(p.records);
        if (!record_file) throw InputError("cannot write '" + p.records + "'");
        records = &record_file;
    }
    std::string solution_path = p.solutions;
    if (solution_path.empty() && !p.records.empty()) solution_path = p.records + ".sol";
    std::ofstream solution_file;
    if (!solution_path.empty()) {
        solution_file.open(solution_path);
        if (!solution_file) throw InputError("cannot write '" + solution_path + "'");
    }

    const GenerationConfig base = g.config();
    const bool stream = g.jobs <= 1;
    std::mutex sink_mutex;
    std::vector<std::pair<std::string, std::string>> collected;  // record line, solution block
    std::vector<PipelineStats> all(static_cast<std::size_t>(std::max(1, g.jobs)));
    run_workers(base, g.jobs, g.slice_depth, [&](const GenerationConfig& cfg, int k) {
        all[static_cast<std::size_t>(k)] = run_pipeline(cfg, opts, [&](const KsRecord& rec) {
            std::string line = format_record(rec, c.notation());
            std::string block = solution_file.is_open() ? format_solution_block(rec, c.notation()) : std::string();
            std::lock_guard lock(sink_mutex);
            if (stream) {
                *records << line << '\n';
                if (!block.empty()) solution_file << block;
            } else {
                collected.emplace_back(std::move(line), std::move(block));
            }
        });
    });
    if (!stream) {
        std::sort(collected.begin(), collected.end());
        for (const auto& [line, block] : collected) {
            *records << line << '\n';
            if (!block.empty()) solution_file << block;
        }
    }
    PipelineStats total;
    for (const auto& s2 : all) total.merge(s2);
    if (p.stats) std::cerr << format_stats(total);
    return total.errors ? 2 : 0;
}

int cmd_catalog_list(const std::string& path) {
    load_catalog(path).save(std::cout);
    return 0;
}

int cmd_catalog_import(const std::string& path, const Common& c) {
    if (path.empty()) throw InputError("catalog import needs --catalog FILE");
    Catalog user;
    {
        std::ifstream in(path);
        if (in) {
            try {
                user.load(in);
            } catch (const std::exception& e) {
                throw InputError(path + ": " + e.what());
            }
        }
    }
    auto read = [&](std::istream& in) {
        try {
            user.load(in);
        } catch (const std::exception& e) {
            throw InputError(e.what());
        }
    };
    if (c.inputs.empty()) {
        read(std::cin);
    } else {
        for (const auto& f : c.inputs) {
            std::ifstream in(f);
            if (!in) throw InputError("cannot open '" + f + "'");
            read(in);
        }
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    user.save(out);
    std::cout << "entries\t" << user.entries().size() << '\n';
    return 0;
}

// Summaries of record files or plain diagram lists.
int cmd_stats(const Common& c) {
    std::uint64_t total = 0;
    std::uint64_t none = 0;
    std::uint64_t violations = 0;
    std::map<std::string, std::uint64_t> classes;
    std::map<std::pair<int, int>, std::uint64_t> signatures;
    std::vector<std::string> violating;
    auto handle = [&](const std::string& line) {
        if (auto rec = parse_record(line)) {
            ++total;
            ++classes[rec->classification];
            ++signatures[{rec->a, rec->b}];
            if (rec->states == "NONE") {
                ++none;
                if (rec->n * rec->b < 2 * rec->a) {
                    ++violations;
                    violating.push_back(rec->mmp);
                }
            }
            return;
        }
        std::string text = line;
        Diagram d;
        try {
            d = parse_mmp(text, c.notation());
        } catch (const MmpError& e) {
            throw InputError(e.what());
        }
        ++total;
        ++signatures[{d.vertex_count(), d.edge_count()}];
        if (!find_01_state(d)) {
            ++none;
            if (d.edge_size() * d.edge_count() < 2 * d.vertex_count()) {
                ++violations;
                violating.push_back(text);
            }
        }
    };
    auto run = [&](std::istream& in) {
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            handle(line);
        }
    };
    if (c.inputs.empty()) {
        run(std::cin);
    } else {
        for (const auto& f : c.inputs) {
            std::ifstream in(f);
            if (!in) throw InputError("cannot open '" + f + "'");
            run(in);
        }
    }
    std::cout << "diagrams\t" << total << '\n';
    for (const auto& [sig, n] : signatures) std::cout << "signature_" << sig.first << '-' << sig.second << '\t' << n << '\n';
    for (const auto& [cls, n] : classes) std::cout << "class_" << cls << '\t' << n << '\n';
    std::cout << "states_none\t" << none << '\n';
    std::cout << "inequality_violations\t" << violations << '\n';
    for (const auto& v : violating) std::cout << "violation\t" << v << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Search tools for Kochen-Specker vector systems in MMP notation"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    Common common;

    auto* gen = app.add_subcommand("gen", "Enumerate non-isomorphic MMP diagrams");
    GenFlags gen_flags;
    bool count_only = false;
    bool gen_stats = false;
    gen_flags.add(gen);
    add_common(gen, common, false);
    gen->add_flag("--count-only", count_only, "Print only the number of diagrams");
    gen->add_flag("--stats", gen_stats, "Print node counts to standard error");

    auto* states = app.add_subcommand("states", "0-1 state verdict per diagram");
    bool state_count = false;
    std::uint64_t state_limit = 0;
    add_common(states, common);
    states->add_flag("--count", state_count, "Also count the states");
    states->add_option("--limit", state_limit, "Stop counting at this many states (0 = exact)");

    auto* equations = app.add_subcommand("equations", "Print the orthogonality equations");
    add_common(equations, common);

    auto* solve = app.add_subcommand("solve", "Look for real vectors realizing each diagram");
    SolveFlags solve_flags;
    solve_flags.add(solve, true);
    add_common(solve, common);

    auto* check = app.add_subcommand("check", "Verify a solution file against a diagram");
    std::string check_diagram;
    std::string check_solution;
    double check_eps_res = 1e-9;
    double check_eps_ray = 1e-6;
    check->add_option("diagram", check_diagram, "Diagram in MMP notation")->required();
    check->add_option("solution", check_solution, "Solution file")->required();
    check->add_option("--eps-res", check_eps_res, "Residual tolerance")->capture_default_str();
    check->add_option("--eps-ray", check_eps_ray, "Smallest allowed angle between rays")->capture_default_str();
    add_common(check, common, false);

    auto* contains = app.add_subcommand("contains", "Test each diagram for a subdiagram");
    std::string pattern;
    std::string contains_catalog;
    contains->add_option("--pattern", pattern, "Pattern diagram or catalog name")->required();
    contains->add_option("--catalog", contains_catalog, "User catalog file");
    add_common(contains, common);

    auto* pipeline = app.add_subcommand("pipeline", "Generate, filter and classify");
    GenFlags pipe_gen;
    SolveFlags pipe_solve;
    PipelineFlags pipe_flags;
    pipe_gen.add(pipeline);
    pipe_solve.add(pipeline, false);
    pipeline->add_option("--set", pipe_flags.set, "Discrete component set tried first")->capture_default_str();
    pipeline->add_option("--records", pipe_flags.records, "Record file (default: standard output)");
    pipeline->add_option("--solutions", pipe_flags.solutions, "Solution file (default: <records>.sol)");
    pipeline->add_option("--catalog", pipe_flags.catalog, "User catalog file");
    pipeline->add_option("--prune-budget", pipe_flags.prune_budget, "Boxes per infeasibility check (0 = no pruning)")
        ->capture_default_str();
    pipeline->add_flag("--stats", pipe_flags.stats, "Print summary counts to standard error");
    add_common(pipeline, common, false);

    auto* catalog = app.add_subcommand("catalog", "List or extend the named systems");
    catalog->require_subcommand(1);
    std::string catalog_path;
    catalog->add_option("--catalog", catalog_path, "User catalog file");
    auto* catalog_list = catalog->add_subcommand("list", "Print name and diagram of every entry");
    auto* catalog_import = catalog->add_subcommand("import", "Add 'name diagram' lines to the user catalog");
    add_common(catalog_import, common);

    auto* stats = app.add_subcommand("stats", "Summaries of record files or diagram lists");
    add_common(stats, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_flags, common, count_only, gen_stats);
        if (states->parsed()) return cmd_states(common, state_count, state_limit);
        if (equations->parsed()) return cmd_equations(common);
        if (solve->parsed()) return cmd_solve(solve_flags, common);
        if (check->parsed()) return cmd_check(check_diagram, check_solution, common, check_eps_res, check_eps_ray);
        if (contains->parsed()) return cmd_contains(pattern, contains_catalog, common);
        if (pipeline->parsed()) return cmd_pipeline(pipe_gen, pipe_solve, pipe_flags, common);
        if (catalog_list->parsed()) return cmd_catalog_list(catalog_path);
        if (catalog_import->parsed()) return cmd_catalog_import(catalog_path, common);
        if (stats->parsed()) return cmd_stats(common);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
