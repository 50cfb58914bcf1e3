#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ks/diagram.hpp"

namespace ks {

/// Small exact rational p/q with q > 0 and gcd(p, q) = 1.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1);

    /// Accepts "3", "-1", "1/2", "-3/4".
    static Rational parse(std::string_view text);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;

    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Comma-separated component values such as "-1,0,1". Duplicates removed,
/// result sorted ascending. Throws std::invalid_argument.
std::vector<Rational> parse_component_set(std::string_view text);

/// u . w = 0 for two distinct vertices u < w of one edge.
struct OrthogonalityConstraint {
    int edge;
    Vertex u;
    Vertex w;
};

/// Orthogonality equations of a uniform diagram in R^n, n = edge size.
struct EquationSystem {
    int dimension = 0;
    int vertex_count = 0;
    std::vector<OrthogonalityConstraint> constraints;
    /// Gauge: pinned_axis[v] = k pins vertex v to the basis vector e_k, -1 if free.
    std::vector<int> pinned_axis;
    /// Edge whose vertices are pinned.
    int gauge_edge = 0;

    int raw_components() const { return vertex_count * dimension; }
    int free_vertex_count() const;
};

/// One constraint per unordered pair inside each edge, edges in diagram
/// order. The vertices of the gauge edge, in sorted id order, are pinned to
/// e1..en; it is the edge with the most vertices of degree >= 2, then the
/// largest degree sum, then the lowest index.
/// Throws std::invalid_argument for non-uniform or empty diagrams.
EquationSystem build_equations(const Diagram& d);

/// Human-readable dump: gauge lines then one equation per line.
std::string format_equations(const Diagram& d, const EquationSystem& sys);

struct VectorSolution {
    int dimension = 0;
    std::vector<std::vector<double>> vectors;
    /// Present for discrete solutions; vectors then holds the same values as doubles.
    std::optional<std::vector<std::vector<Rational>>> exact;
};

struct SolutionCheck {
    bool ok = false;
    double max_residual = 0;  // max |u.w| / (|u||w|) over constrained pairs
    double min_angle = 0;     // smallest angle between the rays of two distinct vertices
    std::string problem;      // first failed condition, empty when ok
};

/// Nonzero vectors, orthogonality within eps_res, and pairwise ray angles
/// above eps_ray. Exact solutions are checked in integer arithmetic.
SolutionCheck verify_solution(const Diagram& d, const VectorSolution& sol, double eps_res = 1e-9,
                              double eps_ray = 1e-6);

/// Backtracking over sign-normalized rays with entries from `set` (first
/// nonzero entry positive, proportional tuples merged). Distinct vertices get
/// distinct rays. Returns std::nullopt when no assignment exists.
std::optional<VectorSolution> solve_discrete(const Diagram& d, const std::vector<Rational>& set);

/// Ray representatives used by solve_discrete, as primitive integer vectors.
std::vector<std::vector<std::int64_t>> discrete_rays(int dimension, const std::vector<Rational>& set);

enum class Realization { Sat, Unsat, Inconclusive };
std::string_view to_string(Realization r);

struct IntervalOptions {
    double eps_box = 1e-7;
    double eps_res = 1e-9;
    double eps_ray = 1e-6;
    std::uint64_t max_boxes = 10'000'000;
};

struct IntervalResult {
    Realization verdict = Realization::Inconclusive;
    std::optional<VectorSolution> solution;
    std::uint64_t boxes = 0;
    bool budget_exhausted = false;
    bool unresolved_small_boxes = false;
};

/// Branch-and-prune over the gauge-fixed system. Every free ray is written
/// with a chosen component equal to 1 and the others in [-1, 1]. Boxes are
/// dropped when an equation cannot vanish or two rays are within eps_ray on
/// the whole box. UNSAT means every box was dropped.
IntervalResult solve_interval(const EquationSystem& sys, const IntervalOptions& opts = {});

enum class Feasibility { Feasible, Infeasible };

/// Budgeted UNSAT check used to cut generation subtrees. Tries the edges near
/// the last edge first, then the whole diagram; a subdiagram without real
/// solutions rules out the diagram.
Feasibility feasibility_prune(const Diagram& d, std::uint64_t budget = 2000);

/// "<label>: (c1, ..., cn)" per vertex.
std::string format_solution(const Diagram& d, const VectorSolution& sol);

/// Reads lines "<label>: (c1, ..., cn)"; blank lines, '#' comments and
/// "REALIZE=" lines are skipped. Components that all parse as rationals make
/// an exact solution. Throws std::invalid_argument.
VectorSolution parse_solution(const Diagram& d, std::istream& in);

}  // namespace ks
