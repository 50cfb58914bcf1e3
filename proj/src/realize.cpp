#include "ks/realize.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ks/interval.hpp"

namespace ks {

// ---------------------------------------------------------------- rationals

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const std::int64_t g = std::gcd(n, d);
    num = g ? n / g : 0;
    den = g ? d / g : 1;
}

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t x = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw std::invalid_argument("bad number '" + std::string(whole) + "'");
    return x;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
    text = trim(text);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text, text));
    return Rational(parse_int(trim(text.substr(0, slash)), text), parse_int(trim(text.substr(slash + 1)), text));
}

std::string Rational::str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::vector<Rational> parse_component_set(std::string_view text) {
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        out.push_back(Rational::parse(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    std::sort(out.begin(), out.end(), [](const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (std::none_of(out.begin(), out.end(), [](const Rational& r) { return r.num != 0; }))
        throw std::invalid_argument("component set needs a nonzero value");
    return out;
}

// ---------------------------------------------------------------- equations

int EquationSystem::free_vertex_count() const {
    return static_cast<int>(std::count(pinned_axis.begin(), pinned_axis.end(), -1));
}

EquationSystem build_equations(const Diagram& d) {
    if (d.empty()) throw std::invalid_argument("empty diagram has no equation system");
    if (!d.uniform()) throw std::invalid_argument("edges of different sizes; no single dimension");
    EquationSystem sys;
    sys.dimension = d.edge_size();
    sys.vertex_count = d.vertex_count();
    sys.pinned_axis.assign(static_cast<std::size_t>(d.vertex_count()), -1);
    // Pin the edge best tied into the rest of the diagram. Pinning a pendant
    // edge leaves the hard part of the system floating and branching blows up.
    auto score = [&](int e) {
        int shared = 0;
        int degrees = 0;
        for (Vertex v : d.edge(e)) {
            shared += d.degree(v) >= 2;
            degrees += d.degree(v);
        }
        return std::pair{shared, degrees};
    };
    sys.gauge_edge = 0;
    for (int e = 1; e < d.edge_count(); ++e)
        if (score(e) > score(sys.gauge_edge)) sys.gauge_edge = e;
    const Edge& gauge = d.edge(sys.gauge_edge);
    for (std::size_t k = 0; k < gauge.size(); ++k) sys.pinned_axis[static_cast<std::size_t>(gauge[k])] = static_cast<int>(k);
    for (int e = 0; e < d.edge_count(); ++e) {
        const Edge& edge = d.edge(e);
        for (std::size_t i = 0; i < edge.size(); ++i)
            for (std::size_t j = i + 1; j < edge.size(); ++j) sys.constraints.push_back({e, edge[i], edge[j]});
    }
    return sys;
}

std::string format_equations(const Diagram& d, const EquationSystem& sys) {
    std::ostringstream out;
    out << "# dimension " << sys.dimension << ", " << sys.constraints.size() << " equations, "
        << sys.raw_components() << " components\n";
    for (Vertex v = 0; v < sys.vertex_count; ++v) {
        const int axis = sys.pinned_axis[static_cast<std::size_t>(v)];
        if (axis < 0) continue;
        out << "a[" << d.label(v) << "] = e" << axis + 1 << '\n';
    }
    for (const auto& c : sys.constraints) {
        for (int i = 0; i < sys.dimension; ++i) {
            if (i) out << " + ";
            out << "a[" << d.label(c.u) << ',' << i + 1 << "]*a[" << d.label(c.w) << ',' << i + 1 << ']';
        }
        out << " = 0\n";
    }
    return out.str();
}

// ---------------------------------------------------------------- verification

namespace {

using IntVec = std::vector<std::int64_t>;

IntVec primitive(const std::vector<Rational>& v) {
    std::int64_t l = 1;
    for (const auto& r : v) l = std::lcm(l, r.den);
    IntVec out;
    std::int64_t g = 0;
    for (const auto& r : v) {
        out.push_back(r.num * (l / r.den));
        g = std::gcd(g, out.back());
    }
    if (g > 1)
        for (auto& x : out) x /= g;
    return out;
}

__int128 dot(const IntVec& a, const IntVec& b) {
    __int128 s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<__int128>(a[i]) * b[i];
    return s;
}

bool collinear(const IntVec& a, const IntVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (static_cast<__int128>(a[i]) * b[j] != static_cast<__int128>(a[j]) * b[i]) return false;
    return true;
}

double norm(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Angle between the rays through u and w, accurate for nearly equal rays.
double ray_angle(const std::vector<double>& u, const std::vector<double>& w) {
    const double nu = norm(u);
    const double nw = norm(w);
    double minus = 0;
    double plus = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = u[i] / nu;
        const double b = w[i] / nw;
        minus += (a - b) * (a - b);
        plus += (a + b) * (a + b);
    }
    const double chord = std::min(1.0, std::sqrt(std::min(minus, plus)) / 2);
    return 2 * std::asin(chord);
}

struct Pair {
    Vertex u;
    Vertex w;
};

SolutionCheck check_vectors(const std::vector<Pair>& pairs, int vertex_count, const VectorSolution& sol,
                            double eps_res, double eps_ray) {
    SolutionCheck c;
    c.min_angle = std::acos(0.0);
    if (static_cast<int>(sol.vectors.size()) != vertex_count) {
        c.problem = "solution has " + std::to_string(sol.vectors.size()) + " vectors for " +
                    std::to_string(vertex_count) + " vertices";
        return c;
    }
    for (const auto& v : sol.vectors)
        if (static_cast<int>(v.size()) != sol.dimension) {
            c.problem = "vector of wrong dimension";
            return c;
        }
    std::vector<IntVec> ints;
    if (sol.exact) {
        if (static_cast<int>(sol.exact->size()) != vertex_count) {
            c.problem = "exact part has wrong size";
            return c;
        }
        for (const auto& v : *sol.exact) ints.push_back(primitive(v));
    }
    for (Vertex v = 0; v < vertex_count; ++v) {
        const bool zero = sol.exact ? std::all_of(ints[static_cast<std::size_t>(v)].begin(),
                                                  ints[static_cast<std::size_t>(v)].end(),
                                                  [](std::int64_t x) { return x == 0; })
                                    : !(norm(sol.vectors[static_cast<std::size_t>(v)]) > 0);
        if (zero) {
            c.problem = "zero vector at vertex " + std::to_string(v);
            return c;
        }
    }
    std::string first_problem;
    for (const auto& p : pairs) {
        const auto& u = sol.vectors[static_cast<std::size_t>(p.u)];
        const auto& w = sol.vectors[static_cast<std::size_t>(p.w)];
        double r = 0;
        for (std::size_t i = 0; i < u.size(); ++i) r += u[i] * w[i];
        r = std::fabs(r) / (norm(u) * norm(w));
        bool bad = r > eps_res;
        if (sol.exact) {
            bad = dot(ints[static_cast<std::size_t>(p.u)], ints[static_cast<std::size_t>(p.w)]) != 0;
            if (!bad) r = 0;
        }
        c.max_residual = std::max(c.max_residual, r);
        if (bad && first_problem.empty())
            first_problem = "vertices " + std::to_string(p.u) + " and " + std::to_string(p.w) + " not orthogonal";
    }
    for (Vertex u = 0; u < vertex_count; ++u)
        for (Vertex w = u + 1; w < vertex_count; ++w) {
            const double angle = ray_angle(sol.vectors[static_cast<std::size_t>(u)], sol.vectors[static_cast<std::size_t>(w)]);
            c.min_angle = std::min(c.min_angle, angle);
            const bool same = sol.exact ? collinear(ints[static_cast<std::size_t>(u)], ints[static_cast<std::size_t>(w)])
                                        : !(angle > eps_ray);
            if (same && first_problem.empty())
                first_problem = "vertices " + std::to_string(u) + " and " + std::to_string(w) + " on the same ray";
        }
    c.problem = first_problem;
    c.ok = first_problem.empty();
    return c;
}

std::vector<Pair> diagram_pairs(const Diagram& d) {
    std::vector<Pair> out;
    for (const auto& e : d.edges())
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::size_t j = i + 1; j < e.size(); ++j) out.push_back({e[i], e[j]});
    return out;
}

}  // namespace

SolutionCheck verify_solution(const Diagram& d, const VectorSolution& sol, double eps_res, double eps_ray) {
    return check_vectors(diagram_pairs(d), d.vertex_count(), sol, eps_res, eps_ray);
}

// ---------------------------------------------------------------- discrete solver

namespace {

struct RaySet {
    std::vector<IntVec> ints;
    std::vector<std::vector<Rational>> tuples;  // as written with set entries
};

RaySet make_rays(int n, const std::vector<Rational>& set) {
    RaySet rays;
    std::set<IntVec> seen;
    const std::size_t k = set.size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    std::vector<std::pair<IntVec, std::vector<Rational>>> found;
    while (true) {
        std::vector<Rational> t;
        for (auto i : idx) t.push_back(set[i]);
        const auto first = std::find_if(t.begin(), t.end(), [](const Rational& r) { return r.num != 0; });
        if (first != t.end() && first->num > 0) {
            IntVec p = primitive(t);
            if (seen.insert(p).second) found.emplace_back(std::move(p), std::move(t));
        }
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == k) idx[pos++] = 0;
        if (pos == idx.size()) break;
    }
    // Sparse rays first; among equals e1 before e2 and so on.
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        const auto nnz = [](const IntVec& v) { return std::count_if(v.begin(), v.end(), [](auto x) { return x != 0; }); };
        const auto na = nnz(a.first);
        const auto nb = nnz(b.first);
        if (na != nb) return na < nb;
        return a.first > b.first;
    });
    for (auto& [p, t] : found) {
        rays.ints.push_back(std::move(p));
        rays.tuples.push_back(std::move(t));
    }
    return rays;
}

class DiscreteSearch {
public:
    DiscreteSearch(const Diagram& d, const RaySet& rays) : d_(d), rays_(rays) {
        const std::size_t r = rays.ints.size();
        words_ = (r + 63) / 64;
        orth_.assign(r, std::vector<std::uint64_t>(words_, 0));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                if (dot(rays.ints[i], rays.ints[j]) == 0) orth_[i][j / 64] |= std::uint64_t{1} << (j % 64);
        const auto a = static_cast<std::size_t>(d.vertex_count());
        neighbors_.assign(a, {});
        for (const auto& e : d.edges())
            for (Vertex u : e)
                for (Vertex w : e)
                    if (u != w) neighbors_[static_cast<std::size_t>(u)].push_back(w);
        for (auto& nb : neighbors_) {
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        }
        assignment_.assign(a, -1);
    }

    bool run() {
        std::vector<std::uint64_t> full(words_, 0);
        for (std::size_t j = 0; j < rays_.ints.size(); ++j) full[j / 64] |= std::uint64_t{1} << (j % 64);
        std::vector<std::vector<std::uint64_t>> domains(assignment_.size(), full);
        return descend(domains, 0);
    }

    const std::vector<int>& assignment() const { return assignment_; }

private:
    int popcount(const std::vector<std::uint64_t>& b) const {
        int c = 0;
        for (auto w : b) c += std::popcount(w);
        return c;
    }

    bool descend(const std::vector<std::vector<std::uint64_t>>& domains, std::size_t assigned) {
        if (assigned == assignment_.size()) return true;
        // Smallest domain, then highest degree, then smallest id.
        int best = -1;
        int best_size = 0;
        for (std::size_t v = 0; v < assignment_.size(); ++v) {
            if (assignment_[v] >= 0) continue;
            const int s = popcount(domains[v]);
            if (best < 0 || s < best_size ||
                (s == best_size && d_.degree(static_cast<int>(v)) > d_.degree(best))) {
                best = static_cast<int>(v);
                best_size = s;
            }
        }
        if (best_size == 0) return false;
        const auto bv = static_cast<std::size_t>(best);
        for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t bits = domains[bv][w];
            while (bits) {
                const int bit = std::countr_zero(bits);
                bits &= bits - 1;
                const std::size_t ray = w * 64 + static_cast<std::size_t>(bit);
                assignment_[bv] = static_cast<int>(ray);
                auto next = domains;
                bool ok = true;
                for (Vertex u : neighbors_[bv]) {
                    if (assignment_[static_cast<std::size_t>(u)] >= 0) continue;
                    auto& dom = next[static_cast<std::size_t>(u)];
                    for (std::size_t k = 0; k < words_; ++k) dom[k] &= orth_[ray][k];
                }
                for (std::size_t u = 0; u < assignment_.size() && ok; ++u) {
                    if (assignment_[u] >= 0) continue;
                    next[u][ray / 64] &= ~(std::uint64_t{1} << (ray % 64));
                    if (popcount(next[u]) == 0) ok = false;
                }
                if (ok && descend(next, assigned + 1)) return true;
                assignment_[bv] = -1;
            }
        }
        return false;
    }

    const Diagram& d_;
    const RaySet& rays_;
    std::size_t words_ = 0;
    std::vector<std::vector<std::uint64_t>> orth_;
    std::vector<std::vector<Vertex>> neighbors_;
    std::vector<int> assignment_;
};

}  // namespace

std::vector<std::vector<std::int64_t>> discrete_rays(int dimension, const std::vector<Rational>& set) {
    return make_rays(dimension, set).ints;
}

std::optional<VectorSolution> solve_discrete(const Diagram& d, const std::vector<Rational>& set) {
    if (d.empty()) return VectorSolution{};
    if (!d.uniform()) throw std::invalid_argument("edges of different sizes; no single dimension");
    const RaySet rays = make_rays(d.edge_size(), set);
    DiscreteSearch search(d, rays);
    if (!search.run()) return std::nullopt;
    VectorSolution sol;
    sol.dimension = d.edge_size();
    sol.exact.emplace();
    for (int ray : search.assignment()) {
        const auto& t = rays.tuples[static_cast<std::size_t>(ray)];
        sol.exact->push_back(t);
        std::vector<double> v;
        for (const auto& r : t) v.push_back(r.value());
        sol.vectors.push_back(std::move(v));
    }
    return sol;
}

// ---------------------------------------------------------------- interval solver

std::string_view to_string(Realization r) {
    switch (r) {
        case Realization::Sat: return "SAT";
        case Realization::Unsat: return "UNSAT";
        case Realization::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

namespace {

constexpr std::int8_t kPinned = -2;
constexpr std::int8_t kUndecided = -1;

struct Box {
    std::vector<Interval> x;    // vertex-major, dimension components each
    std::vector<std::int8_t> chart;  // kPinned, kUndecided or the component fixed at 1
};

class IntervalSolver {
public:
    IntervalSolver(const EquationSystem& sys, const IntervalOptions& opts)
        : sys_(sys), opts_(opts), n_(static_cast<std::size_t>(sys.dimension)),
          a_(static_cast<std::size_t>(sys.vertex_count)), rng_(0x5eed) {
        for (const auto& c : sys.constraints) pairs_.push_back({c.u, c.w});
        neighbors_.assign(a_, {});
        for (const auto& c : sys.constraints) {
            neighbors_[static_cast<std::size_t>(c.u)].push_back(c.w);
            neighbors_[static_cast<std::size_t>(c.w)].push_back(c.u);
        }
        std::vector<std::set<int>> edges_of(a_);
        for (const auto& c : sys.constraints) {
            edges_of[static_cast<std::size_t>(c.u)].insert(c.edge);
            edges_of[static_cast<std::size_t>(c.w)].insert(c.edge);
        }
        for (std::size_t v = 0; v < a_; ++v) structural_.push_back(edges_of[v].size() >= 2);
        const double s = std::sin(opts.eps_ray);
        sin2_ = s * s * (1 - 1e-9);
    }

    IntervalResult run() {
        IntervalResult result;
        Box root;
        root.x.assign(a_ * n_, Interval(-1.0, 1.0));
        root.chart.assign(a_, kUndecided);
        for (std::size_t v = 0; v < a_; ++v) {
            const int axis = sys_.pinned_axis[v];
            if (axis < 0) continue;
            root.chart[v] = kPinned;
            for (std::size_t i = 0; i < n_; ++i) at(root, v, i) = Interval(static_cast<int>(i) == axis ? 1.0 : 0.0);
        }
        std::vector<Box> stack{std::move(root)};
        while (!stack.empty()) {
            if (result.boxes >= opts_.max_boxes) {
                result.budget_exhausted = true;
                break;
            }
            Box box = std::move(stack.back());
            stack.pop_back();
            ++result.boxes;
            if (!contract(box) || degenerate(box)) continue;

            // Vertices on two or more edges are branched on first; a vertex on
            // a single edge rarely decides feasibility and splitting it early
            // multiplies the work.
            if (branch_chart(box, stack, true)) continue;
            const bool try_polish = polish_attempts_ < 256 || result.boxes % 64 == 0;
            if (try_polish) {
                if (auto sol = polish(box)) {
                    result.verdict = Realization::Sat;
                    result.solution = std::move(sol);
                    return result;
                }
            }
            if (bisect(box, stack, true)) continue;
            if (branch_chart(box, stack, false)) continue;
            if (bisect(box, stack, false)) continue;
            if (!try_polish) {
                if (auto sol = polish(box)) {
                    result.verdict = Realization::Sat;
                    result.solution = std::move(sol);
                    return result;
                }
            }
            result.unresolved_small_boxes = true;
        }
        if (!result.budget_exhausted && !result.unresolved_small_boxes) result.verdict = Realization::Unsat;
        return result;
    }

private:
    Interval& at(Box& b, std::size_t v, std::size_t i) const { return b.x[v * n_ + i]; }
    const Interval& at(const Box& b, std::size_t v, std::size_t i) const { return b.x[v * n_ + i]; }

    // Splits the chart of one undecided vertex of the given kind.
    bool branch_chart(const Box& box, std::vector<Box>& stack, bool structural) const {
        const int pick = undecided_vertex(box, structural);
        if (pick < 0) return false;
        const auto v = static_cast<std::size_t>(pick);
        for (std::size_t c = n_; c-- > 0;) {
            if (!at(box, v, c).contains(1.0)) continue;
            Box child = box;
            child.chart[v] = static_cast<std::int8_t>(c);
            at(child, v, c) = Interval(1.0);
            stack.push_back(std::move(child));
        }
        return true;
    }

    // Halves the widest component of a vertex of the given kind, if wider than eps_box.
    bool bisect(Box& box, std::vector<Box>& stack, bool structural) const {
        std::size_t widest = 0;
        double width = -1;
        for (std::size_t v = 0; v < a_; ++v) {
            if (structural_[v] != structural) continue;
            for (std::size_t i = 0; i < n_; ++i)
                if (at(box, v, i).width() > width) {
                    width = at(box, v, i).width();
                    widest = v * n_ + i;
                }
        }
        if (width < opts_.eps_box) return false;
        const double m = box.x[widest].mid();
        Box left = box;
        left.x[widest].hi = m;
        box.x[widest].lo = m;
        stack.push_back(std::move(box));
        stack.push_back(std::move(left));
        return true;
    }

    // HC4-style narrowing of sum_i u_i w_i = 0 over all constraints until the
    // boxes stop shrinking noticeably. False when some box becomes empty.
    bool contract(Box& box) const {
        std::vector<Interval> t(n_), prefix(n_ + 1), suffix(n_ + 1);
        for (int pass = 0; pass < 16; ++pass) {
            double shrink = 0;
            for (const auto& p : pairs_) {
                const auto u = static_cast<std::size_t>(p.u);
                const auto w = static_cast<std::size_t>(p.w);
                for (std::size_t i = 0; i < n_; ++i) t[i] = at(box, u, i) * at(box, w, i);
                prefix[0] = Interval(0.0);
                for (std::size_t i = 0; i < n_; ++i) prefix[i + 1] = prefix[i] + t[i];
                if (!prefix[n_].contains(0.0)) return false;
                suffix[n_] = Interval(0.0);
                for (std::size_t i = n_; i-- > 0;) suffix[i] = suffix[i + 1] + t[i];
                for (std::size_t i = 0; i < n_; ++i) {
                    const Interval rest = prefix[i] + suffix[i + 1];
                    const Interval ti = intersect(t[i], -rest);
                    if (ti.empty()) return false;
                    Interval& ui = at(box, u, i);
                    Interval& wi = at(box, w, i);
                    if (!wi.contains(0.0)) {
                        const double before = ui.width();
                        ui = intersect(ui, ti / wi);
                        if (ui.empty()) return false;
                        shrink = std::max(shrink, before - ui.width());
                    }
                    if (!ui.contains(0.0)) {
                        const double before = wi.width();
                        wi = intersect(wi, ti / ui);
                        if (wi.empty()) return false;
                        shrink = std::max(shrink, before - wi.width());
                    }
                }
            }
            if (shrink < 1e-3) break;
        }
        for (std::size_t v = 0; v < a_; ++v) {
            if (box.chart[v] != kUndecided) continue;
            bool can_be_one = false;
            for (std::size_t i = 0; i < n_; ++i) can_be_one = can_be_one || at(box, v, i).contains(1.0);
            if (!can_be_one) return false;
        }
        return true;
    }

    // Some pair of fixed-scale rays is within eps_ray everywhere on the box.
    bool degenerate(const Box& box) const {
        for (std::size_t u = 0; u < a_; ++u) {
            if (box.chart[u] == kUndecided) continue;
            for (std::size_t w = u + 1; w < a_; ++w) {
                if (box.chart[w] == kUndecided) continue;
                Interval cross(0.0);
                Interval nu(0.0);
                Interval nw(0.0);
                for (std::size_t i = 0; i < n_; ++i) {
                    nu = nu + sqr(at(box, u, i));
                    nw = nw + sqr(at(box, w, i));
                    for (std::size_t j = i + 1; j < n_; ++j)
                        cross = cross + sqr(at(box, u, i) * at(box, w, j) - at(box, u, j) * at(box, w, i));
                }
                const double bound = rounding::mul_down(rounding::mul_down(sin2_, nu.lo), nw.lo);
                if (cross.hi < bound) return true;
            }
        }
        return false;
    }

    // Undecided vertex with the most decided neighbours; -1 if none.
    int undecided_vertex(const Box& box, bool structural) const {
        int best = -1;
        std::pair<int, int> best_score{-1, -1};
        for (std::size_t v = 0; v < a_; ++v) {
            if (box.chart[v] != kUndecided || structural_[v] != structural) continue;
            int decided = 0;
            for (Vertex w : neighbors_[v]) decided += box.chart[static_cast<std::size_t>(w)] != kUndecided;
            const std::pair<int, int> score{decided, static_cast<int>(neighbors_[v].size())};
            if (score > best_score) {
                best_score = score;
                best = static_cast<int>(v);
            }
        }
        return best;
    }

    // Gauss-Newton with minimum-norm steps from a jittered box midpoint.
    std::optional<VectorSolution> polish(const Box& box) {
        ++polish_attempts_;
        std::vector<double> x(box.x.size());
        std::vector<int> free_index(box.x.size(), -1);
        int p = 0;
        std::uniform_real_distribution<double> jitter(-0.25, 0.25);
        for (std::size_t v = 0; v < a_; ++v)
            for (std::size_t i = 0; i < n_; ++i) {
                const Interval& iv = at(box, v, i);
                const std::size_t k = v * n_ + i;
                x[k] = iv.mid();
                if (!iv.is_point()) {
                    x[k] += jitter(rng_) * iv.width();
                    free_index[k] = p++;
                }
            }
        const auto m = static_cast<Eigen::Index>(pairs_.size());
        Eigen::VectorXd r(m);
        Eigen::MatrixXd jac(m, p);
        for (int iter = 0; iter < 30 && p > 0; ++iter) {
            jac.setZero();
            for (Eigen::Index c = 0; c < m; ++c) {
                const auto u = static_cast<std::size_t>(pairs_[static_cast<std::size_t>(c)].u);
                const auto w = static_cast<std::size_t>(pairs_[static_cast<std::size_t>(c)].w);
                double s = 0;
                for (std::size_t i = 0; i < n_; ++i) {
                    s += x[u * n_ + i] * x[w * n_ + i];
                    if (free_index[u * n_ + i] >= 0) jac(c, free_index[u * n_ + i]) += x[w * n_ + i];
                    if (free_index[w * n_ + i] >= 0) jac(c, free_index[w * n_ + i]) += x[u * n_ + i];
                }
                r(c) = s;
            }
            if (r.lpNorm<Eigen::Infinity>() < 1e-15) break;
            const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-r);
            for (std::size_t k = 0; k < x.size(); ++k)
                if (free_index[k] >= 0) x[k] += step(free_index[k]);
            if (step.lpNorm<Eigen::Infinity>() < 1e-17) break;
        }
        VectorSolution sol;
        sol.dimension = static_cast<int>(n_);
        for (std::size_t v = 0; v < a_; ++v) sol.vectors.emplace_back(x.begin() + static_cast<std::ptrdiff_t>(v * n_),
                                                                      x.begin() + static_cast<std::ptrdiff_t>((v + 1) * n_));
        if (check_vectors(pairs_, static_cast<int>(a_), sol, opts_.eps_res, opts_.eps_ray).ok) return sol;
        return std::nullopt;
    }

    const EquationSystem& sys_;
    IntervalOptions opts_;
    std::size_t n_;
    std::size_t a_;
    std::vector<Pair> pairs_;
    std::vector<std::vector<Vertex>> neighbors_;
    std::vector<bool> structural_;  // vertex lies on at least two edges
    double sin2_ = 0;
    std::mt19937_64 rng_;
    std::uint64_t polish_attempts_ = 0;
};

// Edges of d (written order) as a fresh diagram with dense vertex ids.
Diagram sub_diagram(const Diagram& d, const std::vector<int>& edge_ids) {
    std::map<Vertex, Vertex> ids;
    std::vector<Edge> edges;
    for (int e : edge_ids) {
        Edge out;
        for (Vertex v : d.written_edge(e)) {
            auto [it, inserted] = ids.emplace(v, static_cast<Vertex>(ids.size()));
            out.push_back(it->second);
        }
        edges.push_back(std::move(out));
    }
    return Diagram(std::move(edges));
}

}  // namespace

IntervalResult solve_interval(const EquationSystem& sys, const IntervalOptions& opts) {
    return IntervalSolver(sys, opts).run();
}

Feasibility feasibility_prune(const Diagram& d, std::uint64_t budget) {
    if (d.empty() || !d.uniform()) return Feasibility::Feasible;
    const int b = d.edge_count();
    const int last = b - 1;
    // Edge distance from the last edge through shared vertices.
    std::vector<int> dist(static_cast<std::size_t>(b), -1);
    std::vector<int> queue{last};
    dist[static_cast<std::size_t>(last)] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int e = queue[head];
        for (Vertex v : d.edge(e))
            for (int f : d.incidence()[static_cast<std::size_t>(v)])
                if (dist[static_cast<std::size_t>(f)] < 0) {
                    dist[static_cast<std::size_t>(f)] = dist[static_cast<std::size_t>(e)] + 1;
                    queue.push_back(f);
                }
    }
    IntervalOptions opts;
    opts.max_boxes = budget;
    std::size_t previous = 0;
    for (int radius : {1, 2, b}) {
        std::vector<int> ids{last};
        for (int e = 0; e < b; ++e)
            if (e != last && ((dist[static_cast<std::size_t>(e)] >= 0 && dist[static_cast<std::size_t>(e)] <= radius) || radius == b))
                ids.push_back(e);
        if (ids.size() == previous || ids.size() < 2) continue;
        previous = ids.size();
        // Written order, so the gauge edge is the oldest one rather than the
        // new edge, which may sit in an unrelated component.
        std::sort(ids.begin(), ids.end());
        const Diagram sub = sub_diagram(d, ids);
        if (solve_interval(build_equations(sub), opts).verdict == Realization::Unsat) return Feasibility::Infeasible;
    }
    return Feasibility::Feasible;
}

// ---------------------------------------------------------------- text formats

std::string format_solution(const Diagram& d, const VectorSolution& sol) {
    std::string out;
    for (std::size_t v = 0; v < sol.vectors.size(); ++v) {
        out += d.label(static_cast<Vertex>(v)) + ": (";
        for (int i = 0; i < sol.dimension; ++i) {
            if (i) out += ", ";
            if (sol.exact) {
                out += (*sol.exact)[v][static_cast<std::size_t>(i)].str();
            } else {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.17g", sol.vectors[v][static_cast<std::size_t>(i)]);
                out += buf;
            }
        }
        out += ")\n";
    }
    return out;
}

VectorSolution parse_solution(const Diagram& d, std::istream& in) {
    std::map<std::string, Vertex> by_label;
    for (Vertex v = 0; v < d.vertex_count(); ++v) by_label[d.label(v)] = v;
    std::vector<std::optional<std::vector<std::string>>> raw(static_cast<std::size_t>(d.vertex_count()));
    std::string line;
    int dimension = -1;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string_view text = trim(line);
        if (text.empty() || text.starts_with("REALIZE=")) continue;
        const auto colon = text.find(':');
        const auto open = text.find('(');
        const auto close = text.rfind(')');
        if (colon == std::string_view::npos || open == std::string_view::npos || close == std::string_view::npos ||
            close < open)
            throw std::invalid_argument("malformed solution line '" + std::string(text) + "'");
        const std::string label(trim(text.substr(0, colon)));
        const auto it = by_label.find(label);
        if (it == by_label.end()) throw std::invalid_argument("unknown vertex '" + label + "' in solution");
        std::vector<std::string> parts;
        std::string_view body = text.substr(open + 1, close - open - 1);
        std::size_t start = 0;
        while (true) {
            const auto comma = body.find(',', start);
            parts.emplace_back(trim(body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (dimension < 0) dimension = static_cast<int>(parts.size());
        if (static_cast<int>(parts.size()) != dimension)
            throw std::invalid_argument("vector for '" + label + "' has " + std::to_string(parts.size()) + " components");
        raw[static_cast<std::size_t>(it->second)] = std::move(parts);
    }
    VectorSolution sol;
    sol.dimension = std::max(dimension, 0);
    bool exact = true;
    std::vector<std::vector<Rational>> rationals;
    for (Vertex v = 0; v < d.vertex_count(); ++v) {
        const auto& parts = raw[static_cast<std::size_t>(v)];
        if (!parts) throw std::invalid_argument("no vector for vertex '" + d.label(v) + "'");
        std::vector<double> vec;
        std::vector<Rational> rv;
        for (const auto& s : *parts) {
            if (exact) {
                try {
                    rv.push_back(Rational::parse(s));
                } catch (const std::invalid_argument&) {
                    exact = false;
                }
            }
            std::size_t used = 0;
            double x = 0;
            try {
                x = std::stod(s, &used);
            } catch (const std::exception&) {
                throw std::invalid_argument("bad component '" + s + "'");
            }
            if (used != s.size()) {
                if (!exact) throw std::invalid_argument("bad component '" + s + "'");
                x = rv.back().value();
            }
            vec.push_back(x);
        }
        sol.vectors.push_back(std::move(vec));
        rationals.push_back(std::move(rv));
    }
    if (exact) sol.exact = std::move(rationals);
    return sol;
}

}  // namespace ks
