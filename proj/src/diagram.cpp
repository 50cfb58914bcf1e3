#include "ks/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <unordered_map>

namespace ks {

namespace {

constexpr std::string_view kAlphabet =
    "123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Splits one edge token into vertex tokens.
std::vector<std::string> split_vertices(std::string_view token, Notation notation) {
    std::vector<std::string> out;
    if (notation == Notation::Classic) {
        for (char c : token) {
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            out.emplace_back(1, c);
        }
        return out;
    }
    std::size_t i = 0;
    while (i < token.size()) {
        char c = token[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c != 'v')
            throw MmpError(MmpErrorKind::UnknownSymbol,
                           "unknown symbol '" + std::string(1, c) + "' in edge '" + std::string(token) + "'");
        std::size_t j = i + 1;
        while (j < token.size() && std::isdigit(static_cast<unsigned char>(token[j]))) ++j;
        if (j == i + 1 || token[i + 1] == '0')
            throw MmpError(MmpErrorKind::UnknownSymbol,
                           "malformed vertex '" + std::string(token.substr(i, j - i)) + "' in edge '" +
                               std::string(token) + "'");
        out.emplace_back(token.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

char vertex_symbol(int index) {
    if (index < 0 || index >= kAlphabetSize)
        throw MmpError(MmpErrorKind::TooManyVertices,
                       "vertex index " + std::to_string(index) + " has no classic symbol");
    return kAlphabet[static_cast<std::size_t>(index)];
}

std::optional<int> symbol_index(char c) {
    auto pos = kAlphabet.find(c);
    if (pos == std::string_view::npos) return std::nullopt;
    return static_cast<int>(pos);
}

std::string_view to_string(MmpErrorKind kind) {
    switch (kind) {
    case MmpErrorKind::UnknownSymbol: return "UnknownSymbol";
    case MmpErrorKind::DuplicateVertexInEdge: return "DuplicateVertexInEdge";
    case MmpErrorKind::EdgeTooSmall: return "EdgeTooSmall";
    case MmpErrorKind::Condition3Violation: return "Condition3Violation";
    case MmpErrorKind::DuplicateEdge: return "DuplicateEdge";
    case MmpErrorKind::MissingTerminator: return "MissingTerminator";
    case MmpErrorKind::TooManyVertices: return "TooManyVertices";
    }
    return "?";
}

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::EdgeTooSmall: return "EdgeTooSmall";
    case ViolationKind::Condition3Violation: return "Condition3Violation";
    case ViolationKind::DuplicateEdge: return "DuplicateEdge";
    case ViolationKind::DuplicateVertexInEdge: return "DuplicateVertexInEdge";
    }
    return "?";
}

Diagram::Diagram(std::vector<Edge> edges, std::vector<std::string> labels)
    : written_(std::move(edges)), labels_(std::move(labels)) {
    edges_ = written_;
    for (auto& e : edges_) {
        std::sort(e.begin(), e.end());
        if (!e.empty()) vertex_count_ = std::max(vertex_count_, e.back() + 1);
        edge_size_ = std::max(edge_size_, static_cast<int>(e.size()));
    }
    incidence_.assign(static_cast<std::size_t>(vertex_count_), {});
    for (int i = 0; i < edge_count(); ++i) {
        const Edge& e = edges_[static_cast<std::size_t>(i)];
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (k > 0 && e[k] == e[k - 1]) continue;
            incidence_[static_cast<std::size_t>(e[k])].push_back(i);
        }
    }
}

bool Diagram::uniform() const noexcept {
    return std::all_of(edges_.begin(), edges_.end(),
                       [&](const Edge& e) { return static_cast<int>(e.size()) == edge_size_; });
}

std::string Diagram::label(Vertex v) const {
    if (!labels_.empty()) return labels_[static_cast<std::size_t>(v)];
    if (v < kAlphabetSize) return std::string(1, vertex_symbol(v));
    return "v" + std::to_string(v + 1);
}

Diagram Diagram::with_edge(Edge e) const {
    std::vector<Edge> edges = written_;
    edges.push_back(std::move(e));
    return Diagram(std::move(edges));
}

Diagram Diagram::without_edge(int i) const {
    std::vector<int> keep_id(static_cast<std::size_t>(vertex_count_), -1);
    std::vector<Edge> edges;
    edges.reserve(written_.size());
    for (int j = 0; j < edge_count(); ++j)
        if (j != i) edges.push_back(written_[static_cast<std::size_t>(j)]);
    for (const auto& e : edges)
        for (Vertex v : e) keep_id[static_cast<std::size_t>(v)] = 0;
    int next = 0;
    std::vector<std::string> labels;
    for (int v = 0; v < vertex_count_; ++v) {
        if (keep_id[static_cast<std::size_t>(v)] < 0) continue;
        keep_id[static_cast<std::size_t>(v)] = next++;
        if (!labels_.empty()) labels.push_back(labels_[static_cast<std::size_t>(v)]);
    }
    for (auto& e : edges)
        for (Vertex& v : e) v = keep_id[static_cast<std::size_t>(v)];
    return Diagram(std::move(edges), std::move(labels));
}

Diagram Diagram::relabeled(const std::vector<int>& perm) const {
    std::vector<Edge> edges = written_;
    for (auto& e : edges)
        for (Vertex& v : e) v = perm[static_cast<std::size_t>(v)];
    return Diagram(std::move(edges));
}

int shared_count(const Edge& a, const Edge& b) {
    int count = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

std::vector<Violation> validate(const Diagram& d) {
    std::vector<Violation> out;
    const auto& edges = d.edges();
    for (int i = 0; i < d.edge_count(); ++i) {
        const Edge& e = edges[static_cast<std::size_t>(i)];
        auto dup = std::adjacent_find(e.begin(), e.end());
        if (dup != e.end()) out.push_back({ViolationKind::DuplicateVertexInEdge, {i}, {*dup}});
        if (e.size() < 3) out.push_back({ViolationKind::EdgeTooSmall, {i}, {}});
    }
    for (int i = 0; i < d.edge_count(); ++i) {
        for (int j = i + 1; j < d.edge_count(); ++j) {
            const Edge& a = edges[static_cast<std::size_t>(i)];
            const Edge& b = edges[static_cast<std::size_t>(j)];
            if (a == b) {
                out.push_back({ViolationKind::DuplicateEdge, {i, j}, {}});
                continue;
            }
            std::vector<Vertex> common;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
            if (common.size() >= 2 && (a.size() < 4 || b.size() < 4))
                out.push_back({ViolationKind::Condition3Violation, {i, j}, common});
        }
    }
    return out;
}

Diagram parse_mmp(std::string_view text, Notation notation) {
    if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty() || text.back() != '.')
        throw MmpError(MmpErrorKind::MissingTerminator,
                       "diagram '" + std::string(text) + "' is not terminated by '.'");
    text.remove_suffix(1);
    if (text.find('.') != std::string_view::npos)
        throw MmpError(MmpErrorKind::UnknownSymbol, "unexpected '.' inside diagram '" + std::string(text) + "'");

    std::vector<Edge> edges;
    std::vector<std::string> labels;
    std::unordered_map<std::string, int> ids;
    if (trim(text).empty()) return Diagram();

    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string_view token = trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start));
        Edge edge;
        for (const auto& sym : split_vertices(token, notation)) {
            if (notation == Notation::Classic && !symbol_index(sym[0]))
                throw MmpError(MmpErrorKind::UnknownSymbol,
                               "unknown symbol '" + sym + "' in edge '" + std::string(token) + "'");
            auto [it, inserted] = ids.try_emplace(sym, static_cast<int>(labels.size()));
            if (inserted) labels.push_back(sym);
            if (std::find(edge.begin(), edge.end(), it->second) != edge.end())
                throw MmpError(MmpErrorKind::DuplicateVertexInEdge,
                               "vertex '" + sym + "' repeated in edge '" + std::string(token) + "'");
            edge.push_back(it->second);
        }
        if (edge.size() < 3)
            throw MmpError(MmpErrorKind::EdgeTooSmall,
                           "edge '" + std::string(token) + "' has fewer than 3 vertices");
        edges.push_back(std::move(edge));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }

    Diagram d(std::move(edges), std::move(labels));
    for (const auto& v : validate(d)) {
        auto edge_text = [&](int i) {
            std::string s;
            for (Vertex x : d.written_edge(i)) s += d.label(x);
            return s;
        };
        if (v.kind == ViolationKind::DuplicateEdge)
            throw MmpError(MmpErrorKind::DuplicateEdge, "edge '" + edge_text(v.edges[1]) + "' appears twice");
        if (v.kind == ViolationKind::Condition3Violation)
            throw MmpError(MmpErrorKind::Condition3Violation,
                           "edges '" + edge_text(v.edges[0]) + "' and '" + edge_text(v.edges[1]) +
                               "' share two vertices but one has fewer than 4 vertices");
    }
    return d;
}

std::string serialize_mmp(const Diagram& d, Notation notation) {
    if (notation == Notation::Classic && d.vertex_count() > kAlphabetSize)
        throw MmpError(MmpErrorKind::TooManyVertices,
                       "diagram has " + std::to_string(d.vertex_count()) +
                           " vertices; classic notation holds at most 61");
    // Parsed labels keep their number across notations: '5' <-> v5, 'A' <-> v10.
    std::vector<int> number(static_cast<std::size_t>(d.vertex_count()));
    bool fits_classic = true;
    for (Vertex v = 0; v < d.vertex_count(); ++v) {
        int k = v + 1;
        if (d.has_custom_labels()) {
            const std::string& l = d.label(v);
            if (l.size() == 1) {
                if (auto idx = symbol_index(l[0])) k = *idx + 1;
            } else if (l.size() > 1 && l[0] == 'v') {
                k = std::stoi(l.substr(1));
            }
        }
        number[static_cast<std::size_t>(v)] = k;
        fits_classic = fits_classic && k <= kAlphabetSize;
    }
    std::string out;
    for (int i = 0; i < d.edge_count(); ++i) {
        if (i > 0) out += ',';
        for (Vertex v : d.written_edge(i)) {
            const int k = number[static_cast<std::size_t>(v)];
            if (notation == Notation::Long)
                out += "v" + std::to_string(k);
            else
                out += vertex_symbol(fits_classic ? k - 1 : v);
        }
    }
    out += '.';
    return out;
}

}  // namespace ks
