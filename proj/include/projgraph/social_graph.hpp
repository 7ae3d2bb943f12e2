#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "projgraph/errors.hpp"

namespace projgraph {

using NodeId = std::uint32_t;
using ExternalId = std::uint64_t;

/// Unordered node pair, stored as (min, max). Used for SG edges and,
/// with peer ids, for PG edges.
struct EdgeKey {
    NodeId a = 0;  // smaller endpoint
    NodeId b = 0;  // larger endpoint

    EdgeKey() = default;
    EdgeKey(NodeId u, NodeId v) : a(std::min(u, v)), b(std::max(u, v)) {}

    friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

/// Undirected, unweighted, simple graph over dense node ids [0, n).
/// Immutable after construction; adjacency lists are sorted. Each node keeps
/// the external id it carried in the input file so reports can translate back.
class SocialGraph {
public:
    SocialGraph() = default;

    /// Builds a simple graph from an arbitrary edge multiset: self-loops are
    /// dropped, duplicates (in either direction) collapse to one edge.
    /// `external_ids` maps dense ids back to input ids; when empty, the
    /// identity map is used.
    static SocialGraph from_edges(std::size_t node_count, std::vector<EdgeKey> edges,
                                  std::vector<ExternalId> external_ids = {}) {
        std::erase_if(edges, [](const EdgeKey& e) { return e.a == e.b; });
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

        SocialGraph g;
        g.offsets_.assign(node_count + 1, 0);
        for (const EdgeKey& e : edges) {
            if (e.b >= node_count) {
                throw ValidationError("edge endpoint " + std::to_string(e.b) +
                                      " out of range for node count " + std::to_string(node_count));
            }
            ++g.offsets_[e.a + 1];
            ++g.offsets_[e.b + 1];
        }
        for (std::size_t i = 1; i <= node_count; ++i) g.offsets_[i] += g.offsets_[i - 1];
        g.neighbors_.resize(g.offsets_[node_count]);
        std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
        for (const EdgeKey& e : edges) {
            g.neighbors_[cursor[e.a]++] = e.b;
            g.neighbors_[cursor[e.b]++] = e.a;
        }
        for (std::size_t u = 0; u < node_count; ++u) {
            std::sort(g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u]),
                      g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u + 1]));
        }
        g.edge_count_ = edges.size();
        if (external_ids.empty()) {
            g.external_ids_.resize(node_count);
            for (std::size_t u = 0; u < node_count; ++u) g.external_ids_[u] = u;
        } else {
            if (external_ids.size() != node_count) {
                throw ValidationError("external id map size does not match node count");
            }
            g.external_ids_ = std::move(external_ids);
        }
        return g;
    }

    std::size_t node_count() const { return external_ids_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    std::span<const NodeId> neighbors(NodeId u) const {
        return {neighbors_.data() + offsets_[u], neighbors_.data() + offsets_[u + 1]};
    }

    /// Number of incident edges. Throws on an id outside [0, n).
    std::size_t degree(NodeId u) const {
        if (u >= node_count()) {
            throw ValidationError("unknown node id " + std::to_string(u));
        }
        return offsets_[u + 1] - offsets_[u];
    }

    bool has_edge(NodeId u, NodeId v) const {
        auto nb = neighbors(u);
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    ExternalId external_id(NodeId u) const { return external_ids_[u]; }
    const std::vector<ExternalId>& external_ids() const { return external_ids_; }

    /// All edges as (min, max) pairs, sorted.
    std::vector<EdgeKey> edges() const {
        std::vector<EdgeKey> out;
        out.reserve(edge_count_);
        for (NodeId u = 0; u < node_count(); ++u) {
            for (NodeId v : neighbors(u)) {
                if (u < v) out.emplace_back(u, v);
            }
        }
        return out;
    }

private:
    std::vector<std::size_t> offsets_;   // CSR offsets, size n+1
    std::vector<NodeId> neighbors_;      // sorted per node
    std::vector<ExternalId> external_ids_;
    std::size_t edge_count_ = 0;
};

namespace detail {

inline bool parse_edge_line(const std::string& line, ExternalId& u, ExternalId& v, bool& blank) {
    std::size_t i = 0;
    const std::size_t n = line.size();
    auto skip_ws = [&] {
        while (i < n && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    };
    skip_ws();
    blank = (i == n);
    if (blank || line[i] == '#') {
        blank = true;
        return true;
    }
    ExternalId vals[2];
    for (ExternalId& val : vals) {
        skip_ws();
        auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + n, val);
        if (ec != std::errc{} || ptr == line.data() + i) return false;
        i = static_cast<std::size_t>(ptr - line.data());
        if (i < n && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') return false;
    }
    u = vals[0];
    v = vals[1];
    return true;  // any extra tokens are ignored
}

}  // namespace detail

/// Reads a SNAP-style whitespace-separated edge list: one "u v" pair per
/// line, '#'-prefixed comment lines skipped, extra tokens ignored. Directed
/// inputs are symmetrized, self-loops dropped, duplicate edges collapsed.
/// External ids are remapped to dense internal ids in first-seen order.
inline SocialGraph load_edge_list(std::istream& in, const std::string& name = "<stream>") {
    std::unordered_map<ExternalId, NodeId> to_internal;
    std::vector<ExternalId> external_ids;
    std::vector<EdgeKey> edges;
    auto intern = [&](ExternalId x) {
        auto [it, inserted] = to_internal.emplace(x, static_cast<NodeId>(external_ids.size()));
        if (inserted) external_ids.push_back(x);
        return it->second;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        ExternalId u, v;
        bool blank = false;
        if (!detail::parse_edge_line(line, u, v, blank)) {
            throw ValidationError(name + ":" + std::to_string(line_no) + ": malformed edge line");
        }
        if (blank) continue;
        if (u == v) continue;  // intern only nodes that survive cleaning
        edges.emplace_back(intern(u), intern(v));
    }
    if (in.bad()) throw IoError("error while reading " + name);
    if (edges.empty()) {
        throw ValidationError(name + ": empty graph after cleaning");
    }
    return SocialGraph::from_edges(external_ids.size(), std::move(edges), std::move(external_ids));
}

inline SocialGraph load_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return load_edge_list(in, path.string());
}

/// Writes the graph as an edge list of external ids, one edge per line.
inline void write_edge_list(std::ostream& out, const SocialGraph& g) {
    for (const EdgeKey& e : g.edges()) {
        out << g.external_id(e.a) << '\t' << g.external_id(e.b) << '\n';
    }
}

struct LccResult {
    SocialGraph graph;
    /// old internal id -> new internal id; -1 for nodes outside the component.
    std::vector<std::int64_t> old_to_new;
};

/// Induced subgraph on the largest connected component. Ties between equally
/// sized components go to the one containing the smallest original id.
/// External ids carry over from the input graph.
inline LccResult largest_connected_component(const SocialGraph& g) {
    const std::size_t n = g.node_count();
    if (n == 0) throw ValidationError("largest_connected_component: empty graph");

    std::vector<std::int32_t> component(n, -1);
    std::vector<std::size_t> comp_size;
    std::vector<ExternalId> comp_min_ext;
    std::vector<NodeId> queue;
    for (NodeId s = 0; s < n; ++s) {
        if (component[s] >= 0) continue;
        const auto c = static_cast<std::int32_t>(comp_size.size());
        comp_size.push_back(0);
        comp_min_ext.push_back(g.external_id(s));
        queue.assign(1, s);
        component[s] = c;
        while (!queue.empty()) {
            NodeId u = queue.back();
            queue.pop_back();
            ++comp_size[static_cast<std::size_t>(c)];
            comp_min_ext[static_cast<std::size_t>(c)] =
                std::min(comp_min_ext[static_cast<std::size_t>(c)], g.external_id(u));
            for (NodeId v : g.neighbors(u)) {
                if (component[v] < 0) {
                    component[v] = c;
                    queue.push_back(v);
                }
            }
        }
    }

    std::int32_t best = 0;
    for (std::int32_t c = 1; c < static_cast<std::int32_t>(comp_size.size()); ++c) {
        const auto cu = static_cast<std::size_t>(c), bu = static_cast<std::size_t>(best);
        if (comp_size[cu] > comp_size[bu] ||
            (comp_size[cu] == comp_size[bu] && comp_min_ext[cu] < comp_min_ext[bu])) {
            best = c;
        }
    }

    LccResult res;
    res.old_to_new.assign(n, -1);
    std::vector<ExternalId> external_ids;
    external_ids.reserve(comp_size[static_cast<std::size_t>(best)]);
    for (NodeId u = 0; u < n; ++u) {
        if (component[u] == best) {
            res.old_to_new[u] = static_cast<std::int64_t>(external_ids.size());
            external_ids.push_back(g.external_id(u));
        }
    }
    std::vector<EdgeKey> edges;
    for (NodeId u = 0; u < n; ++u) {
        if (component[u] != best) continue;
        for (NodeId v : g.neighbors(u)) {
            if (u < v && component[v] == best) {
                edges.emplace_back(static_cast<NodeId>(res.old_to_new[u]),
                                   static_cast<NodeId>(res.old_to_new[v]));
            }
        }
    }
    res.graph = SocialGraph::from_edges(external_ids.size(), std::move(edges), std::move(external_ids));
    return res;
}

}  // namespace projgraph
