#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "projgraph/errors.hpp"
#include "projgraph/mapping.hpp"
#include "projgraph/social_graph.hpp"

namespace projgraph {

struct WeightedNeighbor {
    PeerId peer;
    std::uint64_t weight;
};

/// Weighted peer graph induced by a user->peer mapping. An edge (P_i, P_j)
/// carries the number of SG edges crossing the pair; SG edges internal to a
/// peer are tallied in intra_edges instead, so
/// Σ weights + Σ intra_edges = |E_S| holds exactly.
class ProjectionGraph {
public:
    ProjectionGraph() = default;

    std::size_t peer_count() const { return peer_sizes_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    std::span<const WeightedNeighbor> neighbors(PeerId p) const {
        return {wadj_.data() + offsets_[p], wadj_.data() + offsets_[p + 1]};
    }

    std::size_t degree(PeerId p) const {
        if (p >= peer_count()) throw ValidationError("unknown peer id " + std::to_string(p));
        return offsets_[p + 1] - offsets_[p];
    }

    /// Multiplicity |Θ_ij|; 0 when no SG edge crosses the pair (and for i=j).
    std::uint64_t weight(PeerId p, PeerId q) const {
        auto nb = neighbors(p);
        auto it = std::lower_bound(nb.begin(), nb.end(), q,
                                   [](const WeightedNeighbor& w, PeerId id) { return w.peer < id; });
        return (it != nb.end() && it->peer == q) ? it->weight : 0;
    }

    std::uint64_t intra_edges(PeerId p) const { return intra_edges_[p]; }
    const std::vector<std::uint64_t>& intra_edge_counts() const { return intra_edges_; }
    std::uint32_t peer_size(PeerId p) const { return peer_sizes_[p]; }
    const std::vector<std::uint32_t>& peer_sizes() const { return peer_sizes_; }

    std::uint64_t total_edge_weight() const { return total_weight_; }
    std::uint64_t total_intra_edges() const { return total_intra_; }

    /// PG edges as ((min, max), weight), sorted by key.
    std::vector<std::pair<EdgeKey, std::uint64_t>> edges() const {
        std::vector<std::pair<EdgeKey, std::uint64_t>> out;
        out.reserve(edge_count_);
        for (PeerId p = 0; p < peer_count(); ++p) {
            for (const WeightedNeighbor& w : neighbors(p)) {
                if (p < w.peer) out.push_back({EdgeKey(p, w.peer), w.weight});
            }
        }
        return out;
    }

    friend ProjectionGraph build_projection(const SocialGraph& g, const Mapping& m);

private:
    std::vector<std::size_t> offsets_;
    std::vector<WeightedNeighbor> wadj_;
    std::vector<std::uint64_t> intra_edges_;
    std::vector<std::uint32_t> peer_sizes_;
    std::size_t edge_count_ = 0;
    std::uint64_t total_weight_ = 0;
    std::uint64_t total_intra_ = 0;
};

inline ProjectionGraph build_projection(const SocialGraph& g, const Mapping& m) {
    m.validate(g.node_count());
    ProjectionGraph pg;
    const std::uint32_t p_count = m.peer_count;
    pg.intra_edges_.assign(p_count, 0);
    auto sizes = m.sizes();
    pg.peer_sizes_.assign(sizes.begin(), sizes.end());

    std::vector<EdgeKey> cross;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const PeerId pu = m.peer_of[u];
        for (NodeId v : g.neighbors(u)) {
            if (u >= v) continue;
            const PeerId pv = m.peer_of[v];
            if (pu == pv) {
                ++pg.intra_edges_[pu];
                ++pg.total_intra_;
            } else {
                cross.emplace_back(pu, pv);
            }
        }
    }
    std::sort(cross.begin(), cross.end());

    pg.offsets_.assign(p_count + 1, 0);
    std::vector<std::pair<EdgeKey, std::uint64_t>> weighted;
    for (std::size_t i = 0; i < cross.size();) {
        std::size_t j = i;
        while (j < cross.size() && cross[j] == cross[i]) ++j;
        weighted.push_back({cross[i], j - i});
        ++pg.offsets_[cross[i].a + 1];
        ++pg.offsets_[cross[i].b + 1];
        pg.total_weight_ += j - i;
        i = j;
    }
    pg.edge_count_ = weighted.size();
    for (std::size_t p = 1; p <= p_count; ++p) pg.offsets_[p] += pg.offsets_[p - 1];
    pg.wadj_.resize(pg.offsets_[p_count]);
    std::vector<std::size_t> cursor(pg.offsets_.begin(), pg.offsets_.end() - 1);
    for (const auto& [key, w] : weighted) {
        pg.wadj_[cursor[key.a]++] = {key.b, w};
        pg.wadj_[cursor[key.b]++] = {key.a, w};
    }
    for (PeerId p = 0; p < p_count; ++p) {
        std::sort(pg.wadj_.begin() + static_cast<std::ptrdiff_t>(pg.offsets_[p]),
                  pg.wadj_.begin() + static_cast<std::ptrdiff_t>(pg.offsets_[p + 1]),
                  [](const WeightedNeighbor& x, const WeightedNeighbor& y) { return x.peer < y.peer; });
    }
    return pg;
}

struct EdgeBalance {
    double avg_intra_per_peer = 0.0;
    double avg_inter_per_edge = 0.0;
    bool no_pg_edges = false;  // set when |E_P| = 0; inter average reported as 0
};

/// Average SG edges found within a peer vs. carried per PG edge.
inline EdgeBalance edge_balance_report(const ProjectionGraph& pg) {
    if (pg.peer_count() == 0) throw ValidationError("edge_balance_report: empty projection graph");
    EdgeBalance b;
    b.avg_intra_per_peer =
        static_cast<double>(pg.total_intra_edges()) / static_cast<double>(pg.peer_count());
    if (pg.edge_count() == 0) {
        b.no_pg_edges = true;
    } else {
        b.avg_inter_per_edge =
            static_cast<double>(pg.total_edge_weight()) / static_cast<double>(pg.edge_count());
    }
    return b;
}

}  // namespace projgraph
