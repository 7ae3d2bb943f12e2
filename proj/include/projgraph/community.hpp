#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <unordered_map>
#include <vector>

#include "projgraph/detail/rng.hpp"
#include "projgraph/errors.hpp"
#include "projgraph/mapping.hpp"
#include "projgraph/social_graph.hpp"

namespace projgraph {

/// Newman modularity Q of a partition, in [-1, 1].
/// Q = (1/2m) Σ_ij [A_ij - k_i k_j / 2m] δ(c_i, c_j).
inline double modularity(const SocialGraph& g, const Mapping& m) {
    m.validate(g.node_count());
    const double two_m = 2.0 * static_cast<double>(g.edge_count());
    if (g.edge_count() == 0) throw ValidationError("modularity: graph has no edges");

    std::vector<double> intra(m.peer_count, 0.0);       // edges inside each community
    std::vector<double> degree_sum(m.peer_count, 0.0);  // Σ k_i per community
    for (NodeId u = 0; u < g.node_count(); ++u) {
        degree_sum[m.peer_of[u]] += static_cast<double>(g.degree(u));
        for (NodeId v : g.neighbors(u)) {
            if (u < v && m.peer_of[u] == m.peer_of[v]) intra[m.peer_of[u]] += 1.0;
        }
    }
    double q = 0.0;
    for (PeerId c = 0; c < m.peer_count; ++c) {
        q += 2.0 * intra[c] / two_m - (degree_sum[c] / two_m) * (degree_sum[c] / two_m);
    }
    return q;
}

namespace detail {

constexpr double kLouvainGainTol = 1e-9;

/// Weighted multigraph used between Louvain aggregation phases.
/// `self_weight[u]` holds twice the edge weight folded inside supernode u,
/// so weighted_degree = Σ_v w(u,v) + self_weight and Σ degrees = 2m.
struct LouvainGraph {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> self_weight;
    std::vector<double> weighted_degree;
    double two_m = 0.0;

    std::size_t size() const { return adj.size(); }

    static LouvainGraph from_social(const SocialGraph& g) {
        LouvainGraph lg;
        lg.adj.resize(g.node_count());
        lg.self_weight.assign(g.node_count(), 0.0);
        lg.weighted_degree.resize(g.node_count());
        for (NodeId u = 0; u < g.node_count(); ++u) {
            auto nb = g.neighbors(u);
            lg.adj[u].reserve(nb.size());
            for (NodeId v : nb) lg.adj[u].emplace_back(v, 1.0);
            lg.weighted_degree[u] = static_cast<double>(nb.size());
            lg.two_m += lg.weighted_degree[u];
        }
        return lg;
    }
};

/// One local-moving phase. Nodes are visited in a seeded shuffled order,
/// repeatedly, until a full pass makes no move with gain above tolerance.
/// Returns true if any node changed community.
inline bool louvain_one_level(const LouvainGraph& g, Rng& rng, std::vector<std::uint32_t>& comm) {
    const std::size_t n = g.size();
    comm.resize(n);
    std::vector<double> comm_total(n);  // Σ_tot: total weighted degree per community
    for (std::size_t u = 0; u < n; ++u) {
        comm[u] = static_cast<std::uint32_t>(u);
        comm_total[u] = g.weighted_degree[u];
    }
    if (g.two_m <= 0.0) return false;

    std::vector<std::uint32_t> order(n);
    for (std::size_t u = 0; u < n; ++u) order[u] = static_cast<std::uint32_t>(u);

    std::unordered_map<std::uint32_t, double> link_weight;  // community -> weight from u
    bool any_move = false;
    bool moved = true;
    while (moved) {
        moved = false;
        rng.shuffle(order);
        for (std::uint32_t u : order) {
            const std::uint32_t old_comm = comm[u];
            link_weight.clear();
            link_weight[old_comm] += 0.0;  // candidate even with no internal link
            for (const auto& [v, w] : g.adj[u]) {
                if (v != u) link_weight[comm[v]] += w;
            }
            const double k_u = g.weighted_degree[u];
            comm_total[old_comm] -= k_u;

            // gain of joining community c, up to a constant shared by all
            // candidates: k_{u,c} - Σ_tot(c) * k_u / 2m
            const double old_gain = link_weight[old_comm] - comm_total[old_comm] * k_u / g.two_m;
            double best_gain = old_gain;
            std::uint32_t best_comm = old_comm;
            for (const auto& [c, w] : link_weight) {
                if (c == old_comm) continue;
                const double gain = w - comm_total[c] * k_u / g.two_m;
                if (gain < old_gain + kLouvainGainTol) continue;  // move only on strict gain
                if (best_comm == old_comm || gain > best_gain + kLouvainGainTol ||
                    (gain > best_gain - kLouvainGainTol && c < best_comm)) {
                    best_gain = gain;
                    best_comm = c;
                }
            }
            comm_total[best_comm] += k_u;
            if (best_comm != old_comm) {
                comm[u] = best_comm;
                moved = true;
                any_move = true;
            }
        }
    }
    return any_move;
}

/// Collapses communities into supernodes, accumulating parallel edge weights
/// and folding intra-community weight into self loops.
inline LouvainGraph louvain_aggregate(const LouvainGraph& g, const std::vector<std::uint32_t>& comm,
                                      std::uint32_t comm_count) {
    LouvainGraph out;
    out.adj.resize(comm_count);
    out.self_weight.assign(comm_count, 0.0);
    out.weighted_degree.assign(comm_count, 0.0);
    out.two_m = g.two_m;

    std::vector<std::map<std::uint32_t, double>> acc(comm_count);
    for (std::size_t u = 0; u < g.size(); ++u) {
        const std::uint32_t cu = comm[u];
        out.self_weight[cu] += g.self_weight[u];
        for (const auto& [v, w] : g.adj[u]) {
            const std::uint32_t cv = comm[v];
            if (cu == cv) {
                out.self_weight[cu] += w;  // both directions land here: counts twice
            } else {
                acc[cu][cv] += w;
            }
        }
    }
    for (std::uint32_t c = 0; c < comm_count; ++c) {
        out.adj[c].assign(acc[c].begin(), acc[c].end());
        double k = out.self_weight[c];
        for (const auto& [v, w] : out.adj[c]) k += w;
        out.weighted_degree[c] = k;
    }
    return out;
}

}  // namespace detail

/// Louvain community detection: local moving and aggregation phases repeat
/// until a phase makes no move. Node visit order is a seeded shuffle per
/// pass; gain tolerance 1e-9. If `phase_q` is given, the modularity of the
/// flattened partition is recorded after every phase.
inline Mapping louvain(const SocialGraph& g, std::uint64_t seed,
                       std::vector<double>* phase_q = nullptr) {
    const std::size_t n = g.node_count();
    if (n == 0) return Mapping{};
    detail::Rng rng(detail::derive_seed(seed, 0x6c6f7576 /* "louv" */));

    std::vector<std::uint32_t> node_to_comm(n);  // user -> community in original graph
    for (std::size_t u = 0; u < n; ++u) node_to_comm[u] = static_cast<std::uint32_t>(u);

    detail::LouvainGraph work = detail::LouvainGraph::from_social(g);
    while (true) {
        std::vector<std::uint32_t> local;
        const bool moved = detail::louvain_one_level(work, rng, local);

        // densify local labels in first-occurrence order
        std::unordered_map<std::uint32_t, std::uint32_t> dense;
        dense.reserve(local.size());
        for (std::uint32_t& c : local) {
            c = dense.emplace(c, static_cast<std::uint32_t>(dense.size())).first->second;
        }
        for (std::uint32_t& c : node_to_comm) c = local[c];

        if (phase_q && g.edge_count() > 0) {
            phase_q->push_back(modularity(g, Mapping::from_labels(node_to_comm)));
        }
        if (!moved || dense.size() == work.size()) break;
        work = detail::louvain_aggregate(work, local, static_cast<std::uint32_t>(dense.size()));
    }
    return Mapping::from_labels(node_to_comm);
}

namespace detail {

inline SocialGraph induce_subgraph(const SocialGraph& g, const std::vector<NodeId>& members) {
    std::unordered_map<NodeId, NodeId> to_local;
    to_local.reserve(members.size());
    for (NodeId i = 0; i < members.size(); ++i) to_local.emplace(members[i], i);
    std::vector<EdgeKey> edges;
    for (NodeId i = 0; i < members.size(); ++i) {
        for (NodeId v : g.neighbors(members[i])) {
            auto it = to_local.find(v);
            if (it != to_local.end() && members[i] < v) edges.emplace_back(i, it->second);
        }
    }
    std::vector<ExternalId> ext(members.size());
    for (NodeId i = 0; i < members.size(); ++i) ext[i] = members[i];  // parent-local ids
    return SocialGraph::from_edges(members.size(), std::move(edges), std::move(ext));
}

}  // namespace detail

/// Louvain followed by recursive re-partitioning of every community larger
/// than `max_size`, each treated as an induced subgraph. Recursion stops for
/// a community once Louvain returns it unsplit, so some communities may stay
/// above the cap.
inline Mapping recursive_louvain(const SocialGraph& g, std::uint32_t max_size, std::uint64_t seed) {
    if (max_size < 2) throw ValidationError("recursive_louvain: max_size must be >= 2");
    const std::size_t n = g.node_count();

    std::vector<std::uint32_t> label(n);
    std::uint32_t next_label = 0;
    std::uint64_t sub_run = 0;

    struct Item {
        std::vector<NodeId> members;
    };
    std::vector<Item> work;

    {
        Mapping top = louvain(g, seed);
        auto groups = top.members();
        for (auto& members : groups) {
            if (members.size() > max_size) {
                work.push_back({std::move(members)});
            } else {
                for (NodeId u : members) label[u] = next_label;
                ++next_label;
            }
        }
    }

    while (!work.empty()) {
        Item item = std::move(work.back());
        work.pop_back();
        SocialGraph sub = detail::induce_subgraph(g, item.members);
        Mapping part = louvain(sub, detail::derive_seed(seed, ++sub_run));
        if (part.peer_count <= 1) {
            // unsplittable core: tolerate the oversized community
            for (NodeId u : item.members) label[u] = next_label;
            ++next_label;
            continue;
        }
        auto groups = part.members();
        for (auto& local_members : groups) {
            std::vector<NodeId> members;
            members.reserve(local_members.size());
            for (NodeId lu : local_members) members.push_back(item.members[lu]);
            if (members.size() > max_size) {
                work.push_back({std::move(members)});
            } else {
                for (NodeId u : members) label[u] = next_label;
                ++next_label;
            }
        }
    }
    return Mapping::from_labels(label);
}

struct MergeResult {
    Mapping mapping;
    /// Set when no further socially-connected merge was possible before the
    /// target count was reached.
    bool target_unreachable = false;
};

/// Incrementally merges the globally smallest community into its smallest
/// socially-connected neighbor community until community_count <=
/// ceil(|V|/target_avg). Ties: smallest community id first; among equally
/// small neighbors, the one sharing the most SG edges, then smallest id.
inline MergeResult merge_to_target(const SocialGraph& g, const Mapping& m, std::uint32_t target_avg,
                                   std::uint64_t /*seed: reserved, merging is deterministic*/) {
    m.validate(g.node_count());
    if (target_avg == 0) throw ValidationError("merge_to_target: target_avg must be positive");
    const double current_mean = static_cast<double>(g.node_count()) / m.peer_count;
    if (static_cast<double>(target_avg) < current_mean) {
        throw ValidationError("merge_to_target: target below current mean community size");
    }
    const std::uint32_t target_count = static_cast<std::uint32_t>(
        (g.node_count() + target_avg - 1) / target_avg);

    MergeResult res;
    if (m.peer_count <= target_count) {
        res.mapping = m;
        return res;
    }

    // surviving community id per user; merged communities keep the smaller id
    std::vector<std::uint32_t> owner(m.peer_count);
    for (std::uint32_t c = 0; c < m.peer_count; ++c) owner[c] = c;
    auto sizes = m.sizes();
    std::vector<std::map<std::uint32_t, std::uint64_t>> shared(m.peer_count);  // c -> edge count
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (NodeId v : g.neighbors(u)) {
            if (u < v && m.peer_of[u] != m.peer_of[v]) {
                ++shared[m.peer_of[u]][m.peer_of[v]];
                ++shared[m.peer_of[v]][m.peer_of[u]];
            }
        }
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> by_size;  // (size, id), alive only
    for (std::uint32_t c = 0; c < m.peer_count; ++c) by_size.insert({sizes[c], c});

    std::uint32_t alive = m.peer_count;
    while (alive > target_count) {
        // smallest community that still has a neighbor to merge with
        std::uint32_t a = 0;
        bool found = false;
        for (const auto& [sz, c] : by_size) {
            if (!shared[c].empty()) {
                a = c;
                found = true;
                break;
            }
        }
        if (!found) {
            res.target_unreachable = true;
            break;
        }
        std::uint32_t b = 0;
        std::uint32_t best_size = 0;
        std::uint64_t best_shared = 0;
        bool have = false;
        for (const auto& [c, w] : shared[a]) {
            if (!have || sizes[c] < best_size || (sizes[c] == best_size && w > best_shared) ||
                (sizes[c] == best_size && w == best_shared && c < b)) {
                b = c;
                best_size = sizes[c];
                best_shared = w;
                have = true;
            }
        }
        // merge the pair; keep the smaller id
        const std::uint32_t keep = std::min(a, b);
        const std::uint32_t gone = std::max(a, b);
        by_size.erase({sizes[keep], keep});
        by_size.erase({sizes[gone], gone});
        sizes[keep] += sizes[gone];
        by_size.insert({sizes[keep], keep});
        owner[gone] = keep;

        shared[keep].erase(gone);
        shared[gone].erase(keep);
        for (const auto& [c, w] : shared[gone]) {
            shared[c].erase(gone);
            shared[c][keep] += w;
            shared[keep][c] += w;
        }
        shared[gone].clear();
        --alive;
    }

    auto resolve = [&](std::uint32_t c) {
        while (owner[c] != c) c = owner[c];
        return c;
    };
    // path-compress and relabel by ascending surviving id
    std::vector<std::uint32_t> survivors;
    for (std::uint32_t c = 0; c < m.peer_count; ++c) {
        if (resolve(c) == c) survivors.push_back(c);
    }
    std::vector<std::uint32_t> rank(m.peer_count, 0);
    for (std::uint32_t i = 0; i < survivors.size(); ++i) rank[survivors[i]] = i;

    res.mapping.peer_of.resize(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
        res.mapping.peer_of[u] = rank[resolve(m.peer_of[u])];
    }
    res.mapping.peer_count = static_cast<PeerId>(survivors.size());
    return res;
}

/// Group membership data for Jaccard-based single-group assignment.
/// Users and groups use dense indices; `group_members` lists are sorted.
struct GroupData {
    std::vector<std::vector<std::uint32_t>> user_groups;    // user -> group ids
    std::vector<std::vector<NodeId>> group_members;         // group -> users, sorted
    std::vector<std::uint64_t> group_external_ids;          // dense group id -> input id
};

/// Assigns every user to the single group maximizing the Jaccard similarity
/// J(F, G) = |F ∩ G| / |F ∪ G| between the user's 1-hop neighborhood F and
/// the group member set G, over the user's declared groups. Ties go to the
/// smaller group id. Groups left empty are dropped and peer ids re-densified.
inline Mapping jaccard_assign(const SocialGraph& g, const GroupData& groups) {
    const std::size_t n = g.node_count();
    if (groups.user_groups.size() != n) {
        throw ValidationError("jaccard_assign: membership table does not cover all users");
    }
    std::vector<std::uint32_t> chosen(n);
    for (NodeId u = 0; u < n; ++u) {
        const auto& candidates = groups.user_groups[u];
        if (candidates.empty()) {
            throw ValidationError("jaccard_assign: user " + std::to_string(g.external_id(u)) +
                                  " belongs to no group");
        }
        const auto friends = g.neighbors(u);
        double best = -1.0;
        std::uint32_t best_group = 0;
        for (std::uint32_t gid : candidates) {
            const auto& members = groups.group_members[gid];
            std::size_t inter = 0;
            auto fi = friends.begin();
            auto mi = members.begin();
            while (fi != friends.end() && mi != members.end()) {
                if (*fi < *mi) {
                    ++fi;
                } else if (*mi < *fi) {
                    ++mi;
                } else {
                    ++inter;
                    ++fi;
                    ++mi;
                }
            }
            const std::size_t uni = friends.size() + members.size() - inter;
            const double j = uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
            if (j > best || (j == best && gid < best_group)) {
                best = j;
                best_group = gid;
            }
        }
        chosen[u] = best_group;
    }
    // densify by ascending surviving group id so smaller groups keep smaller peers
    std::vector<std::uint32_t> present(chosen);
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    std::unordered_map<std::uint32_t, PeerId> rank;
    rank.reserve(present.size());
    for (PeerId i = 0; i < present.size(); ++i) rank.emplace(present[i], i);

    Mapping m;
    m.peer_of.resize(n);
    for (NodeId u = 0; u < n; ++u) m.peer_of[u] = rank[chosen[u]];
    m.peer_count = static_cast<PeerId>(present.size());
    return m;
}

}  // namespace projgraph
