#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "projgraph/centrality.hpp"
#include "projgraph/detail/rng.hpp"
#include "projgraph/errors.hpp"
#include "projgraph/mapping.hpp"
#include "projgraph/projection.hpp"
#include "projgraph/social_graph.hpp"

namespace projgraph {

enum class TechniqueKind { peer_degree, peer_betweenness, pg_edge_betweenness, random_pick };
enum class WorkloadKind { person_finder, team_builder };
enum class Layer { sg, pg };

inline const char* to_string(TechniqueKind t) {
    switch (t) {
        case TechniqueKind::peer_degree: return "peer_degree";
        case TechniqueKind::peer_betweenness: return "peer_betweenness";
        case TechniqueKind::pg_edge_betweenness: return "pg_edge_betweenness";
        case TechniqueKind::random_pick: return "random";
    }
    return "?";
}
inline const char* to_string(WorkloadKind w) {
    return w == WorkloadKind::person_finder ? "person_finder" : "team_builder";
}
inline const char* to_string(Layer l) { return l == Layer::sg ? "sg" : "pg"; }

/// Forwarding technique: rank candidates by a peer-level score (or uniformly
/// at random) and fan out to the top N% of them. The random technique selects
/// exactly as many targets as the peer-degree technique would, via a seeded
/// permutation whose prefixes are nested across N.
struct Technique {
    TechniqueKind kind = TechniqueKind::peer_degree;
    int n_percent = 20;

    void validate() const {
        if (n_percent <= 0 || n_percent > 100) {
            throw ValidationError("technique: n_percent must be in (0, 100]");
        }
    }
};

/// person_finder: reach one specific user. team_builder: reach any
/// `team_size` users drawn from at least ceil(sqrt(team_size)) communities.
struct Workload {
    WorkloadKind kind = WorkloadKind::person_finder;
    std::uint32_t team_size = 1;

    std::uint32_t required_communities() const {
        return static_cast<std::uint32_t>(
            std::ceil(std::sqrt(static_cast<double>(team_size))));
    }
    void validate() const {
        if (kind == WorkloadKind::team_builder && team_size < 1) {
            throw ValidationError("workload: team size must be >= 1");
        }
    }
};

/// Peer-level centrality inputs the techniques rank by.
struct PeerScores {
    CentralityVector peer_degree;          // raw peer degree
    CentralityVector peer_betweenness;     // raw weighted peer betweenness
    CentralityVector pg_edge_betweenness;  // raw weighted PG edge betweenness
};

inline PeerScores compute_peer_scores(const ProjectionGraph& pg, DistanceMode mode,
                                      int threads = 1) {
    PeerScores s;
    s.peer_degree = degree_centrality(pg, false);
    auto both = node_and_edge_betweenness(pg, mode, false, threads);
    s.peer_betweenness = std::move(both.first);
    s.pg_edge_betweenness = std::move(both.second);
    return s;
}

/// Per-peer active overlay connections E_A^{P_i} plus their union E_A.
struct ActiveConnectionSet {
    std::vector<std::vector<PeerId>> per_peer;  // ranked-prefix selection, sorted ids
    std::vector<std::vector<PeerId>> joint;     // adjacency of the union graph
    std::size_t union_edge_count = 0;
};

namespace detail {

/// Top-k selection count shared by overlay links and query fan-out.
inline std::size_t top_n_count(std::size_t candidates, int n_percent) {
    if (candidates == 0) return 0;
    const std::size_t k =
        (candidates * static_cast<std::size_t>(n_percent) + 99) / 100;  // ceil
    return std::max<std::size_t>(1, k);
}

inline void validate_scores(const PeerScores& scores, TechniqueKind kind, std::size_t peer_count) {
    switch (kind) {
        case TechniqueKind::random_pick:
            return;  // fan-out count mirrors peer_degree but needs no scores
        case TechniqueKind::peer_degree:
            if (scores.peer_degree.scores.size() != peer_count) {
                throw ValidationError("missing peer degree vector for technique");
            }
            return;
        case TechniqueKind::peer_betweenness:
            if (scores.peer_betweenness.scores.size() != peer_count) {
                throw ValidationError("missing peer betweenness vector for technique");
            }
            return;
        case TechniqueKind::pg_edge_betweenness:
            if (scores.pg_edge_betweenness.scope != Scope::pg_edge) {
                throw ValidationError("missing PG edge betweenness vector for technique");
            }
            return;
    }
}

/// Ranks candidate neighbor peers for one holder: score-descending with
/// ascending-id tie break, or a seeded permutation for the random technique.
inline void rank_candidates(std::vector<PeerId>& cands, TechniqueKind kind,
                            const PeerScores& scores, PeerId holder, std::uint64_t rng_seed) {
    switch (kind) {
        case TechniqueKind::random_pick: {
            std::sort(cands.begin(), cands.end());
            Rng rng(rng_seed);
            rng.shuffle(cands);
            return;
        }
        case TechniqueKind::peer_degree:
        case TechniqueKind::peer_betweenness: {
            const auto& sc = kind == TechniqueKind::peer_degree ? scores.peer_degree.scores
                                                                : scores.peer_betweenness.scores;
            std::sort(cands.begin(), cands.end(), [&](PeerId x, PeerId y) {
                if (sc[x] != sc[y]) return sc[x] > sc[y];
                return x < y;
            });
            return;
        }
        case TechniqueKind::pg_edge_betweenness: {
            const auto& cv = scores.pg_edge_betweenness;
            auto score_of = [&](PeerId p) {
                // co-located candidates have no PG edge to cross; they rank first
                if (p == holder) return std::numeric_limits<double>::infinity();
                return cv.edge_score(EdgeKey(holder, p));
            };
            std::sort(cands.begin(), cands.end(), [&](PeerId x, PeerId y) {
                const double sx = score_of(x), sy = score_of(y);
                if (sx != sy) return sx > sy;
                return x < y;
            });
            return;
        }
    }
}

}  // namespace detail

/// Each peer independently ranks its incident PG edges per the technique and
/// activates its top max(1, ceil(N% * degree)); E_A is the union of the
/// per-peer selections.
inline ActiveConnectionSet build_active_sets(const ProjectionGraph& pg, const PeerScores& scores,
                                             Technique t, std::uint64_t seed) {
    t.validate();
    detail::validate_scores(scores, t.kind, pg.peer_count());
    ActiveConnectionSet ea;
    const std::size_t n = pg.peer_count();
    ea.per_peer.resize(n);
    ea.joint.resize(n);

    std::vector<PeerId> cands;
    for (PeerId p = 0; p < n; ++p) {
        const auto nbrs = pg.neighbors(p);
        cands.clear();
        for (const auto& nb : nbrs) cands.push_back(nb.peer);
        detail::rank_candidates(cands, t.kind, scores, p, detail::derive_seed(seed, p));
        const std::size_t k = detail::top_n_count(cands.size(), t.n_percent);
        cands.resize(std::min(k, cands.size()));
        std::sort(cands.begin(), cands.end());
        ea.per_peer[p] = cands;
        for (PeerId q : cands) {
            ea.joint[p].push_back(q);
            ea.joint[q].push_back(p);
        }
    }
    for (PeerId p = 0; p < n; ++p) {
        auto& row = ea.joint[p];
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    for (PeerId p = 0; p < n; ++p) {
        for (PeerId q : ea.joint[p]) {
            if (p < q) ++ea.union_edge_count;
        }
    }
    return ea;
}

/// Per-query record. `hops` is the frontier depth at which the goal was
/// first satisfied; `peers_accessed` is the set of peers holding any visited
/// user (the source peer always counts).
struct SearchOutcome {
    std::uint64_t query_id = 0;
    bool success = false;
    std::uint32_t hops = 0;
    std::vector<PeerId> peers_accessed;  // sorted unique
    std::uint64_t messages = 0;
};

/// Synchronous frontier expansion over SG edges with a global visited-user
/// set. At each user the eligible next hops are its neighbors on the top-N%
/// of its distinct neighbor peers, ranked by the technique's peer-level
/// score (selection is independent of visited state, so frontiers are nested
/// across N for a fixed seed).
inline SearchOutcome run_query_sg(const SocialGraph& g, const Mapping& m,
                                  const ProjectionGraph& pg, const PeerScores& scores, Technique t,
                                  Workload w, NodeId source, std::optional<NodeId> dest,
                                  std::uint64_t seed) {
    t.validate();
    w.validate();
    m.validate(g.node_count());
    detail::validate_scores(scores, t.kind, pg.peer_count());
    if (source >= g.node_count()) throw ValidationError("run_query_sg: unknown source id");
    if (w.kind == WorkloadKind::person_finder) {
        if (!dest) throw ValidationError("run_query_sg: person_finder needs a destination");
        if (*dest >= g.node_count()) throw ValidationError("run_query_sg: unknown destination id");
        if (*dest == source) throw ValidationError("run_query_sg: source equals destination");
    } else if (dest) {
        throw ValidationError("run_query_sg: team_builder takes no destination");
    }

    const std::uint32_t required_peers = w.required_communities();
    std::vector<bool> visited(g.node_count(), false);
    std::vector<bool> peer_seen(m.peer_count, false);
    std::vector<PeerId> peers_accessed;
    auto touch_peer = [&](PeerId p) {
        if (!peer_seen[p]) {
            peer_seen[p] = true;
            peers_accessed.push_back(p);
        }
    };

    SearchOutcome out;
    visited[source] = true;
    touch_peer(m.peer_of[source]);
    std::vector<NodeId> frontier{source};
    std::uint64_t found_users = 0;           // visited users excluding the source
    std::vector<std::uint32_t> peer_users(m.peer_count, 0);  // non-source visited per peer
    std::uint32_t peers_with_users = 0;
    std::uint32_t depth = 0;

    std::vector<PeerId> cand_peers;
    std::vector<NodeId> next;
    while (!frontier.empty()) {
        next.clear();
        for (NodeId u : frontier) {
            const auto nbrs = g.neighbors(u);
            cand_peers.clear();
            for (NodeId v : nbrs) cand_peers.push_back(m.peer_of[v]);
            std::sort(cand_peers.begin(), cand_peers.end());
            cand_peers.erase(std::unique(cand_peers.begin(), cand_peers.end()), cand_peers.end());
            detail::rank_candidates(cand_peers, t.kind, scores, m.peer_of[u],
                                    detail::derive_seed(seed, u));
            const std::size_t k = detail::top_n_count(cand_peers.size(), t.n_percent);
            cand_peers.resize(std::min(k, cand_peers.size()));
            std::sort(cand_peers.begin(), cand_peers.end());
            for (NodeId v : nbrs) {
                if (visited[v]) continue;
                if (!std::binary_search(cand_peers.begin(), cand_peers.end(), m.peer_of[v])) {
                    continue;
                }
                ++out.messages;
                next.push_back(v);
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        if (next.empty()) break;
        ++depth;
        for (NodeId v : next) {
            visited[v] = true;
            touch_peer(m.peer_of[v]);
            ++found_users;
            if (peer_users[m.peer_of[v]]++ == 0) ++peers_with_users;
        }
        if (w.kind == WorkloadKind::person_finder) {
            if (visited[*dest]) {
                out.success = true;
                out.hops = depth;
                break;
            }
        } else {
            if (found_users >= w.team_size && peers_with_users >= required_peers) {
                out.success = true;
                out.hops = depth;
                break;
            }
        }
        frontier = next;
    }

    std::sort(peers_accessed.begin(), peers_accessed.end());
    out.peers_accessed = std::move(peers_accessed);
    return out;
}

/// Frontier expansion at the overlay layer over the active connections E_A,
/// with a global visited-peer set. Visiting a peer exposes all of its users;
/// the source user's own data is excluded from team counts.
inline SearchOutcome run_query_pg(const ProjectionGraph& pg, const Mapping& m,
                                  const ActiveConnectionSet& ea, Technique t, Workload w,
                                  NodeId source, std::optional<NodeId> dest,
                                  std::uint64_t /*seed: expansion over E_A is deterministic*/) {
    t.validate();
    w.validate();
    if (source >= m.peer_of.size()) throw ValidationError("run_query_pg: unknown source id");
    if (w.kind == WorkloadKind::person_finder) {
        if (!dest) throw ValidationError("run_query_pg: person_finder needs a destination");
        if (*dest >= m.peer_of.size()) throw ValidationError("run_query_pg: unknown destination id");
        if (*dest == source) throw ValidationError("run_query_pg: source equals destination");
    } else if (dest) {
        throw ValidationError("run_query_pg: team_builder takes no destination");
    }
    if (ea.joint.size() != pg.peer_count()) {
        throw ValidationError("run_query_pg: active set does not match the projection graph");
    }

    const PeerId source_peer = m.peer_of[source];
    const PeerId dest_peer = dest ? m.peer_of[*dest] : 0;
    const std::uint32_t required_peers = w.required_communities();

    SearchOutcome out;
    std::vector<bool> visited(pg.peer_count(), false);
    std::vector<PeerId> order;  // visited peers in discovery order
    std::uint64_t found_users = 0;
    std::uint32_t peers_with_users = 0;
    auto visit = [&](PeerId p) {
        visited[p] = true;
        order.push_back(p);
        std::uint64_t users = pg.peer_size(p);
        if (p == source_peer) --users;  // exclude the source user itself
        found_users += users;
        if (users > 0) ++peers_with_users;
    };
    auto goal_met = [&] {
        if (w.kind == WorkloadKind::person_finder) return visited[dest_peer];
        return found_users >= w.team_size && peers_with_users >= required_peers;
    };

    visit(source_peer);
    std::uint32_t depth = 0;
    std::vector<PeerId> frontier{source_peer};
    std::vector<PeerId> next;
    if (goal_met()) {
        out.success = true;
    } else {
        while (!frontier.empty()) {
            next.clear();
            for (PeerId p : frontier) {
                for (PeerId q : ea.joint[p]) {
                    if (visited[q]) continue;
                    ++out.messages;
                    next.push_back(q);
                }
            }
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            if (next.empty()) break;
            ++depth;
            for (PeerId q : next) visit(q);
            if (goal_met()) {
                out.success = true;
                out.hops = depth;
                break;
            }
            frontier = next;
        }
    }

    std::sort(order.begin(), order.end());
    out.peers_accessed = std::move(order);
    return out;
}

/// One row of the experiment outcome table (peers reduced to a count).
struct OutcomeRow {
    std::uint64_t query_id = 0;
    WorkloadKind workload = WorkloadKind::person_finder;
    TechniqueKind technique = TechniqueKind::peer_degree;
    Layer layer = Layer::sg;
    int n_percent = 0;
    bool success = false;
    std::uint32_t hops = 0;
    std::size_t peers_accessed = 0;
    double peer_fraction = 0.0;
    std::uint64_t messages = 0;
};

struct TechniqueSummary {
    WorkloadKind workload = WorkloadKind::person_finder;
    TechniqueKind technique = TechniqueKind::peer_degree;
    Layer layer = Layer::sg;
    int n_percent = 0;
    std::size_t queries = 0;
    double success_rate = 0.0;
    double hops_p50 = -1.0;  // over successful queries; -1 when none succeeded
    double hops_p90 = -1.0;
    double mean_peer_fraction = 0.0;
};

struct ExperimentConfig {
    Workload workload;
    std::vector<Technique> techniques;
    std::vector<Layer> layers{Layer::sg};
    double s_fraction = 0.1;   // queries as a fraction of |V_S|
    double d_fraction = 0.01;  // team size as a fraction of |V_S|
    DistanceMode distance = DistanceMode::inverse_weight;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct ExperimentResult {
    std::vector<OutcomeRow> rows;
    std::vector<TechniqueSummary> summaries;
    std::vector<NodeId> sources;              // shared endpoint sample
    std::vector<NodeId> destinations;         // person_finder only
    std::uint32_t team_size = 0;
};

namespace detail {

inline double nearest_rank(std::vector<std::uint32_t>& values, double q) {
    if (values.empty()) return -1.0;
    std::sort(values.begin(), values.end());
    const std::size_t idx = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(values.size())));
    return static_cast<double>(values[std::max<std::size_t>(1, idx) - 1]);
}

}  // namespace detail

/// Runs every technique (and layer) over one shared endpoint sample drawn
/// from the largest connected component: sources without replacement, and
/// for person_finder a distinct destination per query, also without
/// replacement. Per-query seeds derive from (experiment seed, query index)
/// so techniques are comparable pointwise.
inline ExperimentResult run_experiment(const SocialGraph& g, const Mapping& m,
                                       const ExperimentConfig& cfg) {
    m.validate(g.node_count());
    cfg.workload.validate();
    if (cfg.techniques.empty()) throw ValidationError("run_experiment: no techniques");
    if (cfg.s_fraction <= 0.0 || cfg.s_fraction > 1.0) {
        throw ValidationError("run_experiment: s_fraction must be in (0, 1]");
    }

    const std::size_t n = g.node_count();
    const std::size_t query_count = static_cast<std::size_t>(cfg.s_fraction * static_cast<double>(n));
    if (query_count == 0) throw ValidationError("run_experiment: s_fraction yields zero queries");

    // endpoints live in the LCC so full flooding can always reach them
    std::vector<NodeId> lcc_nodes;
    {
        LccResult lcc = largest_connected_component(g);
        for (NodeId u = 0; u < n; ++u) {
            if (lcc.old_to_new[u] >= 0) lcc_nodes.push_back(u);
        }
    }
    const bool person = cfg.workload.kind == WorkloadKind::person_finder;
    const std::size_t draw = person ? 2 * query_count : query_count;
    if (draw > lcc_nodes.size()) {
        throw InfeasibleError("run_experiment: sample of " + std::to_string(draw) +
                              " distinct endpoints exceeds LCC size " +
                              std::to_string(lcc_nodes.size()));
    }

    ExperimentResult res;
    res.team_size = std::max<std::uint32_t>(
        1, static_cast<std::uint32_t>(cfg.d_fraction * static_cast<double>(n)));
    Workload workload = cfg.workload;
    if (workload.kind == WorkloadKind::team_builder) workload.team_size = res.team_size;

    {
        // partial Fisher-Yates over the LCC node list
        detail::Rng rng(detail::derive_seed(cfg.seed, 0x73616d70 /* "samp" */));
        for (std::size_t i = 0; i < draw; ++i) {
            const std::size_t j = i + rng.bounded(lcc_nodes.size() - i);
            std::swap(lcc_nodes[i], lcc_nodes[j]);
        }
        for (std::size_t q = 0; q < query_count; ++q) {
            res.sources.push_back(person ? lcc_nodes[2 * q] : lcc_nodes[q]);
            if (person) res.destinations.push_back(lcc_nodes[2 * q + 1]);
        }
    }

    const ProjectionGraph pg = build_projection(g, m);
    const PeerScores scores = compute_peer_scores(pg, cfg.distance, cfg.threads);

    for (Layer layer : cfg.layers) {
        for (const Technique& t : cfg.techniques) {
            t.validate();
            ActiveConnectionSet ea;
            if (layer == Layer::pg) {
                ea = build_active_sets(pg, scores, t, detail::derive_seed(cfg.seed, 0xea));
            }
            std::vector<OutcomeRow> rows(query_count);
            auto run_one = [&](std::size_t q) {
                const std::uint64_t query_seed = detail::derive_seed(cfg.seed, q);
                std::optional<NodeId> dest;
                if (person) dest = res.destinations[q];
                SearchOutcome so =
                    layer == Layer::sg
                        ? run_query_sg(g, m, pg, scores, t, workload, res.sources[q], dest,
                                       query_seed)
                        : run_query_pg(pg, m, ea, t, workload, res.sources[q], dest, query_seed);
                OutcomeRow row;
                row.query_id = q;
                row.workload = workload.kind;
                row.technique = t.kind;
                row.layer = layer;
                row.n_percent = t.n_percent;
                row.success = so.success;
                row.hops = so.hops;
                row.peers_accessed = so.peers_accessed.size();
                row.peer_fraction =
                    static_cast<double>(so.peers_accessed.size()) / static_cast<double>(pg.peer_count());
                row.messages = so.messages;
                rows[q] = row;
            };
            const int workers = std::max(1, cfg.threads);
            if (workers == 1) {
                for (std::size_t q = 0; q < query_count; ++q) run_one(q);
            } else {
                std::vector<std::thread> pool;
                pool.reserve(static_cast<std::size_t>(workers));
                for (int w = 0; w < workers; ++w) {
                    pool.emplace_back([&, w] {
                        for (std::size_t q = static_cast<std::size_t>(w); q < query_count;
                             q += static_cast<std::size_t>(workers)) {
                            run_one(q);
                        }
                    });
                }
                for (auto& th : pool) th.join();
            }

            TechniqueSummary sum;
            sum.workload = workload.kind;
            sum.technique = t.kind;
            sum.layer = layer;
            sum.n_percent = t.n_percent;
            sum.queries = query_count;
            std::vector<std::uint32_t> ok_hops;
            double fraction_total = 0.0;
            std::size_t successes = 0;
            for (const OutcomeRow& row : rows) {
                if (row.success) {
                    ++successes;
                    ok_hops.push_back(row.hops);
                }
                fraction_total += row.peer_fraction;
            }
            sum.success_rate = static_cast<double>(successes) / static_cast<double>(query_count);
            sum.hops_p50 = detail::nearest_rank(ok_hops, 0.5);
            sum.hops_p90 = detail::nearest_rank(ok_hops, 0.9);
            sum.mean_peer_fraction = fraction_total / static_cast<double>(query_count);
            res.summaries.push_back(sum);
            res.rows.insert(res.rows.end(), rows.begin(), rows.end());
        }
    }
    return res;
}

}  // namespace projgraph
