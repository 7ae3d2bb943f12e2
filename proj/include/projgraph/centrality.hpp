#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "projgraph/errors.hpp"
#include "projgraph/mapping.hpp"
#include "projgraph/projection.hpp"
#include "projgraph/social_graph.hpp"

namespace projgraph {

enum class Metric { degree, node_betweenness, edge_betweenness };
enum class Scope { user, peer, sg_edge, pg_edge };

/// Length function for PG shortest paths. SG paths are always unit.
/// inverse_weight uses edge length 1/w so heavier social bundles are shorter.
enum class DistanceMode { unit, inverse_weight };

inline const char* to_string(Metric m) {
    switch (m) {
        case Metric::degree: return "degree";
        case Metric::node_betweenness: return "node_betweenness";
        case Metric::edge_betweenness: return "edge_betweenness";
    }
    return "?";
}
inline const char* to_string(Scope s) {
    switch (s) {
        case Scope::user: return "user";
        case Scope::peer: return "peer";
        case Scope::sg_edge: return "sg_edge";
        case Scope::pg_edge: return "pg_edge";
    }
    return "?";
}
inline const char* to_string(DistanceMode d) {
    return d == DistanceMode::unit ? "unit" : "inverse_weight";
}

/// Per-node or per-edge scores for one metric. Node scopes use `scores`
/// indexed by id; edge scopes use the sorted `edge_keys` with aligned
/// `edge_scores`. `degenerate` marks an all-zero vector returned when the
/// requested normalization is undefined (too few nodes).
struct CentralityVector {
    Metric metric = Metric::degree;
    Scope scope = Scope::user;
    DistanceMode distance = DistanceMode::unit;
    bool normalized = false;
    bool degenerate = false;

    std::vector<double> scores;
    std::vector<EdgeKey> edge_keys;
    std::vector<double> edge_scores;

    bool is_edge_scope() const { return scope == Scope::sg_edge || scope == Scope::pg_edge; }
    std::size_t size() const { return is_edge_scope() ? edge_keys.size() : scores.size(); }

    double edge_score(EdgeKey e) const {
        auto it = std::lower_bound(edge_keys.begin(), edge_keys.end(), e);
        if (it == edge_keys.end() || *it != e) {
            throw ValidationError("no score for edge (" + std::to_string(e.a) + "," +
                                  std::to_string(e.b) + ")");
        }
        return edge_scores[static_cast<std::size_t>(it - edge_keys.begin())];
    }
};

namespace detail {

constexpr double kDijkstraRelTol = 1e-12;

inline bool dist_close(double a, double b) {
    return std::abs(a - b) <= kDijkstraRelTol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Flattened adjacency with per-arc edge indices, shared by the unit and
/// weighted betweenness paths.
struct AdjView {
    struct Arc {
        std::uint32_t to;
        std::uint32_t edge;  // index into edge_keys
        double len;
    };
    std::size_t n = 0;
    std::vector<std::size_t> offsets;
    std::vector<Arc> arcs;
    std::vector<EdgeKey> edge_keys;  // sorted
    bool unit = true;
};

inline AdjView make_view(const SocialGraph& g) {
    AdjView v;
    v.n = g.node_count();
    v.unit = true;
    v.edge_keys = g.edges();
    v.offsets.assign(v.n + 1, 0);
    for (NodeId u = 0; u < v.n; ++u) v.offsets[u + 1] = v.offsets[u] + g.degree(u);
    v.arcs.resize(v.offsets[v.n]);
    std::vector<std::size_t> cursor(v.offsets.begin(), v.offsets.end() - 1);
    for (std::uint32_t e = 0; e < v.edge_keys.size(); ++e) {
        const EdgeKey k = v.edge_keys[e];
        v.arcs[cursor[k.a]++] = {k.b, e, 1.0};
        v.arcs[cursor[k.b]++] = {k.a, e, 1.0};
    }
    return v;
}

inline AdjView make_view(const ProjectionGraph& pg, DistanceMode mode) {
    AdjView v;
    v.n = pg.peer_count();
    v.unit = (mode == DistanceMode::unit);
    auto edges = pg.edges();
    v.edge_keys.reserve(edges.size());
    for (const auto& [key, w] : edges) v.edge_keys.push_back(key);
    v.offsets.assign(v.n + 1, 0);
    for (PeerId p = 0; p < v.n; ++p) v.offsets[p + 1] = v.offsets[p] + pg.degree(p);
    v.arcs.resize(v.offsets[v.n]);
    std::vector<std::size_t> cursor(v.offsets.begin(), v.offsets.end() - 1);
    for (std::uint32_t e = 0; e < edges.size(); ++e) {
        const auto& [key, w] = edges[e];
        const double len = v.unit ? 1.0 : 1.0 / static_cast<double>(w);
        v.arcs[cursor[key.a]++] = {key.b, e, len};
        v.arcs[cursor[key.b]++] = {key.a, e, len};
    }
    return v;
}

/// Reusable per-worker state for Brandes passes.
struct BrandesWork {
    struct Pred {
        std::uint32_t node;
        std::uint32_t edge;
    };
    std::vector<double> sigma, delta, dist;
    std::vector<std::vector<Pred>> preds;
    std::vector<std::uint32_t> order;  // settle order

    void init(std::size_t n) {
        sigma.resize(n);
        delta.resize(n);
        dist.resize(n);
        preds.resize(n);
        order.reserve(n);
    }
};

inline void sssp_unit(const AdjView& g, std::uint32_t s, BrandesWork& w) {
    const double inf = std::numeric_limits<double>::infinity();
    std::fill(w.sigma.begin(), w.sigma.end(), 0.0);
    std::fill(w.dist.begin(), w.dist.end(), inf);
    for (auto& p : w.preds) p.clear();
    w.order.clear();

    w.sigma[s] = 1.0;
    w.dist[s] = 0.0;
    std::size_t head = 0;
    w.order.push_back(s);
    while (head < w.order.size()) {
        const std::uint32_t u = w.order[head++];
        for (std::size_t a = g.offsets[u]; a < g.offsets[u + 1]; ++a) {
            const auto& arc = g.arcs[a];
            if (w.dist[arc.to] == inf) {
                w.dist[arc.to] = w.dist[u] + 1.0;
                w.order.push_back(arc.to);
            }
            if (w.dist[arc.to] == w.dist[u] + 1.0) {
                w.sigma[arc.to] += w.sigma[u];
                w.preds[arc.to].push_back({u, arc.edge});
            }
        }
    }
}

inline void sssp_weighted(const AdjView& g, std::uint32_t s, BrandesWork& w) {
    const double inf = std::numeric_limits<double>::infinity();
    std::fill(w.sigma.begin(), w.sigma.end(), 0.0);
    std::fill(w.dist.begin(), w.dist.end(), inf);
    for (auto& p : w.preds) p.clear();
    w.order.clear();

    std::vector<bool> settled(g.n, false);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    w.dist[s] = 0.0;
    w.sigma[s] = 1.0;
    pq.push({0.0, s});
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (settled[u]) continue;
        settled[u] = true;
        w.order.push_back(u);
        for (std::size_t a = g.offsets[u]; a < g.offsets[u + 1]; ++a) {
            const auto& arc = g.arcs[a];
            if (settled[arc.to]) continue;
            const double nd = w.dist[u] + arc.len;
            if (dist_close(nd, w.dist[arc.to])) {
                w.sigma[arc.to] += w.sigma[u];
                w.preds[arc.to].push_back({u, arc.edge});
            } else if (nd < w.dist[arc.to]) {
                w.dist[arc.to] = nd;
                w.sigma[arc.to] = w.sigma[u];
                w.preds[arc.to].assign(1, {u, arc.edge});
                pq.push({nd, arc.to});
            }
        }
    }
}

/// One Brandes pass from source s, accumulating pair dependencies into
/// node_acc (endpoints excluded) and/or edge_acc (endpoint pairs included).
inline void brandes_source(const AdjView& g, std::uint32_t s, BrandesWork& w,
                           std::vector<double>* node_acc, std::vector<double>* edge_acc) {
    if (g.unit) {
        sssp_unit(g, s, w);
    } else {
        sssp_weighted(g, s, w);
    }
    std::fill(w.delta.begin(), w.delta.end(), 0.0);
    for (auto it = w.order.rbegin(); it != w.order.rend(); ++it) {
        const std::uint32_t t = *it;
        const double coeff = (1.0 + w.delta[t]) / w.sigma[t];
        for (const auto& p : w.preds[t]) {
            const double share = w.sigma[p.node] * coeff;
            w.delta[p.node] += share;
            if (edge_acc) (*edge_acc)[p.edge] += share;
        }
        if (node_acc && t != s) (*node_acc)[t] += w.delta[t];
    }
}

struct BetweennessRaw {
    std::vector<double> node;
    std::vector<double> edge;
};

/// Accumulates over all sources in ascending id order; with threads > 1,
/// sources are striped across workers and per-worker partial vectors are
/// merged in fixed worker order. Raw scores count unordered pairs.
inline BetweennessRaw betweenness_raw(const AdjView& g, bool want_nodes, bool want_edges,
                                      int threads) {
    const std::size_t n = g.n;
    const int t_count = std::max(1, threads);
    std::vector<std::vector<double>> node_parts, edge_parts;
    if (want_nodes) node_parts.assign(static_cast<std::size_t>(t_count), std::vector<double>(n, 0.0));
    if (want_edges)
        edge_parts.assign(static_cast<std::size_t>(t_count),
                          std::vector<double>(g.edge_keys.size(), 0.0));

    auto run_worker = [&](int worker) {
        BrandesWork work;
        work.init(n);
        auto* np = want_nodes ? &node_parts[static_cast<std::size_t>(worker)] : nullptr;
        auto* ep = want_edges ? &edge_parts[static_cast<std::size_t>(worker)] : nullptr;
        for (std::size_t s = static_cast<std::size_t>(worker); s < n;
             s += static_cast<std::size_t>(t_count)) {
            brandes_source(g, static_cast<std::uint32_t>(s), work, np, ep);
        }
    };
    if (t_count == 1) {
        run_worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(t_count));
        for (int w = 0; w < t_count; ++w) pool.emplace_back(run_worker, w);
        for (auto& th : pool) th.join();
    }

    BetweennessRaw out;
    if (want_nodes) {
        out.node.assign(n, 0.0);
        for (const auto& part : node_parts) {
            for (std::size_t i = 0; i < n; ++i) out.node[i] += part[i];
        }
        for (double& x : out.node) x *= 0.5;  // unordered pairs
    }
    if (want_edges) {
        out.edge.assign(g.edge_keys.size(), 0.0);
        for (const auto& part : edge_parts) {
            for (std::size_t i = 0; i < part.size(); ++i) out.edge[i] += part[i];
        }
        for (double& x : out.edge) x *= 0.5;
    }
    return out;
}

inline void normalize_node_vector(CentralityVector& cv, std::size_t n) {
    cv.normalized = true;
    if (n < 3) {
        cv.degenerate = true;
        std::fill(cv.scores.begin(), cv.scores.end(), 0.0);
        return;
    }
    const double f = 2.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
    for (double& x : cv.scores) x *= f;
}

inline void normalize_edge_vector(CentralityVector& cv, std::size_t n) {
    cv.normalized = true;
    if (n < 2) {
        cv.degenerate = true;
        std::fill(cv.edge_scores.begin(), cv.edge_scores.end(), 0.0);
        return;
    }
    const double f = 2.0 / (static_cast<double>(n) * static_cast<double>(n - 1));
    for (double& x : cv.edge_scores) x *= f;
}

}  // namespace detail

/// User degree centrality; normalized divides by n-1. A single-node graph
/// with normalize set yields an all-zero vector flagged degenerate.
inline CentralityVector degree_centrality(const SocialGraph& g, bool normalize) {
    if (g.node_count() == 0) throw ValidationError("degree_centrality: empty graph");
    CentralityVector cv;
    cv.metric = Metric::degree;
    cv.scope = Scope::user;
    cv.scores.resize(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) cv.scores[u] = static_cast<double>(g.degree(u));
    if (normalize) {
        cv.normalized = true;
        if (g.node_count() < 2) {
            cv.degenerate = true;
            std::fill(cv.scores.begin(), cv.scores.end(), 0.0);
        } else {
            const double f = 1.0 / static_cast<double>(g.node_count() - 1);
            for (double& x : cv.scores) x *= f;
        }
    }
    return cv;
}

/// Peer degree centrality: the number of distinct neighbor peers.
inline CentralityVector degree_centrality(const ProjectionGraph& pg, bool normalize) {
    if (pg.peer_count() == 0) throw ValidationError("degree_centrality: empty projection graph");
    CentralityVector cv;
    cv.metric = Metric::degree;
    cv.scope = Scope::peer;
    cv.scores.resize(pg.peer_count());
    for (PeerId p = 0; p < pg.peer_count(); ++p) cv.scores[p] = static_cast<double>(pg.degree(p));
    if (normalize) {
        cv.normalized = true;
        if (pg.peer_count() < 2) {
            cv.degenerate = true;
            std::fill(cv.scores.begin(), cv.scores.end(), 0.0);
        } else {
            const double f = 1.0 / static_cast<double>(pg.peer_count() - 1);
            for (double& x : cv.scores) x *= f;
        }
    }
    return cv;
}

/// Brandes node betweenness over unordered source-target pairs, endpoints
/// excluded. Freeman normalization multiplies by 2/((n-1)(n-2)).
inline CentralityVector node_betweenness(const SocialGraph& g, bool normalize, int threads = 1) {
    auto view = detail::make_view(g);
    auto raw = detail::betweenness_raw(view, true, false, threads);
    CentralityVector cv;
    cv.metric = Metric::node_betweenness;
    cv.scope = Scope::user;
    cv.scores = std::move(raw.node);
    if (normalize) detail::normalize_node_vector(cv, g.node_count());
    return cv;
}

inline CentralityVector node_betweenness(const ProjectionGraph& pg, DistanceMode mode,
                                         bool normalize, int threads = 1) {
    auto view = detail::make_view(pg, mode);
    auto raw = detail::betweenness_raw(view, true, false, threads);
    CentralityVector cv;
    cv.metric = Metric::node_betweenness;
    cv.scope = Scope::peer;
    cv.distance = mode;
    cv.scores = std::move(raw.node);
    if (normalize) detail::normalize_node_vector(cv, pg.peer_count());
    return cv;
}

/// Brandes edge betweenness; endpoint pairs count (an edge lies on the path
/// between its own endpoints). Normalization multiplies by 2/(n(n-1)).
inline CentralityVector edge_betweenness(const SocialGraph& g, bool normalize, int threads = 1) {
    auto view = detail::make_view(g);
    auto raw = detail::betweenness_raw(view, false, true, threads);
    CentralityVector cv;
    cv.metric = Metric::edge_betweenness;
    cv.scope = Scope::sg_edge;
    cv.edge_keys = std::move(view.edge_keys);
    cv.edge_scores = std::move(raw.edge);
    if (normalize) detail::normalize_edge_vector(cv, g.node_count());
    return cv;
}

inline CentralityVector edge_betweenness(const ProjectionGraph& pg, DistanceMode mode,
                                         bool normalize, int threads = 1) {
    auto view = detail::make_view(pg, mode);
    auto raw = detail::betweenness_raw(view, false, true, threads);
    CentralityVector cv;
    cv.metric = Metric::edge_betweenness;
    cv.scope = Scope::pg_edge;
    cv.distance = mode;
    cv.edge_keys = std::move(view.edge_keys);
    cv.edge_scores = std::move(raw.edge);
    if (normalize) detail::normalize_edge_vector(cv, pg.peer_count());
    return cv;
}

/// Node and edge betweenness from a single set of shortest-path passes.
inline std::pair<CentralityVector, CentralityVector> node_and_edge_betweenness(
    const ProjectionGraph& pg, DistanceMode mode, bool normalize, int threads = 1) {
    auto view = detail::make_view(pg, mode);
    auto raw = detail::betweenness_raw(view, true, true, threads);
    CentralityVector nodes, edges;
    nodes.metric = Metric::node_betweenness;
    nodes.scope = Scope::peer;
    nodes.distance = mode;
    nodes.scores = std::move(raw.node);
    edges.metric = Metric::edge_betweenness;
    edges.scope = Scope::pg_edge;
    edges.distance = mode;
    edges.edge_keys = std::move(view.edge_keys);
    edges.edge_scores = std::move(raw.edge);
    if (normalize) {
        detail::normalize_node_vector(nodes, pg.peer_count());
        detail::normalize_edge_vector(edges, pg.peer_count());
    }
    return {std::move(nodes), std::move(edges)};
}

/// Sums user scores over each peer (or SG edge scores over each Θ_ij bundle;
/// intra-peer SG edges are excluded).
inline CentralityVector cumulative_estimate(const CentralityVector& cv, const Mapping& m) {
    CentralityVector out;
    out.metric = cv.metric;
    out.distance = cv.distance;
    out.normalized = cv.normalized;
    out.degenerate = cv.degenerate;
    if (cv.scope == Scope::user) {
        if (cv.scores.size() != m.peer_of.size()) {
            throw ValidationError("cumulative_estimate: score vector does not match mapping");
        }
        out.scope = Scope::peer;
        out.scores.assign(m.peer_count, 0.0);
        for (NodeId u = 0; u < cv.scores.size(); ++u) out.scores[m.peer_of[u]] += cv.scores[u];
    } else if (cv.scope == Scope::sg_edge) {
        out.scope = Scope::pg_edge;
        std::map<EdgeKey, double> acc;
        for (std::size_t i = 0; i < cv.edge_keys.size(); ++i) {
            const EdgeKey e = cv.edge_keys[i];
            if (e.b >= m.peer_of.size()) {
                throw ValidationError("cumulative_estimate: edge endpoint outside mapping");
            }
            const PeerId pu = m.peer_of[e.a], pv = m.peer_of[e.b];
            if (pu == pv) continue;
            acc[EdgeKey(pu, pv)] += cv.edge_scores[i];
        }
        out.edge_keys.reserve(acc.size());
        out.edge_scores.reserve(acc.size());
        for (const auto& [key, score] : acc) {
            out.edge_keys.push_back(key);
            out.edge_scores.push_back(score);
        }
    } else {
        throw ValidationError("cumulative_estimate: input scope must be user or sg_edge");
    }
    return out;
}

namespace detail {

inline void bfs_counts(const SocialGraph& g, NodeId s, std::vector<double>& sigma,
                       std::vector<std::int64_t>& dist) {
    const std::size_t n = g.node_count();
    sigma.assign(n, 0.0);
    dist.assign(n, -1);
    sigma[s] = 1.0;
    dist[s] = 0;
    std::vector<NodeId> queue{s};
    std::size_t head = 0;
    while (head < queue.size()) {
        const NodeId u = queue[head++];
        for (NodeId v : g.neighbors(u)) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
            if (dist[v] == dist[u] + 1) sigma[v] += sigma[u];
        }
    }
}

}  // namespace detail

/// Shortest-path categories contributing to C_NB(u) when users are mapped on
/// peers, split by where the pair endpoints live relative to u's peer.
/// The four sums add up to the raw unordered-pair betweenness of u.
struct NodeBetweennessDecomposition {
    double all_distinct_peers = 0.0;   // s, t, u on three different peers
    double endpoint_on_us_peer = 0.0;  // exactly one endpoint shares u's peer
    double pair_on_other_peer = 0.0;   // s, t together on a peer different from u's
    double all_same_peer = 0.0;        // s, t on u's peer
    double total = 0.0;
};

inline NodeBetweennessDecomposition betweenness_decomposition_check(const SocialGraph& g,
                                                                    const Mapping& m, NodeId u) {
    m.validate(g.node_count());
    if (u >= g.node_count()) throw ValidationError("unknown node id " + std::to_string(u));
    const std::size_t n = g.node_count();
    const PeerId pu = m.peer_of[u];

    std::vector<double> sigma_u, sigma_s;
    std::vector<std::int64_t> dist_u, dist_s;
    detail::bfs_counts(g, u, sigma_u, dist_u);

    NodeBetweennessDecomposition out;
    for (NodeId s = 0; s < n; ++s) {
        if (s == u) continue;
        detail::bfs_counts(g, s, sigma_s, dist_s);
        for (NodeId t = s + 1; t < n; ++t) {
            if (t == u || dist_s[t] < 0) continue;
            if (dist_s[u] < 0 || dist_u[t] < 0 || dist_s[u] + dist_u[t] != dist_s[t]) continue;
            const double c = sigma_s[u] * sigma_u[t] / sigma_s[t];
            const PeerId ps = m.peer_of[s], pt = m.peer_of[t];
            if (ps == pu && pt == pu) {
                out.all_same_peer += c;
            } else if (ps == pu || pt == pu) {
                out.endpoint_on_us_peer += c;
            } else if (ps == pt) {
                out.pair_on_other_peer += c;
            } else {
                out.all_distinct_peers += c;
            }
        }
    }
    out.total = out.all_distinct_peers + out.endpoint_on_us_peer + out.pair_on_other_peer +
                out.all_same_peer;
    return out;
}

/// Shortest-path categories contributing to C_EB(e). An inter-peer edge
/// splits into the cross-peer and same-peer endpoint cases; an intra-peer
/// edge splits by whether the pair sits on e's peer, on two peers, or
/// together on some other peer. The five sums add up to the raw score.
struct EdgeBetweennessDecomposition {
    double inter_cross_peers = 0.0;  // e crosses peers; s, t on different peers
    double intra_same_peer = 0.0;    // e inside a peer; s, t on that peer
    double intra_cross_peers = 0.0;  // e inside a peer; s, t on different peers
    double inter_same_peer = 0.0;    // e crosses peers; s, t on one peer
    double intra_other_peer = 0.0;   // e inside a peer; s, t together elsewhere
    double total = 0.0;
};

inline EdgeBetweennessDecomposition edge_decomposition_check(const SocialGraph& g, const Mapping& m,
                                                             EdgeKey e) {
    m.validate(g.node_count());
    if (e.b >= g.node_count() || !g.has_edge(e.a, e.b)) {
        throw ValidationError("edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                              ") not in graph");
    }
    const std::size_t n = g.node_count();
    const PeerId pa = m.peer_of[e.a], pb = m.peer_of[e.b];
    const bool inter = (pa != pb);

    std::vector<double> sigma_a, sigma_b, sigma_s;
    std::vector<std::int64_t> dist_a, dist_b, dist_s;
    detail::bfs_counts(g, e.a, sigma_a, dist_a);
    detail::bfs_counts(g, e.b, sigma_b, dist_b);

    EdgeBetweennessDecomposition out;
    for (NodeId s = 0; s < n; ++s) {
        detail::bfs_counts(g, s, sigma_s, dist_s);
        for (NodeId t = s + 1; t < n; ++t) {
            if (dist_s[t] < 0) continue;
            double paths_via_e = 0.0;
            if (dist_s[e.a] >= 0 && dist_b[t] >= 0 && dist_s[e.a] + 1 + dist_b[t] == dist_s[t]) {
                paths_via_e += sigma_s[e.a] * sigma_b[t];
            }
            if (dist_s[e.b] >= 0 && dist_a[t] >= 0 && dist_s[e.b] + 1 + dist_a[t] == dist_s[t]) {
                paths_via_e += sigma_s[e.b] * sigma_a[t];
            }
            if (paths_via_e == 0.0) continue;
            const double c = paths_via_e / sigma_s[t];
            const PeerId ps = m.peer_of[s], pt = m.peer_of[t];
            if (inter) {
                if (ps == pt) {
                    out.inter_same_peer += c;
                } else {
                    out.inter_cross_peers += c;
                }
            } else {
                if (ps == pt && ps == pa) {
                    out.intra_same_peer += c;
                } else if (ps == pt) {
                    out.intra_other_peer += c;
                } else {
                    out.intra_cross_peers += c;
                }
            }
        }
    }
    out.total = out.inter_cross_peers + out.intra_same_peer + out.intra_cross_peers +
                out.inter_same_peer + out.intra_other_peer;
    return out;
}

}  // namespace projgraph
