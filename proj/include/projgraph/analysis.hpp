#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "projgraph/centrality.hpp"
#include "projgraph/community.hpp"
#include "projgraph/errors.hpp"
#include "projgraph/mapping.hpp"
#include "projgraph/projection.hpp"
#include "projgraph/social_graph.hpp"

namespace projgraph {

/// Pearson r with an explicit defined flag: a constant input vector makes
/// the coefficient undefined and is reported as a flagged null, never 0.
struct PearsonResult {
    double r = std::numeric_limits<double>::quiet_NaN();
    bool defined = false;
};

inline PearsonResult pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw ValidationError("pearson: length mismatch");
    if (xs.size() < 2) throw ValidationError("pearson: need at least two samples");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    PearsonResult out;
    if (sxx == 0.0 || syy == 0.0) return out;  // constant vector: undefined
    out.defined = true;
    out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    return out;
}

/// One point of the correlation experiment: cumulative user scores per peer
/// (or per PG edge) against the peer's own score in the rebuilt topology.
struct CorrelationPoint {
    std::uint32_t target_size = 0;
    double avg_community_size = 0.0;
    Metric metric = Metric::degree;
    DistanceMode distance = DistanceMode::unit;
    PearsonResult pearson;
    std::size_t sample_count = 0;
};

struct CurvePoint {
    std::uint32_t target_size = 0;
    double avg_community_size = 0.0;
    Metric metric = Metric::degree;
    DistanceMode distance = DistanceMode::unit;
    double mean_user_cumulative = 0.0;
    double mean_peer_score = 0.0;
};

struct TurningPoint {
    Metric metric = Metric::degree;
    DistanceMode distance = DistanceMode::unit;
    std::uint32_t target_size = 0;  // target with the maximum mean peer score
    double avg_community_size = 0.0;
    double mean_peer_score = 0.0;
};

struct SweepResult {
    std::vector<CorrelationPoint> correlations;
    std::vector<CurvePoint> curves;
    std::vector<TurningPoint> turning_points;
};

/// Default target grid reproducing the experiments' community-size range.
inline std::vector<std::uint32_t> default_sweep_targets() {
    return {5, 10, 20, 50, 100, 200, 300, 500, 1000};
}

namespace detail {

inline double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

}  // namespace detail

/// Runs the full community-size sweep: for every target, merge the base
/// mapping up to that average size, rebuild the projection graph, and pair
/// cumulative user scores with peer scores. Betweenness points are emitted
/// for both PG distance modes; user-side betweenness always uses unit SG
/// paths. All scores are Freeman-normalized (Pearson r is scale-invariant,
/// so raw scores would correlate identically).
inline SweepResult correlation_sweep(const SocialGraph& g, const Mapping& base,
                                     const std::vector<std::uint32_t>& targets,
                                     const std::vector<Metric>& metrics, std::uint64_t seed,
                                     int threads = 1) {
    base.validate(g.node_count());
    if (targets.empty()) throw ValidationError("correlation_sweep: no targets");
    for (std::size_t i = 1; i < targets.size(); ++i) {
        if (targets[i] <= targets[i - 1]) {
            throw ValidationError("correlation_sweep: targets must be strictly ascending");
        }
    }
    const bool want_degree = std::find(metrics.begin(), metrics.end(), Metric::degree) != metrics.end();
    const bool want_nb =
        std::find(metrics.begin(), metrics.end(), Metric::node_betweenness) != metrics.end();
    const bool want_eb =
        std::find(metrics.begin(), metrics.end(), Metric::edge_betweenness) != metrics.end();

    CentralityVector user_degree, user_nb, sg_eb;
    if (want_degree) user_degree = degree_centrality(g, true);
    if (want_nb) user_nb = node_betweenness(g, true, threads);
    if (want_eb) sg_eb = edge_betweenness(g, true, threads);

    SweepResult res;
    for (std::uint32_t target : targets) {
        const Mapping merged = merge_to_target(g, base, target, seed).mapping;
        const ProjectionGraph pg = build_projection(g, merged);
        const double avg = static_cast<double>(g.node_count()) / merged.peer_count;

        auto add_node_point = [&](Metric metric, DistanceMode mode,
                                  const CentralityVector& user_cv,
                                  const CentralityVector& peer_cv) {
            CentralityVector cum = cumulative_estimate(user_cv, merged);
            CorrelationPoint pt;
            pt.target_size = target;
            pt.avg_community_size = avg;
            pt.metric = metric;
            pt.distance = mode;
            pt.sample_count = pg.peer_count();
            if (pg.peer_count() >= 2) pt.pearson = pearson(cum.scores, peer_cv.scores);
            res.correlations.push_back(pt);

            CurvePoint cp;
            cp.target_size = target;
            cp.avg_community_size = avg;
            cp.metric = metric;
            cp.distance = mode;
            cp.mean_user_cumulative = detail::mean_of(cum.scores);
            cp.mean_peer_score = detail::mean_of(peer_cv.scores);
            res.curves.push_back(cp);
        };

        if (want_degree) {
            add_node_point(Metric::degree, DistanceMode::unit, user_degree,
                           degree_centrality(pg, true));
        }
        if (want_nb) {
            for (DistanceMode mode : {DistanceMode::unit, DistanceMode::inverse_weight}) {
                add_node_point(Metric::node_betweenness, mode, user_nb,
                               node_betweenness(pg, mode, true, threads));
            }
        }
        if (want_eb) {
            for (DistanceMode mode : {DistanceMode::unit, DistanceMode::inverse_weight}) {
                CentralityVector cum = cumulative_estimate(sg_eb, merged);
                CentralityVector peer_eb = edge_betweenness(pg, mode, true, threads);
                if (cum.edge_keys != peer_eb.edge_keys) {
                    throw ValidationError("correlation_sweep: PG edge sets disagree");
                }
                CorrelationPoint pt;
                pt.target_size = target;
                pt.avg_community_size = avg;
                pt.metric = Metric::edge_betweenness;
                pt.distance = mode;
                pt.sample_count = peer_eb.edge_keys.size();
                if (pt.sample_count >= 2) pt.pearson = pearson(cum.edge_scores, peer_eb.edge_scores);
                res.correlations.push_back(pt);

                CurvePoint cp;
                cp.target_size = target;
                cp.avg_community_size = avg;
                cp.metric = Metric::edge_betweenness;
                cp.distance = mode;
                cp.mean_user_cumulative = detail::mean_of(cum.edge_scores);
                cp.mean_peer_score = detail::mean_of(peer_eb.edge_scores);
                res.curves.push_back(cp);
            }
        }
    }

    // turning point per (metric, mode): target with the maximum mean peer
    // score, earliest target on exact ties
    for (const CurvePoint& cp : res.curves) {
        auto it = std::find_if(res.turning_points.begin(), res.turning_points.end(),
                               [&](const TurningPoint& t) {
                                   return t.metric == cp.metric && t.distance == cp.distance;
                               });
        if (it == res.turning_points.end()) {
            res.turning_points.push_back(
                {cp.metric, cp.distance, cp.target_size, cp.avg_community_size, cp.mean_peer_score});
        } else if (cp.mean_peer_score > it->mean_peer_score) {
            it->target_size = cp.target_size;
            it->avg_community_size = cp.avg_community_size;
            it->mean_peer_score = cp.mean_peer_score;
        }
    }
    return res;
}

struct CurveResult {
    std::vector<CurvePoint> points;
    std::vector<TurningPoint> turning_points;
};

/// Mean cumulative user score vs. mean peer score across the same sweep,
/// with the turning point (target maximizing the mean peer score) recorded
/// per metric and distance mode.
inline CurveResult mean_score_curves(const SocialGraph& g, const Mapping& base,
                                     const std::vector<std::uint32_t>& targets,
                                     const std::vector<Metric>& metrics, std::uint64_t seed,
                                     int threads = 1) {
    SweepResult s = correlation_sweep(g, base, targets, metrics, seed, threads);
    return {std::move(s.curves), std::move(s.turning_points)};
}

/// Descending (rank, value) pairs with 1-based ranks.
struct RankDistribution {
    std::vector<std::pair<std::uint32_t, double>> entries;
};

inline RankDistribution rank_frequency(std::vector<double> values) {
    if (values.empty()) throw ValidationError("rank_frequency: empty value set");
    std::sort(values.begin(), values.end(), std::greater<>());
    RankDistribution rd;
    rd.entries.reserve(values.size());
    for (std::uint32_t i = 0; i < values.size(); ++i) {
        rd.entries.emplace_back(i + 1, values[i]);
    }
    return rd;
}

}  // namespace projgraph
