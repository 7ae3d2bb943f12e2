#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "projgraph/analysis.hpp"
#include "projgraph/centrality.hpp"
#include "projgraph/community.hpp"
#include "projgraph/errors.hpp"
#include "projgraph/mapping.hpp"
#include "projgraph/projection.hpp"
#include "projgraph/search.hpp"
#include "projgraph/social_graph.hpp"

namespace projgraph {

/// Fixed-format double for CSV output; repeatable across runs.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

/// Every artifact starts with a single '#'-prefixed JSON config line so a
/// table is self-describing; downstream readers skip '#' comments.
inline void write_config_header(std::ostream& out, const std::string& config_json) {
    if (!config_json.empty()) out << "# " << config_json << '\n';
}

inline void write_id_map_csv(std::ostream& out, const SocialGraph& g,
                             const std::string& config_json = {}) {
    write_config_header(out, config_json);
    out << "internal_id,external_id\n";
    for (NodeId u = 0; u < g.node_count(); ++u) {
        out << u << ',' << g.external_id(u) << '\n';
    }
}

inline void write_mapping_csv(std::ostream& out, const SocialGraph& g, const Mapping& m,
                              const std::string& config_json = {}) {
    write_config_header(out, config_json);
    out << "user_external_id,peer_id\n";
    for (NodeId u = 0; u < g.node_count(); ++u) {
        out << g.external_id(u) << ',' << m.peer_of[u] << '\n';
    }
}

/// Reads a "user_external_id,peer_id" table back into a total Mapping over g.
inline Mapping load_mapping_csv(const std::filesystem::path& path, const SocialGraph& g) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::unordered_map<ExternalId, NodeId> to_internal;
    to_internal.reserve(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) to_internal.emplace(g.external_id(u), u);

    std::vector<std::int64_t> labels(g.node_count(), -1);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("user_external_id", 0) == 0) continue;  // header row
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected user_external_id,peer_id");
        }
        ExternalId ext;
        std::uint32_t peer;
        try {
            ext = std::stoull(line.substr(0, comma));
            peer = static_cast<std::uint32_t>(std::stoul(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": malformed mapping row");
        }
        auto it = to_internal.find(ext);
        if (it == to_internal.end()) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": user " +
                                  std::to_string(ext) + " is not in the graph");
        }
        labels[it->second] = static_cast<std::int64_t>(peer);
    }
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (labels[u] < 0) {
            throw ValidationError(path.string() + ": user " + std::to_string(g.external_id(u)) +
                                  " has no peer assignment");
        }
    }
    return Mapping::from_labels(labels);
}

inline void write_partition_stats_csv(std::ostream& out, const PartitionStats& st,
                                      const std::string& config_json = {}) {
    write_config_header(out, config_json);
    out << "community_count,mean_size,std_dev_size,min_size,max_size\n";
    out << st.community_count << ',' << format_double(st.mean_size) << ','
        << format_double(st.std_dev_size) << ',' << st.min_size << ',' << st.max_size << '\n';
}

inline void write_pg_csv(std::ostream& out, const ProjectionGraph& pg,
                         const std::string& config_json = {}) {
    write_config_header(out, config_json);
    out << "peer_i,peer_j,weight\n";
    for (const auto& [key, w] : pg.edges()) {
        out << key.a << ',' << key.b << ',' << w << '\n';
    }
}

inline void write_pg_peers_csv(std::ostream& out, const ProjectionGraph& pg,
                               const std::string& config_json = {}) {
    write_config_header(out, config_json);
    out << "peer_id,size,intra_edges\n";
    for (PeerId p = 0; p < pg.peer_count(); ++p) {
        out << p << ',' << pg.peer_size(p) << ',' << pg.intra_edges(p) << '\n';
    }
}

/// Centrality table: "id,score" (or "u,v,score" for edges) with a comment
/// line naming metric, scope, normalization and distance mode. User and
/// SG-edge ids are translated back to external ids when the graph is given.
inline void write_centrality_csv(std::ostream& out, const CentralityVector& cv,
                                 const SocialGraph* g = nullptr,
                                 const std::string& config_json = {}) {
    write_config_header(out, config_json);
    out << "# metric=" << to_string(cv.metric) << " scope=" << to_string(cv.scope)
        << " normalized=" << (cv.normalized ? "true" : "false")
        << " distance=" << to_string(cv.distance)
        << (cv.degenerate ? " degenerate=true" : "") << '\n';
    const bool translate = g != nullptr && (cv.scope == Scope::user || cv.scope == Scope::sg_edge);
    if (cv.is_edge_scope()) {
        out << "u,v,score\n";
        for (std::size_t i = 0; i < cv.edge_keys.size(); ++i) {
            const EdgeKey e = cv.edge_keys[i];
            if (translate) {
                out << g->external_id(e.a) << ',' << g->external_id(e.b);
            } else {
                out << e.a << ',' << e.b;
            }
            out << ',' << format_double(cv.edge_scores[i]) << '\n';
        }
    } else {
        out << "id,score\n";
        for (std::size_t i = 0; i < cv.scores.size(); ++i) {
            if (translate) {
                out << g->external_id(static_cast<NodeId>(i));
            } else {
                out << i;
            }
            out << ',' << format_double(cv.scores[i]) << '\n';
        }
    }
}

inline void write_sweep_csv(std::ostream& out, const std::vector<CorrelationPoint>& points,
                            const std::string& config_json = {}) {
    write_config_header(out, config_json);
    out << "target_size,avg_size,metric,distance_mode,pearson_r,defined,sample_count\n";
    for (const auto& pt : points) {
        out << pt.target_size << ',' << format_double(pt.avg_community_size) << ','
            << to_string(pt.metric) << ',' << to_string(pt.distance) << ','
            << format_double(pt.pearson.r) << ',' << (pt.pearson.defined ? 1 : 0) << ','
            << pt.sample_count << '\n';
    }
}

inline void write_curves_csv(std::ostream& out, const std::vector<CurvePoint>& points,
                             const std::string& config_json = {}) {
    write_config_header(out, config_json);
    out << "target_size,avg_size,metric,distance_mode,mean_user_cumulative,mean_peer\n";
    for (const auto& cp : points) {
        out << cp.target_size << ',' << format_double(cp.avg_community_size) << ','
            << to_string(cp.metric) << ',' << to_string(cp.distance) << ','
            << format_double(cp.mean_user_cumulative) << ',' << format_double(cp.mean_peer_score)
            << '\n';
    }
}

inline void write_rank_csv(std::ostream& out, const RankDistribution& rd,
                           const std::string& config_json = {}) {
    write_config_header(out, config_json);
    out << "rank,value\n";
    for (const auto& [rank, value] : rd.entries) {
        out << rank << ',' << format_double(value) << '\n';
    }
}

inline void write_outcomes_csv(std::ostream& out, const std::vector<OutcomeRow>& rows,
                               const std::string& config_json = {}) {
    write_config_header(out, config_json);
    out << "query_id,workload,technique,layer,n_percent,success,hops,peers_accessed,"
           "peer_fraction,messages\n";
    for (const auto& r : rows) {
        out << r.query_id << ',' << to_string(r.workload) << ',' << to_string(r.technique) << ','
            << to_string(r.layer) << ',' << r.n_percent << ',' << (r.success ? 1 : 0) << ','
            << r.hops << ',' << r.peers_accessed << ',' << format_double(r.peer_fraction) << ','
            << r.messages << '\n';
    }
}

inline void write_summary_csv(std::ostream& out, const std::vector<TechniqueSummary>& sums,
                              const std::string& config_json = {}) {
    write_config_header(out, config_json);
    out << "workload,technique,layer,n_percent,queries,success_rate,hops_p50,hops_p90,"
           "mean_peer_fraction\n";
    for (const auto& s : sums) {
        out << to_string(s.workload) << ',' << to_string(s.technique) << ',' << to_string(s.layer)
            << ',' << s.n_percent << ',' << s.queries << ',' << format_double(s.success_rate)
            << ',' << format_double(s.hops_p50) << ',' << format_double(s.hops_p90) << ','
            << format_double(s.mean_peer_fraction) << '\n';
    }
}

/// Reads "group_id<TAB>user_id" membership lines ('#' comments allowed).
/// Memberships of users absent from the graph are ignored; group ids are
/// densified in ascending order and member lists sorted.
inline GroupData load_groups(const std::filesystem::path& path, const SocialGraph& g) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::unordered_map<ExternalId, NodeId> to_internal;
    to_internal.reserve(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) to_internal.emplace(g.external_id(u), u);

    std::map<std::uint64_t, std::vector<NodeId>> raw;  // ordered by external group id
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        ExternalId gid, uid;
        bool blank = false;
        if (!detail::parse_edge_line(line, gid, uid, blank)) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected group_id<TAB>user_id");
        }
        if (blank) continue;
        auto it = to_internal.find(uid);
        if (it == to_internal.end()) continue;
        raw[gid].push_back(it->second);
    }
    if (in.bad()) throw IoError("error while reading " + path.string());

    GroupData out;
    out.user_groups.resize(g.node_count());
    out.group_members.reserve(raw.size());
    out.group_external_ids.reserve(raw.size());
    for (auto& [gid, members] : raw) {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        const auto dense = static_cast<std::uint32_t>(out.group_members.size());
        for (NodeId u : members) out.user_groups[u].push_back(dense);
        out.group_members.push_back(std::move(members));
        out.group_external_ids.push_back(gid);
    }
    return out;
}

}  // namespace projgraph
