// Command-line front end wiring the pipeline end to end: ingestion, LCC
// extraction, community detection, merging, projection, centrality,
// correlation sweeps and search simulation. Every command validates its
// inputs and finishes computing before the first output file is opened, and
// identical configs with identical seeds produce byte-identical CSVs.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "projgraph/analysis.hpp"
#include "projgraph/centrality.hpp"
#include "projgraph/community.hpp"
#include "projgraph/errors.hpp"
#include "projgraph/io.hpp"
#include "projgraph/mapping.hpp"
#include "projgraph/projection.hpp"
#include "projgraph/search.hpp"
#include "projgraph/social_graph.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace projgraph;

namespace {

constexpr const char* kVersion = "0.1.0";

struct GlobalOptions {
    std::string edges;
    std::string mapping;
    std::string groups;
    std::string out_dir;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: use hardware concurrency

    int resolved_threads() const {
        if (threads > 0) return threads;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }
};

struct ArtifactWriter {
    fs::path dir;
    std::string config_json;
    json manifest;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    explicit ArtifactWriter(const GlobalOptions& g, const std::string& command, json config) {
        dir = g.out_dir;
        config["command"] = command;
        config["seed"] = g.seed;
        config["threads"] = g.resolved_threads();
        if (!g.edges.empty()) config["edges"] = g.edges;
        if (!g.mapping.empty()) config["mapping"] = g.mapping;
        if (!g.groups.empty()) config["groups"] = g.groups;
        config_json = config.dump();
        manifest["command"] = command;
        manifest["config"] = config;
        manifest["versions"] = {{"projgraph", kVersion}};
    }

    std::ofstream open(const std::string& name) {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create output directory " + dir.string());
        std::ofstream out(dir / name);
        if (!out) throw IoError("cannot write " + (dir / name).string());
        return out;
    }

    void finish() {
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        manifest["wall_time_s"] = wall;
        manifest["timestamp_unix"] =
            std::chrono::duration_cast<std::chrono::seconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count();
        std::ofstream out = open("run_manifest.json");
        out << manifest.dump(2) << '\n';
    }
};

SocialGraph load_edges_required(const GlobalOptions& g) {
    if (g.edges.empty()) throw ValidationError("--edges is required");
    return load_edge_list(fs::path(g.edges));
}

Mapping load_mapping_required(const GlobalOptions& g, const SocialGraph& graph) {
    if (g.mapping.empty()) throw ValidationError("--mapping is required for this command");
    Mapping m = load_mapping_csv(g.mapping, graph);
    m.validate(graph.node_count());
    return m;
}

Metric parse_metric(const std::string& s) {
    if (s == "degree") return Metric::degree;
    if (s == "node_betweenness") return Metric::node_betweenness;
    if (s == "edge_betweenness") return Metric::edge_betweenness;
    throw ValidationError("unknown metric: " + s);
}

DistanceMode parse_distance(const std::string& s) {
    if (s == "unit") return DistanceMode::unit;
    if (s == "inverse_weight") return DistanceMode::inverse_weight;
    throw ValidationError("unknown distance mode: " + s);
}

TechniqueKind parse_technique(const std::string& s) {
    if (s == "peer_degree") return TechniqueKind::peer_degree;
    if (s == "peer_betweenness") return TechniqueKind::peer_betweenness;
    if (s == "pg_edge_betweenness") return TechniqueKind::pg_edge_betweenness;
    if (s == "random") return TechniqueKind::random_pick;
    throw ValidationError("unknown technique: " + s);
}

int cmd_lcc(const GlobalOptions& g) {
    SocialGraph graph = load_edges_required(g);
    LccResult lcc = largest_connected_component(graph);

    ArtifactWriter w(g, "lcc", {});
    w.manifest["input"] = {{"nodes", graph.node_count()}, {"edges", graph.edge_count()}};
    w.manifest["lcc"] = {{"nodes", lcc.graph.node_count()}, {"edges", lcc.graph.edge_count()}};
    {
        auto out = w.open("lcc_edges.txt");
        write_edge_list(out, lcc.graph);
    }
    {
        auto out = w.open("id_map.csv");
        write_id_map_csv(out, lcc.graph, w.config_json);
    }
    w.finish();
    std::cout << "lcc: " << lcc.graph.node_count() << " nodes, " << lcc.graph.edge_count()
              << " edges (input " << graph.node_count() << "/" << graph.edge_count() << ")\n";
    return 0;
}

int cmd_communities(const GlobalOptions& g, std::uint32_t max_size) {
    SocialGraph graph = load_edges_required(g);
    Mapping m = max_size > 0 ? recursive_louvain(graph, max_size, g.seed) : louvain(graph, g.seed);
    const PartitionStats st = partition_stats(m);
    const double q = modularity(graph, m);

    json config;
    if (max_size > 0) config["max_size"] = max_size;
    ArtifactWriter w(g, "communities", config);
    w.manifest["modularity"] = q;
    w.manifest["stats"] = {{"community_count", st.community_count},
                           {"mean_size", st.mean_size},
                           {"std_dev_size", st.std_dev_size},
                           {"min_size", st.min_size},
                           {"max_size", st.max_size}};
    {
        auto out = w.open("mapping.csv");
        write_mapping_csv(out, graph, m, w.config_json);
    }
    {
        auto out = w.open("stats.csv");
        write_partition_stats_csv(out, st, w.config_json);
    }
    w.finish();
    std::cout << "communities: " << st.community_count << " (mean " << st.mean_size
              << ", max " << st.max_size << "), Q=" << q << "\n";
    return 0;
}

int cmd_merge(const GlobalOptions& g, std::uint32_t target_avg) {
    SocialGraph graph = load_edges_required(g);
    Mapping base = load_mapping_required(g, graph);
    MergeResult r = merge_to_target(graph, base, target_avg, g.seed);
    const PartitionStats st = partition_stats(r.mapping);

    ArtifactWriter w(g, "merge", {{"target_avg", target_avg}});
    w.manifest["target_unreachable"] = r.target_unreachable;
    w.manifest["stats"] = {{"community_count", st.community_count},
                           {"mean_size", st.mean_size},
                           {"std_dev_size", st.std_dev_size},
                           {"min_size", st.min_size},
                           {"max_size", st.max_size}};
    {
        auto out = w.open("mapping.csv");
        write_mapping_csv(out, graph, r.mapping, w.config_json);
    }
    {
        auto out = w.open("stats.csv");
        write_partition_stats_csv(out, st, w.config_json);
    }
    w.finish();
    if (r.target_unreachable) {
        std::cout << "merge: target unreachable, stopped at " << st.community_count
                  << " communities\n";
    } else {
        std::cout << "merge: " << st.community_count << " communities, mean " << st.mean_size
                  << "\n";
    }
    return 0;
}

int cmd_project(const GlobalOptions& g) {
    SocialGraph graph = load_edges_required(g);
    Mapping m = load_mapping_required(g, graph);
    ProjectionGraph pg = build_projection(graph, m);
    EdgeBalance balance = edge_balance_report(pg);

    ArtifactWriter w(g, "project", {});
    w.manifest["pg"] = {{"peers", pg.peer_count()},
                        {"edges", pg.edge_count()},
                        {"total_weight", pg.total_edge_weight()},
                        {"total_intra_edges", pg.total_intra_edges()}};
    w.manifest["edge_balance"] = {{"avg_intra_per_peer", balance.avg_intra_per_peer},
                                  {"avg_inter_per_edge", balance.avg_inter_per_edge},
                                  {"no_pg_edges", balance.no_pg_edges}};
    {
        auto out = w.open("pg_edges.csv");
        write_pg_csv(out, pg, w.config_json);
    }
    {
        auto out = w.open("pg_peers.csv");
        write_pg_peers_csv(out, pg, w.config_json);
    }
    w.finish();
    std::cout << "project: " << pg.peer_count() << " peers, " << pg.edge_count() << " PG edges\n";
    return 0;
}

int cmd_centrality(const GlobalOptions& g, const std::string& metric_s,
                   const std::string& distance_s, bool normalize, bool cumulative) {
    SocialGraph graph = load_edges_required(g);
    const Metric metric = parse_metric(metric_s);
    const bool have_mapping = !g.mapping.empty();
    DistanceMode mode;
    if (distance_s == "auto") {
        mode = have_mapping ? DistanceMode::inverse_weight : DistanceMode::unit;
    } else {
        mode = parse_distance(distance_s);
        if (!have_mapping && mode != DistanceMode::unit) {
            throw ValidationError("SG paths are always unit; inverse_weight needs --mapping");
        }
    }
    if (cumulative && !have_mapping) {
        throw ValidationError("--cumulative needs --mapping");
    }
    const int threads = g.resolved_threads();

    CentralityVector cv;
    if (!have_mapping) {
        switch (metric) {
            case Metric::degree: cv = degree_centrality(graph, normalize); break;
            case Metric::node_betweenness: cv = node_betweenness(graph, normalize, threads); break;
            case Metric::edge_betweenness: cv = edge_betweenness(graph, normalize, threads); break;
        }
    } else {
        Mapping m = load_mapping_required(g, graph);
        if (cumulative) {
            CentralityVector user_side;
            switch (metric) {
                case Metric::degree: user_side = degree_centrality(graph, normalize); break;
                case Metric::node_betweenness:
                    user_side = node_betweenness(graph, normalize, threads);
                    break;
                case Metric::edge_betweenness:
                    user_side = edge_betweenness(graph, normalize, threads);
                    break;
            }
            cv = cumulative_estimate(user_side, m);
        } else {
            ProjectionGraph pg = build_projection(graph, m);
            switch (metric) {
                case Metric::degree: cv = degree_centrality(pg, normalize); break;
                case Metric::node_betweenness:
                    cv = node_betweenness(pg, mode, normalize, threads);
                    break;
                case Metric::edge_betweenness:
                    cv = edge_betweenness(pg, mode, normalize, threads);
                    break;
            }
        }
    }

    json config{{"metric", metric_s},
                {"distance_mode", to_string(mode)},
                {"normalize", normalize},
                {"cumulative", cumulative}};
    ArtifactWriter w(g, "centrality", config);
    w.manifest["scope"] = to_string(cv.scope);
    w.manifest["degenerate"] = cv.degenerate;
    {
        auto out = w.open("centrality.csv");
        write_centrality_csv(out, cv, &graph, w.config_json);
    }
    w.finish();
    std::cout << "centrality: " << to_string(cv.metric) << " over " << to_string(cv.scope) << ", "
              << cv.size() << " scores\n";
    return 0;
}

int cmd_correlate(const GlobalOptions& g, std::vector<std::uint32_t> targets,
                  std::vector<std::string> metric_names) {
    SocialGraph graph = load_edges_required(g);
    Mapping base = load_mapping_required(g, graph);
    if (targets.empty()) targets = default_sweep_targets();
    std::vector<Metric> metrics;
    if (metric_names.empty()) {
        metrics = {Metric::degree, Metric::node_betweenness, Metric::edge_betweenness};
    } else {
        for (const auto& name : metric_names) metrics.push_back(parse_metric(name));
    }
    SweepResult sweep =
        correlation_sweep(graph, base, targets, metrics, g.seed, g.resolved_threads());

    json config{{"targets", targets}, {"metrics", metric_names.empty()
                                                       ? std::vector<std::string>{"degree",
                                                                                  "node_betweenness",
                                                                                  "edge_betweenness"}
                                                       : metric_names}};
    ArtifactWriter w(g, "correlate", config);
    json turning = json::array();
    for (const auto& tp : sweep.turning_points) {
        turning.push_back({{"metric", to_string(tp.metric)},
                           {"distance_mode", to_string(tp.distance)},
                           {"target_size", tp.target_size},
                           {"avg_size", tp.avg_community_size},
                           {"mean_peer_score", tp.mean_peer_score}});
    }
    w.manifest["turning_points"] = turning;
    {
        auto out = w.open("sweep.csv");
        write_sweep_csv(out, sweep.correlations, w.config_json);
    }
    {
        auto out = w.open("curves.csv");
        write_curves_csv(out, sweep.curves, w.config_json);
    }
    w.finish();
    std::cout << "correlate: " << sweep.correlations.size() << " points over " << targets.size()
              << " targets\n";
    return 0;
}

int cmd_search(const GlobalOptions& g, const std::string& workload_s,
               std::vector<std::string> technique_names, int n_percent, double s_fraction,
               double d_fraction, const std::string& layer_s, const std::string& distance_s) {
    SocialGraph graph = load_edges_required(g);
    Mapping m = load_mapping_required(g, graph);

    ExperimentConfig cfg;
    cfg.seed = g.seed;
    cfg.threads = g.resolved_threads();
    cfg.s_fraction = s_fraction;
    cfg.d_fraction = d_fraction;
    cfg.distance = distance_s == "auto" ? DistanceMode::inverse_weight : parse_distance(distance_s);
    if (workload_s == "person_finder") {
        cfg.workload.kind = WorkloadKind::person_finder;
    } else if (workload_s == "team_builder") {
        cfg.workload.kind = WorkloadKind::team_builder;
    } else {
        throw ValidationError("unknown workload: " + workload_s);
    }
    if (layer_s == "sg") {
        cfg.layers = {Layer::sg};
    } else if (layer_s == "pg") {
        cfg.layers = {Layer::pg};
    } else if (layer_s == "both") {
        cfg.layers = {Layer::sg, Layer::pg};
    } else {
        throw ValidationError("unknown layer: " + layer_s);
    }
    if (technique_names.empty()) {
        technique_names = {"peer_degree", "peer_betweenness", "pg_edge_betweenness", "random"};
    }
    for (const auto& name : technique_names) {
        cfg.techniques.push_back({parse_technique(name), n_percent});
    }

    ExperimentResult result = run_experiment(graph, m, cfg);

    json config{{"workload", workload_s},   {"techniques", technique_names},
                {"n_percent", n_percent},   {"s_fraction", s_fraction},
                {"d_fraction", d_fraction}, {"layer", layer_s},
                {"distance_mode", to_string(cfg.distance)}};
    ArtifactWriter w(g, "search", config);
    w.manifest["queries"] = result.sources.size();
    w.manifest["team_size"] = result.team_size;
    {
        auto out = w.open("outcomes.csv");
        write_outcomes_csv(out, result.rows, w.config_json);
    }
    {
        auto out = w.open("summary.csv");
        write_summary_csv(out, result.summaries, w.config_json);
    }
    w.finish();
    for (const auto& s : result.summaries) {
        std::cout << "search: " << to_string(s.workload) << " " << to_string(s.technique) << " @"
                  << to_string(s.layer) << " N=" << s.n_percent
                  << " success_rate=" << s.success_rate << " p50_hops=" << s.hops_p50 << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"projection-graph analytics and socially-informed search simulation"};
    app.set_version_flag("--version", kVersion);
    app.fallthrough();
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--edges", g.edges, "edge-list file (SNAP text format)");
    app.add_option("--mapping", g.mapping, "user->peer mapping CSV");
    app.add_option("--groups", g.groups, "group membership file (group_id<TAB>user_id)");
    app.add_option("--seed", g.seed, "random seed recorded in all outputs");
    app.add_option("--out", g.out_dir, "output directory")->required();
    app.add_option("--threads", g.threads, "worker threads (default: all cores)");

    auto* lcc = app.add_subcommand("lcc", "extract the largest connected component");

    std::uint32_t max_size = 0;
    auto* communities =
        app.add_subcommand("communities", "Louvain / Recursive-Louvain community detection");
    communities->add_option("--max-size", max_size,
                            "recursively split communities above this size (0: plain Louvain)");

    std::uint32_t target_avg = 0;
    auto* merge = app.add_subcommand("merge", "merge communities up to a target average size");
    merge->add_option("--target-avg", target_avg, "target average users per community")->required();

    auto* project = app.add_subcommand("project", "build the weighted projection graph");

    std::string metric = "degree";
    std::string distance = "auto";
    bool normalize = false;
    bool cumulative = false;
    auto* centrality = app.add_subcommand("centrality", "degree / betweenness centrality");
    centrality->add_option("--metric", metric, "degree|node_betweenness|edge_betweenness");
    centrality->add_option("--distance-mode", distance, "unit|inverse_weight (default: auto)");
    centrality->add_flag("--normalize", normalize, "Freeman-normalize scores");
    centrality->add_flag("--cumulative", cumulative,
                         "sum user (SG edge) scores per peer (PG edge) instead of PG scores");

    std::vector<std::uint32_t> targets;
    std::vector<std::string> metric_names;
    auto* correlate = app.add_subcommand("correlate", "user-vs-peer correlation sweep");
    correlate->add_option("--targets", targets, "ascending average community sizes")
        ->delimiter(',');
    correlate->add_option("--metrics", metric_names, "subset of metrics to sweep")->delimiter(',');

    std::string workload = "person_finder";
    std::vector<std::string> technique_names;
    int n_percent = 20;
    double s_fraction = 0.1;
    double d_fraction = 0.01;
    std::string layer = "sg";
    std::string search_distance = "auto";
    auto* search = app.add_subcommand("search", "simulate socially-informed search");
    search->add_option("--workload", workload, "person_finder|team_builder");
    search->add_option("--technique", technique_names,
                       "peer_degree|peer_betweenness|pg_edge_betweenness|random (repeatable)")
        ->delimiter(',');
    search->add_option("--n-percent", n_percent, "top-N% fan-out per hop");
    search->add_option("--s-fraction", s_fraction, "queries as a fraction of |V|");
    search->add_option("--d-fraction", d_fraction, "team size as a fraction of |V|");
    search->add_option("--layer", layer, "sg|pg|both");
    search->add_option("--distance-mode", search_distance, "PG ranking distance mode");

    CLI11_PARSE(app, argc, argv);

    try {
        if (lcc->parsed()) return cmd_lcc(g);
        if (communities->parsed()) return cmd_communities(g, max_size);
        if (merge->parsed()) return cmd_merge(g, target_avg);
        if (project->parsed()) return cmd_project(g);
        if (centrality->parsed()) return cmd_centrality(g, metric, distance, normalize, cumulative);
        if (correlate->parsed()) return cmd_correlate(g, targets, metric_names);
        if (search->parsed()) {
            return cmd_search(g, workload, technique_names, n_percent, s_fraction, d_fraction,
                              layer, search_distance);
        }
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
