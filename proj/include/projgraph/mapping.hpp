#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "projgraph/errors.hpp"
#include "projgraph/social_graph.hpp"

namespace projgraph {

using PeerId = std::uint32_t;

/// Total assignment of every user to exactly one peer. Peer ids are dense in
/// [0, peer_count) and every peer holds at least one user.
struct Mapping {
    std::vector<PeerId> peer_of;  // user -> peer
    PeerId peer_count = 0;

    std::size_t user_count() const { return peer_of.size(); }

    /// Relabels arbitrary community labels to dense peer ids, assigned in
    /// order of first occurrence when scanning users ascending (so the peer
    /// containing the smallest user id is peer 0).
    template <class Label>
    static Mapping from_labels(const std::vector<Label>& labels) {
        Mapping m;
        m.peer_of.resize(labels.size());
        std::unordered_map<Label, PeerId> dense;
        dense.reserve(labels.size());
        for (std::size_t u = 0; u < labels.size(); ++u) {
            m.peer_of[u] = dense.emplace(labels[u], static_cast<PeerId>(dense.size())).first->second;
        }
        m.peer_count = static_cast<PeerId>(dense.size());
        return m;
    }

    static Mapping singletons(std::size_t n) {
        Mapping m;
        m.peer_of.resize(n);
        for (std::size_t u = 0; u < n; ++u) m.peer_of[u] = static_cast<PeerId>(u);
        m.peer_count = static_cast<PeerId>(n);
        return m;
    }

    static Mapping all_on_one(std::size_t n) {
        Mapping m;
        m.peer_of.assign(n, 0);
        m.peer_count = n > 0 ? 1 : 0;
        return m;
    }

    std::vector<std::uint32_t> sizes() const {
        std::vector<std::uint32_t> s(peer_count, 0);
        for (PeerId p : peer_of) ++s[p];
        return s;
    }

    /// Member lists per peer (the Γ_i sets), each sorted ascending.
    std::vector<std::vector<NodeId>> members() const {
        std::vector<std::vector<NodeId>> out(peer_count);
        for (NodeId u = 0; u < peer_of.size(); ++u) out[peer_of[u]].push_back(u);
        return out;
    }

    /// Checks totality over a graph of `n` users, dense ids, no empty peer.
    void validate(std::size_t n) const {
        if (peer_of.size() != n) {
            throw ValidationError("mapping covers " + std::to_string(peer_of.size()) +
                                  " users, graph has " + std::to_string(n));
        }
        std::vector<bool> seen(peer_count, false);
        for (PeerId p : peer_of) {
            if (p >= peer_count) throw ValidationError("peer id out of range");
            seen[p] = true;
        }
        for (PeerId p = 0; p < peer_count; ++p) {
            if (!seen[p]) throw ValidationError("peer " + std::to_string(p) + " has no users");
        }
    }
};

/// Summary statistics of community sizes (population standard deviation).
struct PartitionStats {
    std::uint32_t community_count = 0;
    double mean_size = 0.0;
    double std_dev_size = 0.0;
    std::uint32_t min_size = 0;
    std::uint32_t max_size = 0;
};

inline PartitionStats partition_stats(const Mapping& m) {
    PartitionStats st;
    st.community_count = m.peer_count;
    if (m.peer_count == 0) return st;
    const auto sizes = m.sizes();
    st.min_size = *std::min_element(sizes.begin(), sizes.end());
    st.max_size = *std::max_element(sizes.begin(), sizes.end());
    double sum = 0.0;
    for (auto s : sizes) sum += s;
    st.mean_size = sum / static_cast<double>(sizes.size());
    double var = 0.0;
    for (auto s : sizes) {
        const double d = static_cast<double>(s) - st.mean_size;
        var += d * d;
    }
    st.std_dev_size = std::sqrt(var / static_cast<double>(sizes.size()));
    return st;
}

}  // namespace projgraph
