#pragma once

// Test-only helpers: random scenarios and brute-force oracles.

#include "pbna/cuts.hpp"
#include "pbna/dag.hpp"
#include "pbna/feasibility.hpp"

#include "pbna/errors.hpp"

#include <algorithm>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace pbna::testing {

struct RandomShape {
    int max_relays = 8;
    int max_internal_edges = 12;
    bool full_connectivity = false;
};

/// Relay nodes v0..v(r-1) in index order, internal edges from lower to higher
/// index (parallel edges allowed), plus sender and receiver edges.
inline Scenario random_scenario(std::mt19937_64& rng, const RandomShape& shape) {
    std::uniform_int_distribution<int> relays_dist(2, shape.max_relays);
    for (;;) {
        const int relays = relays_dist(rng);
        std::uniform_int_distribution<int> edges_dist(1, shape.max_internal_edges);
        const int internal = edges_dist(rng);
        ScenarioBuilder b;
        std::vector<NodeId> v;
        for (int i = 0; i < relays; ++i) v.push_back(b.add_node("v" + std::to_string(i)));
        std::uniform_int_distribution<int> pick(0, relays - 1);
        for (int e = 0; e < internal; ++e) {
            int a = pick(rng);
            int c = pick(rng);
            while (c == a) c = pick(rng);
            if (a > c) std::swap(a, c);
            b.add_edge(v[static_cast<std::size_t>(a)], v[static_cast<std::size_t>(c)]);
        }
        for (int i = 0; i < 3; ++i) {
            const NodeId s = b.add_node("s" + std::to_string(i + 1));
            const NodeId d = b.add_node("d" + std::to_string(i + 1));
            b.add_edge("sigma" + std::to_string(i + 1), s, v[static_cast<std::size_t>(pick(rng))]);
            b.add_edge("tau" + std::to_string(i + 1), v[static_cast<std::size_t>(pick(rng))], d);
            b.set_session(i, s, d);
        }
        Scenario sc = b.build();
        if (shape.full_connectivity && !fully_connected(connectivity(sc))) continue;
        return sc;
    }
}

/// Adds `extra` random relay-to-relay edges that keep the graph acyclic.
/// Sender and receiver nodes are left alone; session i becomes session perm[i].
inline Scenario perturbed(const Scenario& sc, std::mt19937_64& rng, int extra, std::array<int, 3> perm = {0, 1, 2}) {
    std::vector<char> terminal(sc.node_count(), 0);
    for (int i = 0; i < 3; ++i) terminal[sc.session(i).sender] = terminal[sc.session(i).receiver] = 1;
    std::vector<NodeId> relays;
    for (NodeId v = 0; v < sc.node_count(); ++v)
        if (!terminal[v]) relays.push_back(v);
    std::uniform_int_distribution<std::size_t> pick(0, relays.size() - 1);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        ScenarioBuilder b;
        for (NodeId v = 0; v < sc.node_count(); ++v) b.add_node(sc.node_name(v));
        for (const Edge& e : sc.edges()) b.add_edge(e.name, e.tail, e.head);
        for (int k = 0; k < extra; ++k) {
            const NodeId u = relays[pick(rng)], w = relays[pick(rng)];
            if (u != w) b.add_edge("extra" + std::to_string(k), u, w);
        }
        for (int i = 0; i < 3; ++i) {
            const Session& from = sc.session(perm[static_cast<std::size_t>(i)]);
            b.set_session(i, from.sender, from.receiver);
        }
        try {
            return b.build();
        } catch (const ModelViolation&) {
            // cycle; draw again
        }
    }
    return sc;
}

/// At most 12 edges and 8 nodes in total: two relays joined by parallel edges.
inline RandomShape strict_shape(bool full) { return RandomShape{2, 6, full}; }
/// Up to 8 relays and 12 relay-to-relay edges besides the 6 terminal edges.
inline RandomShape wide_shape(bool full) { return RandomShape{8, 12, full}; }

/// Edges whose removal cuts every src ~> dst path, in topological order.
inline std::vector<EdgeId> brute_bottlenecks(const Scenario& sc, EdgeId src, EdgeId dst) {
    std::vector<EdgeId> out;
    if (!sc.reaches(src, dst)) return out;
    for (EdgeId e : sc.topological_order()) {
        EdgeSet removed(sc.edge_count(), 0);
        removed[e] = 1;
        if (!sc.reaches(src, dst, &removed)) out.push_back(e);
    }
    return out;
}

inline bool disconnects(const Scenario& sc, std::span<const EdgeId> sources, std::span<const EdgeId> sinks, const EdgeSet& removed) {
    for (EdgeId s : sources)
        for (EdgeId t : sinks)
            if (sc.reaches(s, t, &removed)) return false;
    return true;
}

/// Smallest edge set separating the sources from the sinks (searched up to size 2).
inline int brute_min_cut(const Scenario& sc, std::span<const EdgeId> sources, std::span<const EdgeId> sinks) {
    const std::size_t m = sc.edge_count();
    EdgeSet removed(m, 0);
    if (disconnects(sc, sources, sinks, removed)) return 0;
    for (std::size_t a = 0; a < m; ++a) {
        removed[a] = 1;
        if (disconnects(sc, sources, sinks, removed)) return 1;
        removed[a] = 0;
    }
    return 2;
}

/// Last common element of two lists given in topological order.
inline EdgeId brute_alpha(const Scenario& sc, int i, int j, int k) {
    const auto a = brute_bottlenecks(sc, sc.sigma(i), sc.tau(j));
    const auto b = brute_bottlenecks(sc, sc.sigma(i), sc.tau(k));
    EdgeId best = 0;
    bool found = false;
    for (EdgeId e : a)
        if (std::find(b.begin(), b.end(), e) != b.end()) best = e, found = true;
    if (!found) throw Disconnected("no common bottleneck");
    return best;
}

inline EdgeId brute_beta(const Scenario& sc, int i, int j, int k) {
    const EdgeId alpha = brute_alpha(sc, i, j, k);
    const auto a = brute_bottlenecks(sc, sc.sigma(j), sc.tau(k));
    const auto b = brute_bottlenecks(sc, alpha, sc.tau(k));
    for (EdgeId e : a)
        if (std::find(b.begin(), b.end(), e) != b.end()) return e;
    throw Disconnected("no common bottleneck");
}

inline std::string corpus_path(const std::string& name) { return std::string(PBNA_CORPUS_DIR) + "/" + name; }
inline Scenario corpus(const std::string& name) { return load_scenario(corpus_path(name)); }

} // namespace pbna::testing
