#pragma once

// Bottlenecks, the alpha/beta edges, unit-capacity min-cuts and the
// parallel-edges predicate.

#include "pbna/dag.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace pbna {

/// Edges lying on every directed path src ~> dst, in topological order.
struct BottleneckSet {
    EdgeId src = 0;
    EdgeId dst = 0;
    std::vector<EdgeId> members;

    bool contains(EdgeId e) const;
};

/// Frontier sweep over the edges between src and dst; a single-edge frontier
/// is a bottleneck. Empty when src does not reach dst.
BottleneckSet bottleneck_set(const Scenario& sc, EdgeId src, EdgeId dst);

/// Memoizes bottleneck sets of one scenario.
class BottleneckCache {
public:
    explicit BottleneckCache(const Scenario& sc) : sc_(sc) {}
    const BottleneckSet& get(EdgeId src, EdgeId dst);
    /// C_{ij}: sigma_i to tau_j, 0-based.
    const BottleneckSet& sessions(int i, int j) { return get(sc_.sigma(i), sc_.tau(j)); }
    const Scenario& scenario() const { return sc_; }

private:
    const Scenario& sc_;
    std::map<std::pair<EdgeId, EdgeId>, BottleneckSet> cache_;
};

struct AlphaBeta {
    int i = 0, j = 0, k = 0;  // 0-based session indices
    EdgeId alpha = 0;
    EdgeId beta = 0;
};

/// alpha_ijk: last common edge of C_ij and C_ik. Throws Disconnected when
/// sigma_i misses tau_j or tau_k.
EdgeId alpha_edge(BottleneckCache& cache, int i, int j, int k);

/// alpha_ijk, and beta_ijk = first common edge of C_jk and C_{alpha_ijk, tau_k}.
/// Throws Disconnected when a required path is missing.
AlphaBeta alpha_beta(BottleneckCache& cache, int i, int j, int k);
AlphaBeta alpha_beta(const Scenario& sc, int i, int j, int k);

/// Maximum number of edge-disjoint paths from the tails of `sources` to the
/// heads of `sinks`, each source and sink admitting one unit. Meant for
/// sender and receiver edges.
int min_cut(const Scenario& sc, std::span<const EdgeId> sources, std::span<const EdgeId> sinks);

/// Min-cut between {sigma_a, sigma_b} and {tau_c, tau_d}, 0-based.
int session_min_cut(const Scenario& sc, int a, int b, int c, int d);

/// Neither edge reaches the other. Throws std::invalid_argument for e1 == e2.
bool parallel(const Scenario& sc, EdgeId e1, EdgeId e2);

} // namespace pbna
