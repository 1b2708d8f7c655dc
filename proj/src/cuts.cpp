#include "pbna/cuts.hpp"

#include "pbna/errors.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

namespace pbna {

bool BottleneckSet::contains(EdgeId e) const { return std::find(members.begin(), members.end(), e) != members.end(); }

BottleneckSet bottleneck_set(const Scenario& sc, EdgeId src, EdgeId dst) {
    BottleneckSet out{src, dst, {}};
    if (!sc.reaches(src, dst)) return out;
    const EdgeSet fwd = sc.reachable_edges(src, Direction::Forward);
    const EdgeSet bwd = sc.reachable_edges(dst, Direction::Backward);
    auto between = [&](EdgeId e) { return fwd[e] && bwd[e]; };

    EdgeSet frontier(sc.edge_count(), 0);
    std::size_t size = 1;
    frontier[src] = 1;
    const auto order = sc.topological_order();
    for (std::size_t pos = sc.position(src); pos <= sc.position(dst); ++pos) {
        const EdgeId e = order[pos];
        if (!frontier[e]) continue;
        // Every src ~> dst path crosses the frontier, so a lone member is a bottleneck.
        if (size == 1) out.members.push_back(e);
        frontier[e] = 0;
        --size;
        for (EdgeId next : sc.successors(e)) {
            if (!between(next) || frontier[next]) continue;
            frontier[next] = 1;
            ++size;
        }
    }
    return out;
}

const BottleneckSet& BottleneckCache::get(EdgeId src, EdgeId dst) {
    auto key = std::make_pair(src, dst);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, bottleneck_set(sc_, src, dst)).first;
    return it->second;
}

namespace {

std::string session_pair(int i, int j) { return "sigma" + std::to_string(i + 1) + " does not reach tau" + std::to_string(j + 1); }

} // namespace

EdgeId alpha_edge(BottleneckCache& cache, int i, int j, int k) {
    const BottleneckSet& cij = cache.sessions(i, j);
    const BottleneckSet& cik = cache.sessions(i, k);
    if (cij.members.empty()) throw Disconnected(session_pair(i, j));
    if (cik.members.empty()) throw Disconnected(session_pair(i, k));
    // Both lists are in topological order; take the latest shared edge.
    for (auto it = cij.members.rbegin(); it != cij.members.rend(); ++it)
        if (cik.contains(*it)) return *it;
    throw Disconnected("no common bottleneck");  // unreachable: sigma_i is shared
}

AlphaBeta alpha_beta(BottleneckCache& cache, int i, int j, int k) {
    const Scenario& sc = cache.scenario();
    AlphaBeta ab{i, j, k, alpha_edge(cache, i, j, k), 0};
    const BottleneckSet& cjk = cache.sessions(j, k);
    if (cjk.members.empty()) throw Disconnected(session_pair(j, k));
    const BottleneckSet& tail = cache.get(ab.alpha, sc.tau(k));
    for (EdgeId e : cjk.members)
        if (tail.contains(e)) {
            ab.beta = e;
            return ab;
        }
    throw Disconnected("no common bottleneck");  // unreachable: tau_k is shared
}

AlphaBeta alpha_beta(const Scenario& sc, int i, int j, int k) {
    BottleneckCache cache(sc);
    return alpha_beta(cache, i, j, k);
}

int min_cut(const Scenario& sc, std::span<const EdgeId> sources, std::span<const EdgeId> sinks) {
    // Residual graph over the original nodes plus a super-source and super-sink.
    struct Arc {
        std::uint32_t to;
        int cap;
    };
    const auto n = static_cast<std::uint32_t>(sc.node_count());
    const std::uint32_t s = n;
    const std::uint32_t t = n + 1;
    std::vector<Arc> arcs;
    std::vector<std::vector<std::uint32_t>> adj(n + 2);
    auto add = [&](std::uint32_t u, std::uint32_t v) {
        adj[u].push_back(static_cast<std::uint32_t>(arcs.size()));
        arcs.push_back({v, 1});
        adj[v].push_back(static_cast<std::uint32_t>(arcs.size()));
        arcs.push_back({u, 0});
    };
    for (const Edge& e : sc.edges()) add(e.tail, e.head);
    for (EdgeId e : sources) add(s, sc.edge(e).tail);
    for (EdgeId e : sinks) add(sc.edge(e).head, t);

    int flow = 0;
    std::vector<std::int64_t> via(n + 2);
    for (;;) {
        std::fill(via.begin(), via.end(), -1);
        std::deque<std::uint32_t> queue{s};
        via[s] = -2;
        while (!queue.empty() && via[t] == -1) {
            const std::uint32_t u = queue.front();
            queue.pop_front();
            for (std::uint32_t a : adj[u]) {
                if (arcs[a].cap == 0 || via[arcs[a].to] != -1) continue;
                via[arcs[a].to] = a;
                queue.push_back(arcs[a].to);
            }
        }
        if (via[t] == -1) return flow;
        for (std::uint32_t v = t; v != s;) {
            const auto a = static_cast<std::uint32_t>(via[v]);
            arcs[a].cap -= 1;
            arcs[a ^ 1].cap += 1;
            v = arcs[a ^ 1].to;
        }
        ++flow;
    }
}

int session_min_cut(const Scenario& sc, int a, int b, int c, int d) {
    const EdgeId src[] = {sc.sigma(a), sc.sigma(b)};
    const EdgeId dst[] = {sc.tau(c), sc.tau(d)};
    return min_cut(sc, src, dst);
}

bool parallel(const Scenario& sc, EdgeId e1, EdgeId e2) {
    if (e1 == e2) throw std::invalid_argument("parallel: edges must differ");
    return !sc.reaches(e1, e2) && !sc.reaches(e2, e1);
}

} // namespace pbna
