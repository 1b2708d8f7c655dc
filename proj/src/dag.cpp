#include "pbna/dag.hpp"

#include "pbna/errors.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <queue>
#include <sstream>

namespace pbna {

NodeId ScenarioBuilder::add_node(std::string_view name) {
    std::string key(name);
    if (node_index_.contains(key)) throw ModelViolation("duplicate node '" + key + "'");
    const auto id = static_cast<NodeId>(node_names_.size());
    node_names_.push_back(key);
    node_index_.emplace(std::move(key), id);
    return id;
}

NodeId ScenarioBuilder::node(std::string_view name) {
    if (auto it = node_index_.find(std::string(name)); it != node_index_.end()) return it->second;
    return add_node(name);
}

EdgeId ScenarioBuilder::add_edge(std::string_view name, NodeId tail, NodeId head) {
    std::string key(name);
    if (edge_index_.contains(key)) throw ModelViolation("duplicate edge id '" + key + "'");
    if (tail >= node_names_.size() || head >= node_names_.size()) throw ModelViolation("edge '" + key + "' refers to an unknown node");
    if (tail == head) throw ModelViolation("edge '" + key + "' is a self-loop");
    const auto id = static_cast<EdgeId>(edges_.size());
    edges_.push_back(Edge{id, tail, head, key});
    edge_index_.emplace(std::move(key), id);
    return id;
}

EdgeId ScenarioBuilder::add_edge(NodeId tail, NodeId head) {
    return add_edge("e" + std::to_string(edges_.size()), tail, head);
}

void ScenarioBuilder::set_session(int index, NodeId sender, NodeId receiver) {
    if (index < 0 || index > 2) throw ModelViolation("session index must be 1..3");
    const auto i = static_cast<std::size_t>(index);
    if (session_set_[i]) throw ModelViolation("session " + std::to_string(index + 1) + " defined twice");
    senders_[i] = sender;
    receivers_[i] = receiver;
    session_set_[i] = true;
}

Scenario ScenarioBuilder::build() const {
    Scenario sc;
    sc.node_names_ = node_names_;
    sc.edges_ = edges_;
    const std::size_t n = node_names_.size();
    const std::size_t m = edges_.size();
    sc.out_.assign(n, {});
    sc.in_.assign(n, {});
    for (const Edge& e : edges_) {
        sc.out_[e.tail].push_back(e.id);
        sc.in_[e.head].push_back(e.id);
    }

    // Kahn over edges: an edge is ready once every edge into its tail is placed.
    std::vector<std::size_t> pending(m);
    std::priority_queue<EdgeId, std::vector<EdgeId>, std::greater<>> ready;
    for (const Edge& e : edges_) {
        pending[e.id] = sc.in_[e.tail].size();
        if (pending[e.id] == 0) ready.push(e.id);
    }
    sc.order_.reserve(m);
    while (!ready.empty()) {
        const EdgeId e = ready.top();
        ready.pop();
        sc.order_.push_back(e);
        for (EdgeId next : sc.out_[edges_[e].head])
            if (--pending[next] == 0) ready.push(next);
    }
    if (sc.order_.size() != m) throw ModelViolation("graph contains a directed cycle");
    sc.position_.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) sc.position_[sc.order_[i]] = i;

    for (int i = 0; i < 3; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const std::string label = "session " + std::to_string(i + 1);
        if (!session_set_[k]) throw ModelViolation(label + " is missing");
        const NodeId s = senders_[k];
        const NodeId d = receivers_[k];
        if (s >= n || d >= n) throw ModelViolation(label + " refers to an unknown node");
        if (!sc.in_[s].empty()) throw ModelViolation(label + ": sender '" + node_names_[s] + "' has incoming edges");
        if (sc.out_[s].size() != 1)
            throw ModelViolation(label + ": sender '" + node_names_[s] + "' must have exactly one outgoing edge");
        if (!sc.out_[d].empty()) throw ModelViolation(label + ": receiver '" + node_names_[d] + "' has outgoing edges");
        if (sc.in_[d].size() != 1)
            throw ModelViolation(label + ": receiver '" + node_names_[d] + "' must have exactly one incoming edge");
        sc.sessions_[k] = Session{s, d, sc.out_[s].front(), sc.in_[d].front()};
    }
    std::vector<EdgeId> terminal;
    for (const Session& s : sc.sessions_) {
        terminal.push_back(s.sender_edge);
        terminal.push_back(s.receiver_edge);
    }
    std::sort(terminal.begin(), terminal.end());
    if (std::adjacent_find(terminal.begin(), terminal.end()) != terminal.end())
        throw ModelViolation("sender and receiver edges must be pairwise distinct");

    sc.incoming_pairs_.assign(m, {});
    for (EdgeId e = 0; e < m; ++e) {
        for (EdgeId prev : sc.in_[edges_[e].tail]) {
            sc.incoming_pairs_[e].push_back(static_cast<std::uint32_t>(sc.pairs_.size()));
            sc.pairs_.push_back(AdjacentPair{prev, e});
        }
    }
    return sc;
}

EdgeSet Scenario::reachable_edges(EdgeId e, Direction dir) const {
    EdgeSet seen(edges_.size(), 0);
    std::deque<EdgeId> queue{e};
    seen[e] = 1;
    while (!queue.empty()) {
        const EdgeId cur = queue.front();
        queue.pop_front();
        const auto next = dir == Direction::Forward ? successors(cur) : predecessors(cur);
        for (EdgeId n : next) {
            if (seen[n]) continue;
            seen[n] = 1;
            queue.push_back(n);
        }
    }
    return seen;
}

bool Scenario::reaches(EdgeId src, EdgeId dst, const EdgeSet* removed) const {
    auto blocked = [&](EdgeId e) { return removed != nullptr && (*removed)[e] != 0; };
    if (blocked(src) || blocked(dst)) return false;
    if (src == dst) return true;
    EdgeSet seen(edges_.size(), 0);
    std::deque<EdgeId> queue{src};
    seen[src] = 1;
    while (!queue.empty()) {
        const EdgeId cur = queue.front();
        queue.pop_front();
        for (EdgeId n : successors(cur)) {
            if (seen[n] || blocked(n)) continue;
            if (n == dst) return true;
            seen[n] = 1;
            queue.push_back(n);
        }
    }
    return false;
}

std::string Scenario::to_text() const {
    std::ostringstream out;
    for (const std::string& name : node_names_) out << "node " << name << '\n';
    for (const Edge& e : edges_) out << "edge " << e.name << ' ' << node_names_[e.tail] << ' ' << node_names_[e.head] << '\n';
    for (int i = 0; i < 3; ++i)
        out << "session " << i + 1 << ' ' << node_names_[session(i).sender] << ' ' << node_names_[session(i).receiver] << '\n';
    return out.str();
}

Scenario parse_scenario(std::string_view text) {
    ScenarioBuilder builder;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream tokens(line);
        std::vector<std::string> words;
        for (std::string w; tokens >> w;) words.push_back(w);
        if (words.empty()) continue;

        const std::string& kw = words[0];
        if (kw == "node") {
            if (words.size() != 2) throw ParseError(lineno, "expected 'node <name>'");
            builder.node(words[1]);
        } else if (kw == "edge") {
            if (words.size() != 4) throw ParseError(lineno, "expected 'edge <id> <tail> <head>'");
            const NodeId tail = builder.node(words[2]);
            const NodeId head = builder.node(words[3]);
            builder.add_edge(words[1], tail, head);
        } else if (kw == "session") {
            if (words.size() != 4) throw ParseError(lineno, "expected 'session <i> <sender> <receiver>'");
            int index = 0;
            try {
                std::size_t used = 0;
                index = std::stoi(words[1], &used);
                if (used != words[1].size()) throw std::invalid_argument(words[1]);
            } catch (const std::logic_error&) {
                throw ParseError(lineno, "session index '" + words[1] + "' is not an integer");
            }
            if (index < 1 || index > 3) throw ParseError(lineno, "session index must be 1, 2 or 3");
            const NodeId s = builder.node(words[2]);
            const NodeId d = builder.node(words[3]);
            builder.set_session(index - 1, s, d);
        } else {
            throw ParseError(lineno, "unknown keyword '" + kw + "'");
        }
    }
    return builder.build();
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

} // namespace pbna
