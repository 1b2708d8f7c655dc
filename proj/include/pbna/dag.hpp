#pragma once

// The three-unicast scenario: a DAG whose edges are the primary objects,
// plus three sessions each attached by a single sender edge and a single
// receiver edge.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pbna {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
    EdgeId id = 0;
    NodeId tail = 0;
    NodeId head = 0;
    std::string name;
};

struct Session {
    NodeId sender = 0;
    NodeId receiver = 0;
    EdgeId sender_edge = 0;    // sigma_i
    EdgeId receiver_edge = 0;  // tau_i
};

/// Membership mask over edge ids.
using EdgeSet = std::vector<char>;

enum class Direction { Forward, Backward };

/// Index of an adjacent edge pair (e_in, e_out) with head(e_in) = tail(e_out);
/// one coding coefficient per pair.
struct AdjacentPair {
    EdgeId from = 0;
    EdgeId to = 0;
};

class Scenario;

/// Incremental construction; build() validates the model assumptions.
class ScenarioBuilder {
public:
    NodeId add_node(std::string_view name);
    /// Node with this name, creating it if needed.
    NodeId node(std::string_view name);
    EdgeId add_edge(std::string_view name, NodeId tail, NodeId head);
    EdgeId add_edge(NodeId tail, NodeId head);
    /// index in 0..2
    void set_session(int index, NodeId sender, NodeId receiver);

    /// Throws ModelViolation on any violated assumption.
    Scenario build() const;

private:
    friend class Scenario;
    std::vector<std::string> node_names_;
    std::unordered_map<std::string, NodeId> node_index_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, EdgeId> edge_index_;
    std::array<NodeId, 3> senders_{};
    std::array<NodeId, 3> receivers_{};
    std::array<bool, 3> session_set_{};
};

/// Immutable, validated scenario.
class Scenario {
public:
    std::size_t node_count() const { return node_names_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::string& node_name(NodeId v) const { return node_names_[v]; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }
    std::span<const Edge> edges() const { return edges_; }

    /// Session i in 0..2.
    const Session& session(int i) const { return sessions_[static_cast<std::size_t>(i)]; }
    EdgeId sigma(int i) const { return session(i).sender_edge; }
    EdgeId tau(int i) const { return session(i).receiver_edge; }

    std::span<const EdgeId> out_edges(NodeId v) const { return out_[v]; }
    std::span<const EdgeId> in_edges(NodeId v) const { return in_[v]; }
    /// Edges e' with tail(e') = head(e).
    std::span<const EdgeId> successors(EdgeId e) const { return out_[edges_[e].head]; }
    /// Edges e' with head(e') = tail(e).
    std::span<const EdgeId> predecessors(EdgeId e) const { return in_[edges_[e].tail]; }

    /// Canonical topological order of the edges; ties broken by ascending id.
    std::span<const EdgeId> topological_order() const { return order_; }
    /// Position of e in topological_order().
    std::size_t position(EdgeId e) const { return position_[e]; }

    std::span<const AdjacentPair> adjacent_pairs() const { return pairs_; }
    /// Pair indices (e', e) for every e' feeding e, aligned with predecessors(e).
    std::span<const std::uint32_t> incoming_pairs(EdgeId e) const { return incoming_pairs_[e]; }

    /// Edges reachable from e (forward) or reaching e (backward), e included.
    EdgeSet reachable_edges(EdgeId e, Direction dir) const;
    /// Directed path src ~> dst avoiding every edge flagged in `removed`.
    bool reaches(EdgeId src, EdgeId dst, const EdgeSet* removed = nullptr) const;

    /// Canonical text form accepted by parse_scenario.
    std::string to_text() const;

private:
    friend class ScenarioBuilder;
    Scenario() = default;

    std::vector<std::string> node_names_;
    std::vector<Edge> edges_;
    std::array<Session, 3> sessions_{};
    std::vector<std::vector<EdgeId>> out_;
    std::vector<std::vector<EdgeId>> in_;
    std::vector<EdgeId> order_;
    std::vector<std::size_t> position_;
    std::vector<AdjacentPair> pairs_;
    std::vector<std::vector<std::uint32_t>> incoming_pairs_;
};

/// Parses the line-oriented scenario format:
///
///     # comment
///     node <name>
///     edge <id> <tail> <head>
///     session <i> <sender-node> <receiver-node>
///
/// Throws ParseError on syntax problems and ModelViolation on structural ones.
Scenario parse_scenario(std::string_view text);

/// Reads and parses a file; throws Error if it cannot be opened.
Scenario load_scenario(const std::string& path);

} // namespace pbna
