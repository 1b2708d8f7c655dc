#include "pbna/dag.hpp"
#include "pbna/errors.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace pbna;

namespace {

const char* kChain = R"(# three sessions on one relay chain
edge sigma1 s1 a
edge sigma2 s2 a
edge sigma3 s3 a
edge e1 a b
edge e2 b c
edge tau1 c d1
edge tau2 c d2
edge tau3 c d3
session 1 s1 d1
session 2 s2 d2
session 3 s3 d3
)";

std::string sessions_only = "session 1 s1 d1\nsession 2 s2 d2\nsession 3 s3 d3\n";

} // namespace

TEST_CASE("parse a valid scenario") {
    const Scenario sc = parse_scenario(kChain);
    CHECK(sc.edge_count() == 8);
    CHECK(sc.node_count() == 9);
    CHECK(sc.edge(sc.sigma(0)).name == "sigma1");
    CHECK(sc.edge(sc.tau(2)).name == "tau3");
    CHECK(sc.node_name(sc.session(1).sender) == "s2");
    // Pairs: 3 sigmas into e1, e1 -> e2, e2 into 3 taus.
    CHECK(sc.adjacent_pairs().size() == 7);
}

TEST_CASE("topological order: ties by declaration order") {
    const Scenario sc = parse_scenario(kChain);
    std::vector<std::string> names;
    for (EdgeId e : sc.topological_order()) names.push_back(sc.edge(e).name);
    CHECK(names == std::vector<std::string>{"sigma1", "sigma2", "sigma3", "e1", "e2", "tau1", "tau2", "tau3"});
    for (EdgeId e = 0; e < sc.edge_count(); ++e)
        for (EdgeId n : sc.successors(e)) CHECK(sc.position(e) < sc.position(n));
}

TEST_CASE("incoming pairs line up with predecessors") {
    const Scenario sc = parse_scenario(kChain);
    for (EdgeId e = 0; e < sc.edge_count(); ++e) {
        const auto preds = sc.predecessors(e);
        const auto pairs = sc.incoming_pairs(e);
        REQUIRE(preds.size() == pairs.size());
        for (std::size_t k = 0; k < preds.size(); ++k) {
            CHECK(sc.adjacent_pairs()[pairs[k]].from == preds[k]);
            CHECK(sc.adjacent_pairs()[pairs[k]].to == e);
        }
    }
}

TEST_CASE("parse errors carry line numbers") {
    try {
        parse_scenario("edge a b\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
    }
    CHECK_THROWS_AS(parse_scenario("\n\nfrobnicate x\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("session x s1 d1\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("session 4 s1 d1\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("node\n"), ParseError);
}

TEST_CASE("model violations") {
    // Cycle among relays.
    CHECK_THROWS_AS(parse_scenario("edge sigma1 s1 a\nedge sigma2 s2 a\nedge sigma3 s3 a\nedge x a b\nedge y b a\n"
                                   "edge tau1 b d1\nedge tau2 b d2\nedge tau3 b d3\n" + sessions_only),
                    ModelViolation);
    // Sender with two outgoing edges.
    CHECK_THROWS_AS(parse_scenario("edge sigma1 s1 a\nedge extra s1 a\nedge sigma2 s2 a\nedge sigma3 s3 a\n"
                                   "edge tau1 a d1\nedge tau2 a d2\nedge tau3 a d3\n" + sessions_only),
                    ModelViolation);
    // Receiver with two incoming edges.
    CHECK_THROWS_AS(parse_scenario("edge sigma1 s1 a\nedge sigma2 s2 a\nedge sigma3 s3 a\n"
                                   "edge tau1 a d1\nedge extra a d1\nedge tau2 a d2\nedge tau3 a d3\n" + sessions_only),
                    ModelViolation);
    // Sender with an incoming edge.
    CHECK_THROWS_AS(parse_scenario("edge sigma1 s1 a\nedge back a2 s1\nedge sigma2 s2 a\nedge sigma3 s3 a\n"
                                   "edge tau1 a d1\nedge tau2 a d2\nedge tau3 a d3\n" + sessions_only),
                    ModelViolation);
    // Missing session.
    CHECK_THROWS_AS(parse_scenario("edge sigma1 s1 a\nedge tau1 a d1\nsession 1 s1 d1\n"), ModelViolation);
    // Duplicate edge id, self-loop.
    CHECK_THROWS_AS(parse_scenario("edge x a b\nedge x b c\n"), ModelViolation);
    CHECK_THROWS_AS(parse_scenario("edge x a a\n"), ModelViolation);
    // Two sessions sharing a sender edge.
    CHECK_THROWS_AS(parse_scenario("edge sigma1 s1 a\nedge sigma3 s3 a\nedge tau1 a d1\nedge tau2 a d2\nedge tau3 a d3\n"
                                   "session 1 s1 d1\nsession 2 s1 d2\nsession 3 s3 d3\n"),
                    ModelViolation);
}

TEST_CASE("reachability with removed edges") {
    const Scenario sc = parse_scenario(kChain);
    CHECK(sc.reaches(sc.sigma(0), sc.tau(2)));
    CHECK_FALSE(sc.reaches(sc.tau(2), sc.sigma(0)));
    EdgeSet removed(sc.edge_count(), 0);
    removed[3] = 1;  // e1
    CHECK_FALSE(sc.reaches(sc.sigma(0), sc.tau(0), &removed));
    CHECK(sc.reaches(sc.sigma(0), sc.sigma(0)));
    const EdgeSet fwd = sc.reachable_edges(3, Direction::Forward);
    CHECK(fwd[3]);
    CHECK(fwd[sc.tau(1)]);
    CHECK_FALSE(fwd[sc.sigma(1)]);
    const EdgeSet bwd = sc.reachable_edges(3, Direction::Backward);
    CHECK(bwd[sc.sigma(1)]);
    CHECK_FALSE(bwd[sc.tau(0)]);
}

TEST_CASE("canonical text round-trips") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        const Scenario sc = testing::random_scenario(rng, testing::wide_shape(false));
        const std::string text = sc.to_text();
        const Scenario again = parse_scenario(text);
        CHECK(again.to_text() == text);
        CHECK(again.edge_count() == sc.edge_count());
        CHECK(std::equal(sc.topological_order().begin(), sc.topological_order().end(), again.topological_order().begin()));
    }
}

TEST_CASE("corpus files load") {
    for (const char* name : {"shared_bottleneck.scn", "rich_type3.scn", "two_corridor.scn", "type2_gadget.scn", "disjoint_paths.scn",
                             "reduced_m21.scn"})
        CHECK_NOTHROW(testing::corpus(name));
    CHECK_THROWS_AS(load_scenario("/nonexistent/file.scn"), Error);
}
