#include "pbna/errors.hpp"
#include "pbna/pbna.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace pbna;

namespace {

std::vector<std::string> rate_strings(const std::array<Rational, 3>& r) { return {r[0].str(), r[1].str(), r[2].str()}; }

} // namespace

TEST_CASE("plan shapes") {
    const PrecodingPlan g2 = make_plan(PlanKind::EtaGeneral, 2);
    CHECK(g2.slots == 5);
    CHECK(g2.k == std::array<std::size_t, 3>{3, 2, 2});
    CHECK(rate_strings(g2.rates()) == std::vector<std::string>{"3/5", "2/5", "2/5"});
    CHECK(make_plan(PlanKind::EtaOne).slots == 2);
    CHECK(make_plan(PlanKind::TypeTwoFive).k == std::array<std::size_t, 3>{2, 2, 2});
    CHECK(make_plan(PlanKind::TrivialThird).slots == 3);
    CHECK(make_plan(PlanKind::EtaGeneral, 1, {1, 0, 2}).k == std::array<std::size_t, 3>{1, 2, 1});
    CHECK_THROWS_AS(make_plan(PlanKind::EtaGeneral, 0), std::invalid_argument);

    NetworkType t3;
    t3.kind = NetworkKind::TypeIII;
    CHECK(build_plan(t3, 3).kind == PlanKind::EtaGeneral);
    CHECK(build_plan(t3, 3).slots == 7);
    t3.eta_one = true;
    CHECK(build_plan(t3).kind == PlanKind::EtaOne);
    NetworkType t2;
    t2.kind = NetworkKind::TypeII;
    CHECK(build_plan(t2).kind == PlanKind::TypeTwoFive);
    NetworkType t1;
    t1.kind = NetworkKind::TypeI;
    CHECK(build_plan(t1).kind == PlanKind::TrivialThird);
    NetworkType red;
    red.kind = NetworkKind::Reduced;
    CHECK_THROWS_AS(build_plan(red), Error);
    red.reduced.diagonal_complete = true;
    CHECK(build_plan(red).kind == PlanKind::TrivialThird);
    red.reduced.free_scheme_feasible = true;
    CHECK(build_plan(red).kind == PlanKind::ReducedFree);
}

TEST_CASE("EtaGeneral precoders have the power structure") {
    const Scenario sc = testing::corpus("rich_type3.scn");
    const Field f(16);
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 3; ++n) {
        const EvaluatedScheme es = evaluate_precoding(sc, make_plan(PlanKind::EtaGeneral, n), f, rng);
        const std::size_t N = es.plan.slots;
        REQUIRE(es.V[0].rows() == N);
        REQUIRE(es.V[0].cols() == static_cast<std::size_t>(n + 1));
        for (std::size_t t = 0; t < N; ++t) {
            CHECK(es.V[0](t, 0) == kOne);
            CHECK(es.V[0](t, 1) == es.eta[t]);
            CHECK(es.V[1](t, 0) == es.ratio_13_23[t]);
            CHECK(es.V[2](t, 0) == f.mul(es.ratio_12_32[t], es.eta[t]));
        }
        CHECK(rank(f, es.V[0]) == es.plan.k[0]);
        CHECK(check_alignment(f, es));
        const auto b = check_rank(f, es);
        CHECK(b == std::array<bool, 3>{true, true, true});
    }
}

TEST_CASE("EtaOne aligns perfectly on the two-corridor network") {
    const Scenario sc = testing::corpus("two_corridor.scn");
    const Field f(16);
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        const EvaluatedScheme es = evaluate_precoding(sc, make_plan(PlanKind::EtaOne), f, rng);
        for (std::size_t t = 0; t < 2; ++t) {
            CHECK(es.eta[t] == kOne);
            CHECK(es.V[1](t, 0) == f.mul(es.ratio_13_23[t], es.theta[0][t]));
            CHECK(es.V[2](t, 0) == f.mul(es.ratio_12_32[t], es.theta[0][t]));
        }
        CHECK(check_alignment(f, es));
    }
}

TEST_CASE("alignment breaks when a precoder is replaced") {
    const Scenario sc = testing::corpus("rich_type3.scn");
    const Field f(16);
    std::mt19937_64 rng(7);
    int broken = 0;
    for (int rep = 0; rep < 20; ++rep) {
        EvaluatedScheme es = evaluate_precoding(sc, make_plan(PlanKind::EtaGeneral, 2), f, rng);
        for (std::size_t r = 0; r < es.V[1].rows(); ++r)
            for (std::size_t c = 0; c < es.V[1].cols(); ++c) es.V[1](r, c) = f.random(rng);
        broken += !check_alignment(f, es);
    }
    CHECK(broken == 20);
}

TEST_CASE("rank deficiency on Type I and Type II networks") {
    const Field f(16);
    std::mt19937_64 rng(9);
    const Scenario shared = testing::corpus("shared_bottleneck.scn");
    const Scenario gadget = testing::corpus("type2_gadget.scn");
    for (int rep = 0; rep < 20; ++rep) {
        for (const PrecodingPlan& p : {make_plan(PlanKind::EtaOne), make_plan(PlanKind::EtaGeneral, 2)}) {
            const auto b = check_rank(f, evaluate_precoding(shared, p, f, rng));
            CHECK_FALSE(b[0]);
        }
        CHECK_FALSE(check_rank(f, evaluate_precoding(gadget, make_plan(PlanKind::EtaGeneral, 2), f, rng))[0]);
        const EvaluatedScheme ok = evaluate_precoding(gadget, make_plan(PlanKind::TypeTwoFive), f, rng);
        CHECK(ok.data_columns[0] == std::vector<std::size_t>{0, 2});
        CHECK(check_alignment(f, ok));
    }
}

TEST_CASE("propagation reproduces the transfer functions") {
    std::mt19937_64 rng(13);
    const Field f(16);
    for (int rep = 0; rep < 40; ++rep) {
        const Scenario sc = testing::random_scenario(rng, testing::wide_shape(false));
        const auto x = CodingAssignment::random(sc, f, rng);
        const TransferMatrix m = evaluate_transfer_matrix(sc, f, x);
        for (std::size_t j = 0; j < 3; ++j) {
            std::array<FieldElement, 3> unit{};
            unit[j] = kOne;
            const auto y = propagate(sc, f, x, unit);
            for (std::size_t i = 0; i < 3; ++i) REQUIRE(y[i] == m[j][i]);
        }
        CHECK(propagate(sc, f, x, {}) == std::array<FieldElement, 3>{});
    }
    // Disjoint paths with unit coefficients pass symbols straight through.
    const Scenario sc = testing::corpus("disjoint_paths.scn");
    CodingAssignment ones;
    ones.coeffs.assign(sc.adjacent_pairs().size(), kOne);
    const std::array<FieldElement, 3> in = {FieldElement(5), FieldElement(6), FieldElement(7)};
    CHECK(propagate(sc, f, ones, in) == in);
}

TEST_CASE("simulation on the corpus") {
    const Field f(16);
    struct Case {
        const char* file;
        PlanKind kind;
        int n;
        std::vector<std::string> rates;
    };
    const Case cases[] = {
        {"rich_type3.scn", PlanKind::EtaGeneral, 1, {"2/3", "1/3", "1/3"}},
        {"two_corridor.scn", PlanKind::EtaOne, 0, {"1/2", "1/2", "1/2"}},
        {"type2_gadget.scn", PlanKind::TypeTwoFive, 2, {"2/5", "2/5", "2/5"}},
        {"shared_bottleneck.scn", PlanKind::TrivialThird, 0, {"1/3", "1/3", "1/3"}},
    };
    for (const Case& c : cases) {
        const Scenario sc = testing::corpus(c.file);
        const SimulationResult r = simulate(sc, make_plan(c.kind, std::max(c.n, 1)), 100, f, 17);
        INFO(c.file);
        CHECK(rate_strings(r.rates) == c.rates);
        CHECK(r.successes >= 98);
        CHECK(r.successes <= r.trials);
    }
    const Scenario reduced = testing::corpus("reduced_m21.scn");
    const Classification cl = classify(reduced);
    const PrecodingPlan plan = build_plan(cl.type);
    CHECK(plan.kind == PlanKind::ReducedFree);
    const SimulationResult r = simulate(reduced, plan, 100, f, 19);
    CHECK(r.successes >= 98);
    std::mt19937_64 rng(23);
    CHECK(check_alignment(f, evaluate_precoding(reduced, plan, f, rng)));
}

TEST_CASE("simulation is deterministic in the seed") {
    const Scenario sc = testing::corpus("rich_type3.scn");
    const Field f(4);
    const SimulationResult a = simulate(sc, make_plan(PlanKind::EtaGeneral, 2), 50, f, 99);
    const SimulationResult b = simulate(sc, make_plan(PlanKind::EtaGeneral, 2), 50, f, 99);
    CHECK(a.successes == b.successes);
    CHECK(a.receiver_failures == b.receiver_failures);
    CHECK(a.resamples == b.resamples);
}

TEST_CASE("tiny fields fail visibly") {
    const Scenario sc = testing::corpus("shared_bottleneck.scn");
    const SimulationResult r = simulate(sc, make_plan(PlanKind::TrivialThird), 300, Field(1), 29);
    CHECK(r.success_probability < 0.99);
    CHECK(r.failure_bound == 1.0);
    CHECK_THROWS_AS(simulate(testing::corpus("rich_type3.scn"), make_plan(PlanKind::EtaGeneral, 2), 10, Field(1), 3), ResampleLimit);
}
