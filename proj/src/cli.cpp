#include "pbna/cli.hpp"

#include "pbna/errors.hpp"
#include "pbna/feasibility.hpp"
#include "pbna/pbna.hpp"
#include "pbna/xfer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <ostream>
#include <random>

namespace pbna {

namespace {

using nlohmann::json;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("PBNA_SEED"); env != nullptr && *env != '\0') {
        try {
            return std::stoull(env);
        } catch (const std::logic_error&) {
            throw Error(std::string("PBNA_SEED is not an unsigned integer: '") + env + "'");
        }
    }
    return kDefaultSeed;
}

json scenario_json(const Scenario& sc) {
    json sessions = json::array();
    for (int i = 0; i < 3; ++i) {
        const Session& s = sc.session(i);
        sessions.push_back({{"sender", sc.node_name(s.sender)},
                            {"receiver", sc.node_name(s.receiver)},
                            {"sender_edge", sc.edge(s.sender_edge).name},
                            {"receiver_edge", sc.edge(s.receiver_edge).name}});
    }
    return {{"nodes", sc.node_count()}, {"edges", sc.edge_count()}, {"sessions", sessions}};
}

json rates_json(const std::array<Rational, 3>& rates) {
    json out = json::array();
    for (const Rational& r : rates) out.push_back(r.str());
    return out;
}

void put_classification(json& j, const Classification& c) {
    const CouplingReport& rep = c.report;
    j["type"] = to_string(c.type.kind);
    j["optimal_rate"] = c.type.rate.str();
    j["connectivity"] = rep.connectivity;
    j["full_connectivity"] = rep.full_connectivity;
    for (Relation r : kAllRelations) {
        if (rep.full_connectivity) j[relation_name(r)] = rep.flag(r);
        else j[relation_name(r)] = nullptr;
    }
    if (c.type.kind == NetworkKind::TypeII) j["roles"] = {c.type.roles[0] + 1, c.type.roles[1] + 1, c.type.roles[2] + 1};
    if (c.type.kind == NetworkKind::Reduced) {
        const ReducedInfo& info = c.type.reduced;
        j["reduced"] = {{"active_alignment", info.active_alignment},
                        {"diagonal_complete", info.diagonal_complete},
                        {"free_scheme_feasible", info.free_scheme_feasible}};
    }
}

json base_report(const Scenario& sc, std::uint64_t seed, int field_bits) {
    return {{"tool", "pbna"}, {"version", kVersion}, {"seed", seed}, {"field_bits", field_bits}, {"scenario", scenario_json(sc)}};
}

struct ClassifyArgs {
    std::string file;
    int field_bits = 32;
    int trials = 20;
    std::optional<std::uint64_t> seed;
    bool cross_check = false;
};

struct SimulateArgs {
    std::string file;
    int n = 2;
    std::size_t trials = 200;
    int field_bits = 16;
    std::optional<std::uint64_t> seed;
    std::string plan;
};

struct OracleArgs {
    std::string file;
};

json cmd_classify(const ClassifyArgs& a) {
    const Scenario sc = load_scenario(a.file);
    const std::uint64_t seed = resolve_seed(a.seed);
    const Classification c = classify(sc, ClassifyOptions{a.field_bits, a.trials, seed});
    json j = base_report(sc, seed, a.field_bits);
    put_classification(j, c);
    if (a.cross_check) {
        json cc;
        if (!c.report.full_connectivity) {
            cc["skipped"] = "incomplete connectivity";
            cc["agree"] = true;
        } else {
            const Field f(a.field_bits);
            std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
            bool agree = true;
            json rel;
            for (Relation r : kAllRelations) {
                const IdentityVerdict v = randomized_identity_check(sc, r, a.trials, f, rng);
                const bool graph = c.report.flag(r);
                agree = agree && graph == v.all_equal;
                rel[relation_name(r)] = {{"graph", graph},
                                         {"randomized", v.all_equal},
                                         {"trials", v.trials},
                                         {"degree_bound", v.degree_bound},
                                         {"false_accept_bound", v.false_accept_bound}};
            }
            cc["relations"] = rel;
            cc["agree"] = agree;
        }
        cc["trials"] = a.trials;
        j["cross_check"] = cc;
    }
    return j;
}

PlanKind parse_plan_kind(const std::string& s) {
    for (PlanKind k : {PlanKind::EtaGeneral, PlanKind::EtaOne, PlanKind::TypeTwoFive, PlanKind::TrivialThird})
        if (to_string(k) == s) return k;
    throw Error("unknown plan '" + s + "'");
}

json cmd_simulate(const SimulateArgs& a) {
    const Scenario sc = load_scenario(a.file);
    const std::uint64_t seed = resolve_seed(a.seed);
    const Classification c = classify(sc, ClassifyOptions{32, 20, seed});
    PrecodingPlan plan;
    if (a.plan.empty()) {
        plan = build_plan(c.type, a.n);
    } else {
        const PlanKind kind = parse_plan_kind(a.plan);
        plan = make_plan(kind, kind == PlanKind::TypeTwoFive ? 2 : a.n, c.type.roles);
    }
    const Field f(a.field_bits);
    const SimulationResult res = simulate(sc, plan, a.trials, f, seed);

    json j = base_report(sc, seed, a.field_bits);
    put_classification(j, c);
    j["plan"] = {{"kind", to_string(plan.kind)},
                 {"slots", plan.slots},
                 {"symbols", plan.k},
                 {"roles", {plan.roles[0] + 1, plan.roles[1] + 1, plan.roles[2] + 1}}};
    if (plan.kind == PlanKind::EtaGeneral) j["plan"]["n"] = plan.n;
    j["simulation"] = {{"trials", res.trials},
                       {"successes", res.successes},
                       {"receiver_failures", res.receiver_failures},
                       {"rates", rates_json(res.rates)},
                       {"success_probability", res.success_probability},
                       {"resamples", res.resamples},
                       {"degree_estimate", res.degree_estimate},
                       {"failure_bound", res.failure_bound}};
    return j;
}

json cmd_oracle(const OracleArgs& a) {
    const Scenario sc = load_scenario(a.file);
    const TransferPolys polys = oracle_transfer_polys(sc);
    json counts = json::array();
    json degrees = json::array();
    for (const auto& row : polys) {
        json c = json::array();
        json d = json::array();
        for (const SparsePoly& p : row) {
            c.push_back(p.term_count());
            d.push_back(p.total_degree());
        }
        counts.push_back(c);
        degrees.push_back(d);
    }
    json rel;
    for (Relation r : kAllRelations) rel[relation_name(r)] = exact_relation(polys, r);
    json j = {{"tool", "pbna"}, {"version", kVersion}, {"scenario", scenario_json(sc)}};
    j["monomials"] = counts;
    j["total_degree"] = degrees;
    j["full_connectivity"] = fully_connected(connectivity(sc));
    j["relations"] = rel;
    return j;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Classify three-unicast networks and simulate precoding-based alignment schemes", "pbna"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    ClassifyArgs ca;
    auto* classify_cmd = app.add_subcommand("classify", "Type I/II/III verdict and coupling relations");
    classify_cmd->add_option("file", ca.file, "Scenario file")->required();
    classify_cmd->add_option("--field-bits", ca.field_bits, "Field GF(2^m) for randomized tests")->check(CLI::Range(1, 32));
    classify_cmd->add_option("--trials", ca.trials, "Random points per identity test")->check(CLI::Range(1, 1000000));
    classify_cmd->add_option("--seed", ca.seed, "RNG seed (default: $PBNA_SEED or built-in)");
    classify_cmd->add_flag("--cross-check", ca.cross_check, "Also run randomized identity tests");

    SimulateArgs sa;
    auto* simulate_cmd = app.add_subcommand("simulate", "Build the scheme and estimate decoding success");
    simulate_cmd->add_option("file", sa.file, "Scenario file")->required();
    simulate_cmd->add_option("--n", sa.n, "Extension parameter of the general scheme")->check(CLI::Range(1, 64));
    simulate_cmd->add_option("--trials", sa.trials, "Simulation trials")->check(CLI::Range(1, 100000000));
    simulate_cmd->add_option("--field-bits", sa.field_bits, "Field GF(2^m)")->check(CLI::Range(1, 32));
    simulate_cmd->add_option("--seed", sa.seed, "RNG seed (default: $PBNA_SEED or built-in)");
    simulate_cmd->add_option("--plan", sa.plan, "Force EtaGeneral, EtaOne, TypeTwoFive or TrivialThird");

    OracleArgs oa;
    auto* oracle_cmd = app.add_subcommand("oracle", "Symbolic transfer functions and exact relation verdicts");
    oracle_cmd->add_option("file", oa.file, "Scenario file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        json report;
        if (*classify_cmd) report = cmd_classify(ca);
        else if (*simulate_cmd) report = cmd_simulate(sa);
        else report = cmd_oracle(oa);
        out << report.dump(2) << '\n';
        return kExitOk;
    } catch (const ResampleLimit& e) {
        err << "error: " << e.what() << '\n';
        return kExitResample;
    } catch (const TooLarge& e) {
        err << "error: " << e.what() << '\n';
        return kExitTooLarge;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
}

} // namespace pbna
