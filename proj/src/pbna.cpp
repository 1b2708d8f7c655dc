#include "pbna/pbna.hpp"

#include "pbna/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pbna {

std::string to_string(PlanKind k) {
    switch (k) {
    case PlanKind::EtaGeneral: return "EtaGeneral";
    case PlanKind::EtaOne: return "EtaOne";
    case PlanKind::TypeTwoFive: return "TypeTwoFive";
    case PlanKind::TrivialThird: return "TrivialThird";
    case PlanKind::ReducedFree: return "ReducedFree";
    }
    return "?";
}

std::array<Rational, 3> PrecodingPlan::rates() const {
    std::array<Rational, 3> out;
    for (std::size_t s = 0; s < 3; ++s)
        out[s] = Rational::of(static_cast<std::int64_t>(k[s]), static_cast<std::int64_t>(slots));
    return out;
}

PrecodingPlan make_plan(PlanKind kind, int n, std::array<int, 3> roles) {
    PrecodingPlan p;
    p.kind = kind;
    p.roles = roles;
    const auto primary = static_cast<std::size_t>(roles[0]);
    switch (kind) {
    case PlanKind::EtaGeneral: {
        if (n < 1) throw std::invalid_argument("EtaGeneral needs n >= 1");
        p.n = n;
        p.slots = static_cast<std::size_t>(2 * n + 1);
        const auto un = static_cast<std::size_t>(n);
        p.k = {un, un, un};
        p.k[primary] = un + 1;
        break;
    }
    case PlanKind::EtaOne: p.slots = 2, p.k = {1, 1, 1}; break;
    case PlanKind::TypeTwoFive: p.n = 2, p.slots = 5, p.k = {2, 2, 2}; break;
    case PlanKind::TrivialThird: p.slots = 3, p.k = {1, 1, 1}; break;
    case PlanKind::ReducedFree: p.slots = 2, p.k = {1, 1, 1}; break;
    }
    return p;
}

PrecodingPlan build_plan(const NetworkType& nt, int n) {
    switch (nt.kind) {
    case NetworkKind::TypeI: return make_plan(PlanKind::TrivialThird);
    case NetworkKind::TypeII: return make_plan(PlanKind::TypeTwoFive, 2, nt.roles);
    case NetworkKind::TypeIII: return nt.eta_one ? make_plan(PlanKind::EtaOne) : make_plan(PlanKind::EtaGeneral, n);
    case NetworkKind::Reduced: {
        if (!nt.reduced.diagonal_complete) throw Error("some sender cannot reach its own receiver; no positive symmetric rate");
        if (!nt.reduced.free_scheme_feasible) return make_plan(PlanKind::TrivialThird);
        PrecodingPlan p = make_plan(PlanKind::ReducedFree);
        p.reduced = nt.reduced;
        return p;
    }
    }
    throw std::invalid_argument("unknown network kind");
}

std::vector<FieldElement> EvaluatedScheme::M(int j, int i) const {
    std::vector<FieldElement> d(transfer.size());
    for (std::size_t t = 0; t < transfer.size(); ++t) d[t] = transfer[t][static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    return d;
}

Matrix EvaluatedScheme::transmitted(int s) const {
    const auto u = static_cast<std::size_t>(s);
    return V[u].select_columns(data_columns[u]);
}

namespace {

constexpr int kResampleLimit = 100;

bool uses_eta(PlanKind k) { return k == PlanKind::EtaGeneral || k == PlanKind::EtaOne || k == PlanKind::TypeTwoFive; }

} // namespace

EvaluatedScheme evaluate_precoding(const Scenario& sc, const PrecodingPlan& plan, const Field& f, std::mt19937_64& rng) {
    EvaluatedScheme es;
    es.plan = plan;
    const std::size_t N = plan.slots;
    const auto& r = plan.roles;
    // Transfer value by role, 0-based.
    auto mr = [&](const TransferMatrix& m, int j, int i) {
        return m[static_cast<std::size_t>(r[static_cast<std::size_t>(j)])][static_cast<std::size_t>(r[static_cast<std::size_t>(i)])];
    };

    std::vector<FreeChain> chains;
    int consecutive = 0;
    while (es.assignments.size() < N) {
        const std::size_t t = es.assignments.size();
        CodingAssignment x = CodingAssignment::random(sc, f, rng, t);
        const TransferMatrix m = evaluate_transfer_matrix(sc, f, x);
        bool ok = true;
        std::optional<FreeChain> chain;
        if (uses_eta(plan.kind)) {
            ok = !mr(m, 0, 1).is_zero() && !mr(m, 1, 2).is_zero() && !mr(m, 2, 0).is_zero() && !mr(m, 2, 1).is_zero();
        } else if (plan.kind == PlanKind::ReducedFree) {
            chain = free_chain(f, m, plan.reduced);
            ok = chain.has_value();
        }
        if (!ok) {
            ++es.resamples;
            if (++consecutive >= kResampleLimit) throw ResampleLimit("100 consecutive draws with a zero denominator");
            continue;
        }
        consecutive = 0;
        es.assignments.push_back(std::move(x));
        es.transfer.push_back(m);
        if (chain) chains.push_back(*chain);
        if (uses_eta(plan.kind)) {
            const FieldElement num = f.mul(f.mul(mr(m, 0, 2), mr(m, 1, 0)), mr(m, 2, 1));
            const FieldElement den = f.mul(f.mul(mr(m, 0, 1), mr(m, 1, 2)), mr(m, 2, 0));
            es.eta.push_back(f.div(num, den));
            es.ratio_13_23.push_back(f.div(mr(m, 0, 2), mr(m, 1, 2)));
            es.ratio_12_32.push_back(f.div(mr(m, 0, 1), mr(m, 2, 1)));
        }
    }

    const auto s0 = static_cast<std::size_t>(r[0]);
    const auto s1 = static_cast<std::size_t>(r[1]);
    const auto s2 = static_cast<std::size_t>(r[2]);
    switch (plan.kind) {
    case PlanKind::EtaGeneral:
    case PlanKind::TypeTwoFive: {
        const auto n = static_cast<std::size_t>(plan.n);
        es.V[s0] = Matrix(N, n + 1);
        es.V[s1] = Matrix(N, n);
        es.V[s2] = Matrix(N, n);
        for (std::size_t t = 0; t < N; ++t) {
            FieldElement power = kOne;  // eta_t^c
            for (std::size_t c = 0; c <= n; ++c) {
                es.V[s0](t, c) = power;
                if (c < n) es.V[s1](t, c) = f.mul(es.ratio_13_23[t], power);
                if (c >= 1) es.V[s2](t, c - 1) = f.mul(es.ratio_12_32[t], power);
                power = f.mul(power, es.eta[t]);
            }
        }
        break;
    }
    case PlanKind::EtaOne: {
        es.theta[s0].resize(N);
        for (auto& th : es.theta[s0]) th = f.random(rng);
        for (auto& v : es.V) v = Matrix(N, 1);
        for (std::size_t t = 0; t < N; ++t) {
            es.V[s0](t, 0) = es.theta[s0][t];
            es.V[s1](t, 0) = f.mul(es.ratio_13_23[t], es.theta[s0][t]);
            es.V[s2](t, 0) = f.mul(es.ratio_12_32[t], es.theta[s0][t]);
        }
        break;
    }
    case PlanKind::TrivialThird: {
        for (std::size_t s = 0; s < 3; ++s) {
            es.theta[s].resize(N);
            es.V[s] = Matrix(N, 1);
            for (std::size_t t = 0; t < N; ++t) es.V[s](t, 0) = es.theta[s][t] = f.random(rng);
        }
        break;
    }
    case PlanKind::ReducedFree: {
        for (auto& th : es.theta) {
            th.resize(N);
            for (auto& v : th) v = f.random(rng);
        }
        for (std::size_t s = 0; s < 3; ++s) {
            es.V[s] = Matrix(N, 1);
            for (std::size_t t = 0; t < N; ++t) {
                const auto root = static_cast<std::size_t>(chains[t].root[s]);
                es.V[s](t, 0) = f.mul(chains[t].coeff[s], es.theta[root][t]);
            }
        }
        break;
    }
    }

    for (std::size_t s = 0; s < 3; ++s) {
        es.data_columns[s].resize(es.V[s].cols());
        std::iota(es.data_columns[s].begin(), es.data_columns[s].end(), std::size_t{0});
    }
    // The primary sender of the 2/5 scheme keeps the columns w and T^2 w.
    if (plan.kind == PlanKind::TypeTwoFive) es.data_columns[s0] = {0, 2};
    return es;
}

Matrix through(const Field& f, const EvaluatedScheme& es, int j, int i, const Matrix& v) { return scale_rows(f, es.M(j, i), v); }

namespace {

// span(a) == span(b) when `equal`, span(b) inside span(a) otherwise.
bool aligned(const Field& f, const Matrix& a, const Matrix& b, bool equal) {
    const std::size_t joint = rank(f, Matrix::hconcat(a, b));
    const std::size_t ra = rank(f, a);
    return joint == ra && (!equal || joint == rank(f, b));
}

} // namespace

bool check_alignment(const Field& f, const EvaluatedScheme& es) {
    const auto& r = es.plan.roles;
    auto mv = [&](int j, int i) {
        const int sj = r[static_cast<std::size_t>(j)];
        return through(f, es, sj, r[static_cast<std::size_t>(i)], es.V[static_cast<std::size_t>(sj)]);
    };
    switch (es.plan.kind) {
    case PlanKind::TrivialThird: return true;
    case PlanKind::ReducedFree: {
        for (int i = 0; i < 3; ++i) {
            if (!es.plan.reduced.active_alignment[static_cast<std::size_t>(i)]) continue;
            if (!aligned(f, mv((i + 1) % 3, i), mv((i + 2) % 3, i), true)) return false;
        }
        return true;
    }
    case PlanKind::EtaOne:
        return aligned(f, mv(1, 0), mv(2, 0), true) && aligned(f, mv(0, 1), mv(2, 1), true) && aligned(f, mv(0, 2), mv(1, 2), true);
    case PlanKind::EtaGeneral:
    case PlanKind::TypeTwoFive:
        return aligned(f, mv(1, 0), mv(2, 0), true) && aligned(f, mv(0, 1), mv(2, 1), false) && aligned(f, mv(0, 2), mv(1, 2), false);
    }
    return false;
}

namespace {

// Receiver i (session index) recovers all k_i of its symbols.
bool decodable(const Field& f, const EvaluatedScheme& es, int i) {
    const Matrix desired = through(f, es, i, i, es.transmitted(i));
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    const Matrix interference = Matrix::hconcat(through(f, es, j, i, es.transmitted(j)), through(f, es, k, i, es.transmitted(k)));
    const std::size_t ri = rank(f, interference);
    return rank(f, Matrix::hconcat(desired, interference)) == desired.cols() + ri;
}

} // namespace

std::array<bool, 3> check_rank(const Field& f, const EvaluatedScheme& es) {
    const auto& r = es.plan.roles;
    const std::size_t N = es.plan.slots;
    auto mv = [&](int j, int i, const Matrix& v) { return through(f, es, r[static_cast<std::size_t>(j)], r[static_cast<std::size_t>(i)], v); };
    auto V = [&](int role) -> const Matrix& { return es.V[static_cast<std::size_t>(r[static_cast<std::size_t>(role)])]; };
    auto full = [&](const Matrix& a, const Matrix& b) { return rank(f, Matrix::hconcat(a, b)) == N; };

    std::array<bool, 3> out{};
    switch (es.plan.kind) {
    case PlanKind::EtaGeneral:
    case PlanKind::EtaOne:
        out[0] = full(mv(0, 0, V(0)), mv(1, 0, V(1)));
        out[1] = full(mv(0, 1, V(0)), mv(1, 1, V(1)));
        out[2] = full(mv(0, 2, V(0)), mv(2, 2, V(2)));
        break;
    case PlanKind::TypeTwoFive: {
        const Matrix v1_data = es.transmitted(r[0]);
        out[0] = rank(f, Matrix::hconcat(mv(0, 0, v1_data), mv(2, 0, V(2)))) == 4;
        out[1] = full(mv(0, 1, V(0)), mv(1, 1, V(1)));
        out[2] = full(mv(0, 2, V(0)), mv(2, 2, V(2)));
        break;
    }
    case PlanKind::TrivialThird:
    case PlanKind::ReducedFree:
        for (int i = 0; i < 3; ++i) out[static_cast<std::size_t>(i)] = decodable(f, es, i);
        break;
    }
    return out;
}

std::array<FieldElement, 3> propagate(const Scenario& sc, const Field& f, const CodingAssignment& x,
                                      const std::array<FieldElement, 3>& injected) {
    std::vector<FieldElement> y(sc.edge_count(), kZero);
    std::vector<char> is_source(sc.edge_count(), 0);
    for (int s = 0; s < 3; ++s) {
        is_source[sc.sigma(s)] = 1;
        y[sc.sigma(s)] = injected[static_cast<std::size_t>(s)];
    }
    for (EdgeId e : sc.topological_order()) {
        if (is_source[e]) continue;
        const auto preds = sc.predecessors(e);
        const auto pairs = sc.incoming_pairs(e);
        FieldElement acc = kZero;
        for (std::size_t k = 0; k < preds.size(); ++k) acc += f.mul(x.coeffs[pairs[k]], y[preds[k]]);
        y[e] = acc;
    }
    return {y[sc.tau(0)], y[sc.tau(1)], y[sc.tau(2)]};
}

std::uint64_t decoding_degree_estimate(const Scenario& sc, const PrecodingPlan& plan) {
    const std::uint64_t D = transfer_degree_bound(sc);
    std::uint64_t per_entry = 0;
    switch (plan.kind) {
    case PlanKind::EtaGeneral:
    case PlanKind::TypeTwoFive: per_entry = D * static_cast<std::uint64_t>(3 * plan.n + 2); break;
    case PlanKind::EtaOne: per_entry = 2 * D + 1; break;
    case PlanKind::TrivialThird: per_entry = D + 1; break;
    case PlanKind::ReducedFree: per_entry = 3 * D + 1; break;
    }
    return 3 * plan.slots * per_entry;
}

SimulationResult simulate(const Scenario& sc, const PrecodingPlan& plan, std::size_t trials, const Field& f, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    SimulationResult res;
    res.trials = trials;
    res.rates = plan.rates();
    res.field_bits = f.bits();
    res.seed = seed;
    res.degree_estimate = decoding_degree_estimate(sc, plan);
    res.failure_bound = std::min(1.0, static_cast<double>(res.degree_estimate) / std::ldexp(1.0, f.bits()));

    std::mt19937_64 rng(seed);
    const std::size_t N = plan.slots;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const EvaluatedScheme es = evaluate_precoding(sc, plan, f, rng);
        res.resamples += es.resamples;
        std::array<Matrix, 3> tx;
        std::array<std::vector<FieldElement>, 3> data;
        std::array<std::vector<FieldElement>, 3> sent;
        for (int s = 0; s < 3; ++s) {
            const auto u = static_cast<std::size_t>(s);
            tx[u] = es.transmitted(s);
            data[u].resize(tx[u].cols());
            for (auto& v : data[u]) v = f.random(rng);
            sent[u] = multiply(f, tx[u], data[u]);
        }
        std::array<std::vector<FieldElement>, 3> received;
        for (auto& rv : received) rv.resize(N);
        for (std::size_t t = 0; t < N; ++t) {
            const auto y = propagate(sc, f, es.assignments[t], {sent[0][t], sent[1][t], sent[2][t]});
            for (std::size_t i = 0; i < 3; ++i) received[i][t] = y[i];
        }

        bool all_ok = true;
        for (int i = 0; i < 3; ++i) {
            const auto u = static_cast<std::size_t>(i);
            const Matrix desired = through(f, es, i, i, tx[u]);
            const int j = (i + 1) % 3;
            const int k = (i + 2) % 3;
            const Matrix interference =
                Matrix::hconcat(through(f, es, j, i, tx[static_cast<std::size_t>(j)]), through(f, es, k, i, tx[static_cast<std::size_t>(k)]));
            const auto basis = independent_columns(f, interference);
            const Matrix system = Matrix::hconcat(desired, interference.select_columns(basis));
            const auto sol = solve(f, system, received[u]);
            const bool ok = sol && sol->unique && std::equal(data[u].begin(), data[u].end(), sol->z.begin());
            if (!ok) {
                ++res.receiver_failures[u];
                all_ok = false;
            }
        }
        if (all_ok) ++res.successes;
    }
    res.success_probability = static_cast<double>(res.successes) / static_cast<double>(trials);
    return res;
}

} // namespace pbna
