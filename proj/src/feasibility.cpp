#include "pbna/feasibility.hpp"

#include "pbna/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pbna {

Rational Rational::of(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("zero denominator");
    const std::int64_t g = std::gcd(n, d);
    if (g == 0) return Rational{0, 1};
    return Rational{n / g, d / g};
}

std::string Rational::str() const {
    if (num == 0) return "0";
    return std::to_string(num) + "/" + std::to_string(den);
}

std::string relation_name(Relation r) {
    switch (r) {
    case Relation::EtaOne: return "eta_is_one";
    case Relation::P1One: return "p1_is_one";
    case Relation::P2One: return "p2_is_one";
    case Relation::P3One: return "p3_is_one";
    case Relation::P1Eta: return "p1_is_eta";
    case Relation::P2Eta: return "p2_is_eta";
    case Relation::P3Eta: return "p3_is_eta";
    case Relation::P1Third: return "p1_is_eta_over_one_plus_eta";
    case Relation::P2Third: return "p2_is_one_plus_eta";
    case Relation::P3Third: return "p3_is_one_plus_eta";
    }
    return "?";
}

namespace {

// 1-based shorthand: m(1,3) is m13.
constexpr TransferIndex m(int j, int i) { return TransferIndex{j - 1, i - 1}; }

} // namespace

ClearedIdentity cleared_identity(Relation r) {
    switch (r) {
    case Relation::EtaOne: return {{{m(1, 3), m(2, 1), m(3, 2)}}, {{m(1, 2), m(2, 3), m(3, 1)}}};
    case Relation::P1One: return {{{m(1, 3), m(2, 1)}}, {{m(1, 1), m(2, 3)}}};
    case Relation::P2One: return {{{m(1, 3), m(2, 2)}}, {{m(1, 2), m(2, 3)}}};
    case Relation::P3One: return {{{m(2, 1), m(3, 3)}}, {{m(2, 3), m(3, 1)}}};
    case Relation::P1Eta: return {{{m(1, 2), m(3, 1)}}, {{m(1, 1), m(3, 2)}}};
    case Relation::P2Eta: return {{{m(2, 2), m(3, 1)}}, {{m(2, 1), m(3, 2)}}};
    case Relation::P3Eta: return {{{m(3, 3), m(1, 2)}}, {{m(1, 3), m(3, 2)}}};
    case Relation::P1Third:
        return {{{m(1, 1), m(2, 3), m(3, 2)}}, {{m(1, 3), m(2, 1), m(3, 2)}, {m(1, 2), m(3, 1), m(2, 3)}}};
    case Relation::P2Third:
        return {{{m(1, 3), m(2, 2), m(3, 1)}}, {{m(1, 2), m(2, 3), m(3, 1)}, {m(1, 3), m(2, 1), m(3, 2)}}};
    case Relation::P3Third:
        return {{{m(2, 1), m(3, 3), m(1, 2)}}, {{m(1, 2), m(2, 3), m(3, 1)}, {m(1, 3), m(2, 1), m(3, 2)}}};
    }
    throw std::invalid_argument("unknown relation");
}

bool exact_relation(const TransferPolys& polys, Relation r) {
    const ClearedIdentity id = cleared_identity(r);
    auto add = [](const SparsePoly& a, const SparsePoly& b) { return a + b; };
    auto mul = [](const SparsePoly& a, const SparsePoly& b) { return a * b; };
    const SparsePoly lhs = evaluate_product_sum(id.lhs, polys, SparsePoly{}, SparsePoly::one(), add, mul);
    const SparsePoly rhs = evaluate_product_sum(id.rhs, polys, SparsePoly{}, SparsePoly::one(), add, mul);
    return lhs == rhs;
}

std::array<bool, 10> exact_relations(const TransferPolys& m) {
    std::array<bool, 10> out{};
    for (std::size_t k = 0; k < kAllRelations.size(); ++k) out[k] = exact_relation(m, kAllRelations[k]);
    return out;
}

std::pair<RatioSpec, EtaForm> relation_ratio_form(Relation r) {
    switch (r) {
    case Relation::EtaOne: return {RatioSpec::eta(), EtaForm::One};
    case Relation::P1One: return {RatioSpec::p(1), EtaForm::One};
    case Relation::P2One: return {RatioSpec::p(2), EtaForm::One};
    case Relation::P3One: return {RatioSpec::p(3), EtaForm::One};
    case Relation::P1Eta: return {RatioSpec::p(1), EtaForm::Eta};
    case Relation::P2Eta: return {RatioSpec::p(2), EtaForm::Eta};
    case Relation::P3Eta: return {RatioSpec::p(3), EtaForm::Eta};
    case Relation::P1Third: return {RatioSpec::p(1), EtaForm::EtaOverOnePlusEta};
    case Relation::P2Third: return {RatioSpec::p(2), EtaForm::OnePlusEta};
    case Relation::P3Third: return {RatioSpec::p(3), EtaForm::OnePlusEta};
    }
    throw std::invalid_argument("unknown relation");
}

std::uint64_t transfer_degree_bound(const Scenario& sc) {
    std::vector<std::uint64_t> longest(sc.edge_count(), 1);
    std::uint64_t best = 1;
    for (EdgeId e : sc.topological_order()) {
        for (EdgeId p : sc.predecessors(e)) longest[e] = std::max(longest[e], longest[p] + 1);
        best = std::max(best, longest[e]);
    }
    return best - 1;
}

namespace {

constexpr int kResampleLimit = 100;

FieldElement product(const Field& f, const TransferMatrix& m, const std::vector<TransferIndex>& factors) {
    FieldElement acc = kOne;
    for (const TransferIndex& t : factors) acc = f.mul(acc, m[static_cast<std::size_t>(t.sender)][static_cast<std::size_t>(t.receiver)]);
    return acc;
}

bool any_zero(const TransferMatrix& m, const std::vector<TransferIndex>& factors) {
    return std::any_of(factors.begin(), factors.end(), [&](const TransferIndex& t) {
        return m[static_cast<std::size_t>(t.sender)][static_cast<std::size_t>(t.receiver)].is_zero();
    });
}

} // namespace

IdentityVerdict randomized_identity_check(const Scenario& sc, const RatioSpec& lhs, EtaForm rhs, int trials, const Field& f,
                                          std::mt19937_64& rng) {
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    const RatioSpec eta = RatioSpec::eta();
    const bool uses_eta = rhs != EtaForm::One;

    IdentityVerdict v;
    const std::size_t factors = std::max(lhs.numerator.size(), lhs.denominator.size()) + (uses_eta ? eta.numerator.size() : 0);
    v.degree_bound = transfer_degree_bound(sc) * factors;
    v.single_trial_bound = std::min(1.0, static_cast<double>(v.degree_bound) / std::ldexp(1.0, f.bits()));

    int consecutive = 0;
    while (v.trials < trials) {
        const auto x = CodingAssignment::random(sc, f, rng);
        const TransferMatrix m = evaluate_transfer_matrix(sc, f, x);
        if (any_zero(m, lhs.denominator) || (uses_eta && any_zero(m, eta.denominator))) {
            ++v.resamples;
            if (++consecutive >= kResampleLimit) throw ResampleLimit("100 consecutive draws with a zero denominator");
            continue;
        }
        consecutive = 0;
        ++v.trials;
        // lhs_num / lhs_den == rhs_num / rhs_den with eta = n / d.
        const FieldElement ln = product(f, m, lhs.numerator);
        const FieldElement ld = product(f, m, lhs.denominator);
        const FieldElement n = product(f, m, eta.numerator);
        const FieldElement d = product(f, m, eta.denominator);
        FieldElement rn = kOne;
        FieldElement rd = kOne;
        switch (rhs) {
        case EtaForm::One: break;
        case EtaForm::Eta: rn = n, rd = d; break;
        case EtaForm::EtaOverOnePlusEta: rn = n, rd = d + n; break;
        case EtaForm::OnePlusEta: rn = d + n, rd = d; break;
        }
        if (f.mul(ln, rd) != f.mul(rn, ld)) {
            v.all_equal = false;
            break;
        }
    }
    v.false_accept_bound = v.all_equal ? std::pow(v.single_trial_bound, v.trials) : 0.0;
    return v;
}

IdentityVerdict randomized_identity_check(const Scenario& sc, Relation r, int trials, const Field& f, std::mt19937_64& rng) {
    const auto [lhs, rhs] = relation_ratio_form(r);
    return randomized_identity_check(sc, lhs, rhs, trials, f, rng);
}

Connectivity connectivity(const Scenario& sc) {
    Connectivity c{};
    for (int j = 0; j < 3; ++j) {
        const EdgeSet fwd = sc.reachable_edges(sc.sigma(j), Direction::Forward);
        for (int i = 0; i < 3; ++i) c[j][i] = fwd[sc.tau(i)] != 0;
    }
    return c;
}

bool fully_connected(const Connectivity& c) {
    for (const auto& row : c)
        for (bool b : row)
            if (!b) return false;
    return true;
}

namespace {

// Every sigma_1 ~> e ~> tau_1 path also crosses a.
bool on_all_paths_through(BottleneckCache& cache, EdgeId a, EdgeId e) {
    const Scenario& sc = cache.scenario();
    return cache.get(sc.sigma(0), e).contains(a) || cache.get(e, sc.tau(0)).contains(a);
}

} // namespace

bool check_eta_one(BottleneckCache& cache) {
    const AlphaBeta a213 = alpha_beta(cache, 1, 0, 2);
    const AlphaBeta a312 = alpha_beta(cache, 2, 0, 1);
    if (a213.alpha == a312.alpha && a213.beta == a312.beta) return true;
    // alpha == beta on both sides: each side reduces to the sum over sigma_1 ~> tau_1
    // paths through alpha, so distinct edges carrying the same paths still match.
    if (a213.alpha != a213.beta || a312.alpha != a312.beta) return false;
    return on_all_paths_through(cache, a213.alpha, a312.alpha) && on_all_paths_through(cache, a312.alpha, a213.alpha);
}

bool check_eta_one(const Scenario& sc) {
    BottleneckCache cache(sc);
    return check_eta_one(cache);
}

PiRelations check_pi_relations(const Scenario& sc) {
    if (!fully_connected(connectivity(sc))) throw Disconnected("p_i relations need every sender to reach every receiver");
    PiRelations out;
    out.is_one[0] = session_min_cut(sc, 0, 1, 0, 2) == 1;
    out.is_eta[0] = session_min_cut(sc, 0, 2, 0, 1) == 1;
    out.is_one[1] = session_min_cut(sc, 0, 1, 1, 2) == 1;
    out.is_eta[1] = session_min_cut(sc, 1, 2, 0, 1) == 1;
    out.is_one[2] = session_min_cut(sc, 1, 2, 0, 2) == 1;
    out.is_eta[2] = session_min_cut(sc, 0, 2, 1, 2) == 1;
    return out;
}

bool check_third_relation(BottleneckCache& cache, int i) {
    const Scenario& sc = cache.scenario();
    const int x = (i + 1) % 3;
    const int y = (i + 2) % 3;
    // alpha_{x i y} must lie on C_{i y} and alpha_{y i x} on C_{i x}.
    const EdgeId e1 = alpha_edge(cache, x, i, y);
    const EdgeId e2 = alpha_edge(cache, y, i, x);
    if (!cache.sessions(i, y).contains(e1) || !cache.sessions(i, x).contains(e2)) return false;
    if (e1 == e2 || !parallel(sc, e1, e2)) return false;
    EdgeSet removed(sc.edge_count(), 0);
    removed[e1] = removed[e2] = 1;
    return !sc.reaches(sc.sigma(i), sc.tau(i), &removed);
}

bool check_third_relation(const Scenario& sc, int i) {
    BottleneckCache cache(sc);
    return check_third_relation(cache, i);
}

bool CouplingReport::flag(Relation r) const {
    switch (r) {
    case Relation::EtaOne: return eta_is_one;
    case Relation::P1One: return pi_is_one[0];
    case Relation::P2One: return pi_is_one[1];
    case Relation::P3One: return pi_is_one[2];
    case Relation::P1Eta: return pi_is_eta[0];
    case Relation::P2Eta: return pi_is_eta[1];
    case Relation::P3Eta: return pi_is_eta[2];
    case Relation::P1Third: return third_relation[0];
    case Relation::P2Third: return third_relation[1];
    case Relation::P3Third: return third_relation[2];
    }
    return false;
}

std::string to_string(NetworkKind k) {
    switch (k) {
    case NetworkKind::TypeI: return "I";
    case NetworkKind::TypeII: return "II";
    case NetworkKind::TypeIII: return "III";
    case NetworkKind::Reduced: return "Reduced";
    }
    return "?";
}

ReducedInfo reduced_info(const Connectivity& c) {
    ReducedInfo info;
    info.diagonal_complete = c[0][0] && c[1][1] && c[2][2];
    for (int i = 0; i < 3; ++i) {
        const auto j = static_cast<std::size_t>((i + 1) % 3);
        const auto k = static_cast<std::size_t>((i + 2) % 3);
        info.active_alignment[static_cast<std::size_t>(i)] = c[j][static_cast<std::size_t>(i)] && c[k][static_cast<std::size_t>(i)];
    }
    return info;
}

std::optional<FreeChain> free_chain(const Field& f, const TransferMatrix& m, const ReducedInfo& info) {
    FreeChain chain;
    std::array<bool, 3> assigned{};
    for (int start = 0; start < 3; ++start) {
        const auto s = static_cast<std::size_t>(start);
        if (assigned[s]) continue;
        assigned[s] = true;
        chain.root[s] = start;
        chain.coeff[s] = kOne;
        // Receiver i aligns senders j and k: m_ji V_j parallel to m_ki V_k.
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t i = 0; i < 3; ++i) {
                if (!info.active_alignment[i]) continue;
                const std::size_t j = (i + 1) % 3;
                const std::size_t k = (i + 2) % 3;
                if (assigned[j] == assigned[k]) continue;
                const std::size_t from = assigned[j] ? j : k;
                const std::size_t to = assigned[j] ? k : j;
                if (m[to][i].is_zero()) return std::nullopt;
                chain.coeff[to] = f.mul(chain.coeff[from], f.div(m[from][i], m[to][i]));
                chain.root[to] = chain.root[from];
                assigned[to] = true;
                changed = true;
            }
        }
    }
    return chain;
}

namespace {

// One random two-slot draw of the free-V1 scheme; true when every receiver
// separates its symbol from the interference.
std::optional<bool> free_scheme_decodable(const Scenario& sc, const Field& f, const ReducedInfo& info, std::mt19937_64& rng) {
    std::array<std::array<FieldElement, 3>, 2> gain{};       // gain[t][s]: V_s at slot t
    std::array<TransferMatrix, 2> mt{};
    for (std::size_t t = 0; t < 2; ++t) {
        mt[t] = evaluate_transfer_matrix(sc, f, CodingAssignment::random(sc, f, rng, t));
        const auto chain = free_chain(f, mt[t], info);
        if (!chain) return std::nullopt;
        std::array<FieldElement, 3> theta{};
        for (auto& th : theta) th = f.random(rng);
        for (std::size_t s = 0; s < 3; ++s) gain[t][s] = f.mul(chain->coeff[s], theta[static_cast<std::size_t>(chain->root[s])]);
    }
    for (std::size_t i = 0; i < 3; ++i) {
        Matrix desired(2, 1);
        Matrix interference(2, 2);
        for (std::size_t t = 0; t < 2; ++t) {
            desired(t, 0) = f.mul(mt[t][i][i], gain[t][i]);
            interference(t, 0) = f.mul(mt[t][(i + 1) % 3][i], gain[t][(i + 1) % 3]);
            interference(t, 1) = f.mul(mt[t][(i + 2) % 3][i], gain[t][(i + 2) % 3]);
        }
        if (rank(f, Matrix::hconcat(desired, interference)) != 1 + rank(f, interference)) return false;
    }
    return true;
}

} // namespace

Classification classify(const Scenario& sc, const ClassifyOptions& opts) {
    Classification out;
    CouplingReport& rep = out.report;
    NetworkType& type = out.type;
    rep.connectivity = connectivity(sc);
    rep.full_connectivity = fully_connected(rep.connectivity);

    if (!rep.full_connectivity) {
        type.kind = NetworkKind::Reduced;
        type.reduced = reduced_info(rep.connectivity);
        if (!type.reduced.diagonal_complete) {
            type.rate = Rational::of(0, 1);
            return out;
        }
        // A single full-rank draw proves the scheme generically decodable.
        const Field f(opts.field_bits);
        std::mt19937_64 rng(opts.seed);
        int consecutive = 0;
        for (int t = 0; t < opts.trials && !type.reduced.free_scheme_feasible;) {
            const auto ok = free_scheme_decodable(sc, f, type.reduced, rng);
            if (!ok) {
                if (++consecutive >= kResampleLimit) throw ResampleLimit("100 consecutive draws with a zero denominator");
                continue;
            }
            consecutive = 0;
            ++t;
            type.reduced.free_scheme_feasible = *ok;
        }
        type.rate = type.reduced.free_scheme_feasible ? Rational::of(1, 2) : Rational::of(1, 3);
        return out;
    }

    BottleneckCache cache(sc);
    rep.eta_is_one = check_eta_one(cache);
    const PiRelations pi = check_pi_relations(sc);
    rep.pi_is_one = pi.is_one;
    rep.pi_is_eta = pi.is_eta;
    for (int i = 0; i < 3; ++i) rep.third_relation[static_cast<std::size_t>(i)] = check_third_relation(cache, i);
    type.eta_one = rep.eta_is_one;

    const bool type_one = std::ranges::any_of(pi.is_one, std::identity{}) || std::ranges::any_of(pi.is_eta, std::identity{});
    if (type_one) {
        type.kind = NetworkKind::TypeI;
        type.rate = Rational::of(1, 3);
    } else if (std::ranges::any_of(rep.third_relation, std::identity{})) {
        type.kind = NetworkKind::TypeII;
        type.rate = Rational::of(2, 5);
        // Swap the session carrying the relation into role 0.
        if (rep.third_relation[1]) type.roles = {1, 0, 2};
        else if (rep.third_relation[2]) type.roles = {2, 1, 0};
    } else {
        type.kind = NetworkKind::TypeIII;
        type.rate = Rational::of(1, 2);
    }
    return out;
}

} // namespace pbna
