#pragma once

// Coupling relations between the transfer functions, their graph-theoretic
// checkers, and the Type I/II/III classifier.

#include "pbna/cuts.hpp"
#include "pbna/dag.hpp"
#include "pbna/gf2m.hpp"
#include "pbna/xfer.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace pbna {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// Exact non-negative fraction, kept reduced.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational of(std::int64_t n, std::int64_t d);
    std::string str() const;
    friend bool operator==(const Rational&, const Rational&) = default;
};

enum class Relation { EtaOne, P1One, P2One, P3One, P1Eta, P2Eta, P3Eta, P1Third, P2Third, P3Third };

inline constexpr std::array<Relation, 10> kAllRelations = {
    Relation::EtaOne, Relation::P1One, Relation::P2One, Relation::P3One, Relation::P1Eta,
    Relation::P2Eta,  Relation::P3Eta, Relation::P1Third, Relation::P2Third, Relation::P3Third,
};

/// Report key: eta_is_one, p1_is_one, ..., p1_is_eta_over_one_plus_eta, p2_is_one_plus_eta, ...
std::string relation_name(Relation r);

/// Sum of products of transfer functions.
using ProductSum = std::vector<std::vector<TransferIndex>>;

/// A relation with denominators cleared: holds iff lhs == rhs as polynomials.
struct ClearedIdentity {
    ProductSum lhs;
    ProductSum rhs;
};

ClearedIdentity cleared_identity(Relation r);

/// Evaluates a ProductSum over any commutative ring given its add and mul.
template <class T, class Add, class Mul>
T evaluate_product_sum(const ProductSum& s, const std::array<std::array<T, 3>, 3>& m, T zero, T one, Add add, Mul mul) {
    T sum = zero;
    for (const auto& product : s) {
        T acc = one;
        for (const TransferIndex& t : product) acc = mul(acc, m[static_cast<std::size_t>(t.sender)][static_cast<std::size_t>(t.receiver)]);
        sum = add(sum, acc);
    }
    return sum;
}

/// Exact verdict from the symbolic transfer functions.
bool exact_relation(const TransferPolys& m, Relation r);
std::array<bool, 10> exact_relations(const TransferPolys& m);

/// Right-hand side of a relation p = f(eta).
enum class EtaForm { One, Eta, EtaOverOnePlusEta, OnePlusEta };

/// The relation as lhs-ratio = f(eta).
std::pair<RatioSpec, EtaForm> relation_ratio_form(Relation r);

struct IdentityVerdict {
    bool all_equal = true;
    int trials = 0;
    int resamples = 0;
    /// Total degree bound of the cleared identity polynomial.
    std::uint64_t degree_bound = 0;
    /// d / 2^m: chance one random point hides a non-identity.
    double single_trial_bound = 0;
    /// (d / 2^m)^trials.
    double false_accept_bound = 0;
};

/// Longest path length in edges minus one: a bound on the degree of every m_ee'.
std::uint64_t transfer_degree_bound(const Scenario& sc);

/// Tests lhs == rhs(eta) at random points after clearing denominators,
/// redrawing any point where a denominator factor vanishes. Stops at the
/// first counterexample. Throws ResampleLimit after 100 consecutive redraws.
IdentityVerdict randomized_identity_check(const Scenario& sc, const RatioSpec& lhs, EtaForm rhs, int trials, const Field& f,
                                          std::mt19937_64& rng);
IdentityVerdict randomized_identity_check(const Scenario& sc, Relation r, int trials, const Field& f, std::mt19937_64& rng);

/// connectivity[j][i]: sigma_j reaches tau_i.
using Connectivity = std::array<std::array<bool, 3>, 3>;
Connectivity connectivity(const Scenario& sc);
bool fully_connected(const Connectivity& c);

/// alpha_213 == alpha_312 and beta_213 == beta_312. Throws Disconnected.
bool check_eta_one(BottleneckCache& cache);
bool check_eta_one(const Scenario& sc);

struct PiRelations {
    std::array<bool, 3> is_one{};
    std::array<bool, 3> is_eta{};
};

/// Six unit min-cut tests. Throws Disconnected without full connectivity.
PiRelations check_pi_relations(const Scenario& sc);

/// Third relation for session i (0-based): p1 = eta/(1+eta), p2 = 1+eta or
/// p3 = 1+eta. Throws Disconnected.
bool check_third_relation(BottleneckCache& cache, int i);
bool check_third_relation(const Scenario& sc, int i);

struct CouplingReport {
    Connectivity connectivity{};
    bool full_connectivity = false;
    /// The flags below are only meaningful with full connectivity.
    bool eta_is_one = false;
    std::array<bool, 3> pi_is_one{};
    std::array<bool, 3> pi_is_eta{};
    std::array<bool, 3> third_relation{};

    bool flag(Relation r) const;
};

enum class NetworkKind { TypeI, TypeII, TypeIII, Reduced };
std::string to_string(NetworkKind k);

/// Which sender/receiver pairs the free-V1 scheme aligns in the reduced case.
struct ReducedInfo {
    /// active[i]: alignment needed at receiver i (both interferers connected).
    std::array<bool, 3> active_alignment{};
    bool diagonal_complete = false;
    bool free_scheme_feasible = false;
};

struct NetworkType {
    NetworkKind kind = NetworkKind::TypeIII;
    Rational rate;
    bool eta_one = false;
    /// roles[r] = session playing role r; Type II puts the session with the
    /// third relation in role 0.
    std::array<int, 3> roles{0, 1, 2};
    ReducedInfo reduced;
};

struct ClassifyOptions {
    int field_bits = 32;
    int trials = 20;
    std::uint64_t seed = kDefaultSeed;
};

struct Classification {
    CouplingReport report;
    NetworkType type;
};

Classification classify(const Scenario& sc, const ClassifyOptions& opts = {});

} // namespace pbna

namespace pbna {

/// Precoder of the reduced-case free-V1 scheme for one slot: sender s sends
/// coeff[s] * theta[root[s]], where theta are per-slot free symbols.
struct FreeChain {
    std::array<int, 3> root{0, 1, 2};
    std::array<FieldElement, 3> coeff{kOne, kOne, kOne};
};

/// Links senders through every active alignment condition. nullopt when a
/// denominator transfer value is zero in this slot.
std::optional<FreeChain> free_chain(const Field& f, const TransferMatrix& m, const ReducedInfo& info);

/// Active alignment conditions for a connectivity pattern.
ReducedInfo reduced_info(const Connectivity& c);

} // namespace pbna
