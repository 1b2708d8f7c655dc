#pragma once

// Precoding schemes for the three-unicast network, their alignment and rank
// checks, and an encode/propagate/decode simulator.

#include "pbna/dag.hpp"
#include "pbna/feasibility.hpp"
#include "pbna/gf2m.hpp"
#include "pbna/xfer.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace pbna {

enum class PlanKind {
    EtaGeneral,    // 2n+1 slots, (n+1, n, n) symbols
    EtaOne,        // 2 slots, one symbol each; needs eta = 1
    TypeTwoFive,   // 5 slots, two symbols each
    TrivialThird,  // 3 slots, one symbol each, no alignment
    ReducedFree,   // 2 slots, free V1 chained through the active alignments
};

std::string to_string(PlanKind k);

struct PrecodingPlan {
    PlanKind kind = PlanKind::EtaOne;
    int n = 0;  // EtaGeneral only
    std::size_t slots = 0;
    std::array<std::size_t, 3> k{};  // source symbols per session
    /// roles[r] = session playing role r in the construction.
    std::array<int, 3> roles{0, 1, 2};
    ReducedInfo reduced;

    /// k_s / N per session.
    std::array<Rational, 3> rates() const;
};

/// Plan of the given kind; n is used by EtaGeneral only (n >= 1).
PrecodingPlan make_plan(PlanKind kind, int n = 1, std::array<int, 3> roles = {0, 1, 2});

/// Type III with eta != 1 -> EtaGeneral{n}; eta = 1 -> EtaOne; Type II ->
/// TypeTwoFive; Type I -> TrivialThird; Reduced -> ReducedFree, or
/// TrivialThird when the free scheme cannot decode. Throws Error when no
/// positive symmetric rate exists.
PrecodingPlan build_plan(const NetworkType& nt, int n = 2);

struct EvaluatedScheme {
    PrecodingPlan plan;
    std::vector<CodingAssignment> assignments;  // one per slot
    std::vector<TransferMatrix> transfer;        // transfer[t][j][i] = m_ji at slot t
    /// Per-slot ratios, by role: eta, m13/m23 and m12/m32.
    std::vector<FieldElement> eta;
    std::vector<FieldElement> ratio_13_23;
    std::vector<FieldElement> ratio_12_32;
    /// theta[s][t]: free precoder symbols (EtaOne, TrivialThird, ReducedFree).
    std::array<std::vector<FieldElement>, 3> theta;
    /// Designed precoding matrices by session, N x columns.
    std::array<Matrix, 3> V;
    /// Columns of V[s] that carry data; all of them except for the primary
    /// sender of TypeTwoFive.
    std::array<std::vector<std::size_t>, 3> data_columns;
    /// Draws discarded for a zero denominator.
    int resamples = 0;

    /// Length-N diagonal of M_ji.
    std::vector<FieldElement> M(int j, int i) const;
    /// V[s] restricted to its data columns.
    Matrix transmitted(int s) const;
};

/// Draws one assignment per slot (redrawing a slot while a denominator
/// factor is zero) and builds the precoders. Throws ResampleLimit after 100
/// consecutive redraws.
EvaluatedScheme evaluate_precoding(const Scenario& sc, const PrecodingPlan& plan, const Field& f, std::mt19937_64& rng);

/// diag(M_ji) * matrix.
Matrix through(const Field& f, const EvaluatedScheme& es, int j, int i, const Matrix& v);

/// Every alignment condition the plan imposes holds. TrivialThird imposes none.
bool check_alignment(const Field& f, const EvaluatedScheme& es);

/// Rank conditions by role. EtaGeneral/EtaOne/TypeTwoFive: rank of desired
/// plus one interferer equals N (TypeTwoFive role 0 instead needs rank 4 with
/// its two data columns). TrivialThird and ReducedFree: each receiver
/// separates its symbols from the interference span.
std::array<bool, 3> check_rank(const Field& f, const EvaluatedScheme& es);

/// Receiver symbols for one slot, by local linear combination in
/// topological order.
std::array<FieldElement, 3> propagate(const Scenario& sc, const Field& f, const CodingAssignment& x,
                                      const std::array<FieldElement, 3>& injected);

struct SimulationResult {
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::array<std::size_t, 3> receiver_failures{};
    std::array<Rational, 3> rates;
    double success_probability = 0;
    int field_bits = 0;
    std::uint64_t seed = 0;
    int resamples = 0;
    /// Degree estimate of the decoding determinants and d / 2^m.
    std::uint64_t degree_estimate = 0;
    double failure_bound = 0;
};

/// Total-degree estimate of the product of the three decoding determinants.
std::uint64_t decoding_degree_estimate(const Scenario& sc, const PrecodingPlan& plan);

SimulationResult simulate(const Scenario& sc, const PrecodingPlan& plan, std::size_t trials, const Field& f, std::uint64_t seed);

} // namespace pbna
