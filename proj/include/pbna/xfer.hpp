#pragma once

// Transfer functions m_{e e'}(x): the sum over all directed paths e ~> e' of
// the product of the coding coefficients met along the path.

#include "pbna/dag.hpp"
#include "pbna/gf2m.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pbna {

/// Coding coefficients of one time slot, indexed by adjacent-pair index.
struct CodingAssignment {
    std::size_t slot = 0;
    std::vector<FieldElement> coeffs;

    template <class Rng>
    static CodingAssignment random(const Scenario& sc, const Field& f, Rng& rng, std::size_t slot = 0) {
        CodingAssignment x;
        x.slot = slot;
        x.coeffs.reserve(sc.adjacent_pairs().size());
        for (std::size_t i = 0; i < sc.adjacent_pairs().size(); ++i) x.coeffs.push_back(f.random(rng));
        return x;
    }
};

struct TransferValue {
    FieldElement value;
    EdgeId src = 0;
    EdgeId dst = 0;
    std::size_t slot = 0;
};

/// Gain from src to every edge, by one pass in topological order. Edges not
/// reachable from src get zero; src itself gets one.
std::vector<FieldElement> gains_from(const Scenario& sc, const Field& f, const CodingAssignment& x, EdgeId src);

TransferValue evaluate_transfer(const Scenario& sc, const Field& f, const CodingAssignment& x, EdgeId src, EdgeId dst);

/// gains[j][i] = m_{ji}(x): transfer from sigma_j to tau_i (0-based).
using TransferMatrix = std::array<std::array<FieldElement, 3>, 3>;
TransferMatrix evaluate_transfer_matrix(const Scenario& sc, const Field& f, const CodingAssignment& x);

/// Monomial over the coding variables (adjacent-pair indices), stored as a
/// sorted multiset of variable ids: x_3^2 x_7 is {3, 3, 7}.
using Monomial = std::vector<std::uint32_t>;

/// Multivariate polynomial over GF(2). Every coefficient is 1, so a
/// polynomial is a set of monomials and addition is symmetric difference.
class SparsePoly {
public:
    SparsePoly() = default;
    static SparsePoly one() { return SparsePoly(std::vector<Monomial>{Monomial{}}); }
    /// Builds from arbitrary monomials, cancelling those seen an even number of times.
    static SparsePoly from_terms(std::vector<Monomial> terms);

    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    std::span<const Monomial> terms() const { return terms_; }
    /// Largest monomial size.
    std::size_t total_degree() const;
    /// Largest exponent of `var` in any monomial.
    std::size_t degree_in(std::uint32_t var) const;

    friend SparsePoly operator+(const SparsePoly& a, const SparsePoly& b);
    friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b);
    friend bool operator==(const SparsePoly&, const SparsePoly&) = default;

    /// Coefficient of var^power, as a polynomial in the remaining variables.
    SparsePoly coefficient_of(std::uint32_t var, std::size_t power) const;

    FieldElement evaluate(const Field& f, const CodingAssignment& x) const;

private:
    explicit SparsePoly(std::vector<Monomial> sorted_unique) : terms_(std::move(sorted_unique)) {}
    std::vector<Monomial> terms_;
};

/// Path-count ceiling for symbolic enumeration.
inline constexpr std::uint64_t kOraclePathLimit = std::uint64_t{1} << 20;

/// Number of directed paths src ~> dst, saturating at limit + 1.
std::uint64_t count_paths(const Scenario& sc, EdgeId src, EdgeId dst, std::uint64_t limit = kOraclePathLimit);

/// Exact m_{src,dst} by depth-first path enumeration, one monomial per path.
/// Throws TooLarge beyond kOraclePathLimit paths.
SparsePoly oracle_transfer_poly(const Scenario& sc, EdgeId src, EdgeId dst);

/// polys[j][i] = symbolic m_{ji}.
using TransferPolys = std::array<std::array<SparsePoly, 3>, 3>;
TransferPolys oracle_transfer_polys(const Scenario& sc);

/// A session-level transfer-function factor m_{ji}: sender j to receiver i, 0-based.
struct TransferIndex {
    int sender = 0;
    int receiver = 0;
};

enum class RatioKind { P1, P2, P3, Eta, Custom };

/// Product of transfer functions over a product of transfer functions.
struct RatioSpec {
    RatioKind kind = RatioKind::Custom;
    std::vector<TransferIndex> numerator;
    std::vector<TransferIndex> denominator;

    static RatioSpec p(int i);  // i in 1..3
    static RatioSpec eta();
};

std::string to_string(RatioKind k);

/// Value of the ratio at x; nullopt when a denominator factor vanishes.
std::optional<FieldElement> evaluate_ratio(const Field& f, const TransferMatrix& m, const RatioSpec& r);
std::optional<FieldElement> evaluate_ratio(const Scenario& sc, const Field& f, const CodingAssignment& x, const RatioSpec& r);

/// Coefficients of var^2 in m_ab * m_pq and in m_aq * m_pb, where a, p are
/// sender indices and b, q receiver indices (0-based).
std::pair<SparsePoly, SparsePoly> square_term_coefficients(const Scenario& sc, int a, int b, int p, int q, std::uint32_t var);
std::pair<SparsePoly, SparsePoly> square_term_coefficients(const TransferPolys& m, int a, int b, int p, int q, std::uint32_t var);

} // namespace pbna
