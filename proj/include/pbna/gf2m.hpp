#pragma once

// Arithmetic in GF(2^m), 1 <= m <= 32, and dense linear algebra over it.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace pbna {

/// One symbol of GF(2^m): the coefficient bitmask of a polynomial in x of
/// degree < m.
struct FieldElement {
    std::uint32_t value = 0;

    constexpr FieldElement() = default;
    constexpr explicit FieldElement(std::uint32_t v) : value(v) {}

    constexpr bool is_zero() const { return value == 0; }
    friend constexpr bool operator==(FieldElement, FieldElement) = default;
};

/// Addition in characteristic 2 does not depend on the modulus.
constexpr FieldElement operator+(FieldElement a, FieldElement b) { return FieldElement(a.value ^ b.value); }
constexpr FieldElement& operator+=(FieldElement& a, FieldElement b) { return a = a + b; }

inline constexpr FieldElement kZero{0};
inline constexpr FieldElement kOne{1};

/// Built-in irreducible polynomial of degree m (bit i = coefficient of x^i,
/// bit m set). Throws std::invalid_argument outside 1..32.
std::uint64_t default_reduction_poly(int m);

/// Rabin irreducibility test over GF(2) for a polynomial of degree <= 32.
bool is_irreducible(std::uint64_t poly);

struct FieldSpec {
    int m = 16;
    std::uint64_t reduction_poly = 0;

    /// Spec for the built-in polynomial of degree m.
    static FieldSpec for_bits(int m);
};

/// GF(2^m) with a fixed reduction polynomial. Cheap to copy.
class Field {
public:
    /// Validates that the polynomial has degree m and is irreducible.
    explicit Field(FieldSpec spec);
    explicit Field(int m) : Field(FieldSpec::for_bits(m)) {}

    int bits() const { return spec_.m; }
    const FieldSpec& spec() const { return spec_; }
    std::uint64_t order() const { return std::uint64_t{1} << spec_.m; }
    bool contains(FieldElement a) const { return (std::uint64_t{a.value} >> spec_.m) == 0; }

    FieldElement add(FieldElement a, FieldElement b) const { return a + b; }
    FieldElement mul(FieldElement a, FieldElement b) const;
    FieldElement pow(FieldElement a, std::uint64_t e) const;
    /// a^(2^m - 2); throws ZeroInverse for a = 0.
    FieldElement inv(FieldElement a) const;
    FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }

    /// Uniform draw over the whole field.
    template <class Rng>
    FieldElement random(Rng& rng) const {
        std::uniform_int_distribution<std::uint64_t> dist(0, order() - 1);
        return FieldElement(static_cast<std::uint32_t>(dist(rng)));
    }

    /// Uniform draw over the nonzero elements.
    template <class Rng>
    FieldElement random_nonzero(Rng& rng) const {
        std::uniform_int_distribution<std::uint64_t> dist(1, order() - 1);
        return FieldElement(static_cast<std::uint32_t>(dist(rng)));
    }

private:
    FieldSpec spec_;
};

/// Dense row-major matrix of field elements.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    FieldElement& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    FieldElement operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<FieldElement> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const FieldElement> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<FieldElement> column(std::size_t c) const;

    /// Horizontal concatenation [a | b]; row counts must match.
    static Matrix hconcat(const Matrix& a, const Matrix& b);
    /// Sub-matrix made of the listed columns, in order.
    Matrix select_columns(std::span<const std::size_t> cols) const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<FieldElement> data_;
};

Matrix multiply(const Field& f, const Matrix& a, const Matrix& b);
std::vector<FieldElement> multiply(const Field& f, const Matrix& a, std::span<const FieldElement> x);
/// diag(d) * a, scaling row r by d[r].
Matrix scale_rows(const Field& f, std::span<const FieldElement> d, const Matrix& a);

/// Exact rank by Gaussian elimination.
std::size_t rank(const Field& f, const Matrix& m);

/// Indices of a maximal linearly independent subset of the columns, chosen
/// greedily left to right.
std::vector<std::size_t> independent_columns(const Field& f, const Matrix& m);

struct Solution {
    std::vector<FieldElement> z;
    /// False when rank(M) < cols and z is one of many solutions.
    bool unique = true;
};

/// Solves M z = y. Returns nullopt when the system is inconsistent; free
/// variables are set to zero.
std::optional<Solution> solve(const Field& f, const Matrix& m, std::span<const FieldElement> y);

} // namespace pbna
