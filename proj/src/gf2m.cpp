#include "pbna/gf2m.hpp"

#include "pbna/errors.hpp"

#include <array>
#include <bit>
#include <stdexcept>
#include <string>
#include <utility>

namespace pbna {

namespace {

// Low-weight irreducible polynomials, index = degree. Trinomials where one
// exists, pentanomials otherwise; degree 16 uses x^16 + x^12 + x^3 + x + 1.
constexpr std::array<std::uint64_t, 33> kReductionPolys = {
    0,
    0x3,           // x + 1
    0x7,           // x^2 + x + 1
    0xB,           // x^3 + x + 1
    0x13,          // x^4 + x + 1
    0x25,          // x^5 + x^2 + 1
    0x43,          // x^6 + x + 1
    0x83,          // x^7 + x + 1
    0x11D,         // x^8 + x^4 + x^3 + x^2 + 1
    0x211,         // x^9 + x^4 + 1
    0x409,         // x^10 + x^3 + 1
    0x805,         // x^11 + x^2 + 1
    0x1053,        // x^12 + x^6 + x^4 + x + 1
    0x201B,        // x^13 + x^4 + x^3 + x + 1
    0x4443,        // x^14 + x^10 + x^6 + x + 1
    0x8003,        // x^15 + x + 1
    0x1100B,       // x^16 + x^12 + x^3 + x + 1
    0x20009,       // x^17 + x^3 + 1
    0x40081,       // x^18 + x^7 + 1
    0x80027,       // x^19 + x^5 + x^2 + x + 1
    0x100009,      // x^20 + x^3 + 1
    0x200005,      // x^21 + x^2 + 1
    0x400003,      // x^22 + x + 1
    0x800021,      // x^23 + x^5 + 1
    0x1000087,     // x^24 + x^7 + x^2 + x + 1
    0x2000009,     // x^25 + x^3 + 1
    0x4000047,     // x^26 + x^6 + x^2 + x + 1
    0x8000027,     // x^27 + x^5 + x^2 + x + 1
    0x10000009,    // x^28 + x^3 + 1
    0x20000005,    // x^29 + x^2 + 1
    0x40800007,    // x^30 + x^23 + x^2 + x + 1
    0x80000009,    // x^31 + x^3 + 1
    0x100400007,   // x^32 + x^22 + x^2 + x + 1
};

int degree(std::uint64_t p) { return p == 0 ? -1 : 63 - std::countl_zero(p); }

// Carry-less product of two polynomials of degree < 32.
std::uint64_t clmul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    while (b != 0) {
        if (b & 1) r ^= a;
        a <<= 1;
        b >>= 1;
    }
    return r;
}

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t f) {
    const int df = degree(f);
    for (int d = degree(a); d >= df; d = degree(a)) a ^= f << (d - df);
    return a;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t f) { return poly_mod(clmul(a, b), f); }

std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        a = poly_mod(a, b);
        std::swap(a, b);
    }
    return a;
}

// x^(2^k) mod f
std::uint64_t frobenius_power(std::uint64_t f, int k) {
    std::uint64_t r = poly_mod(0x2, f);
    for (int i = 0; i < k; ++i) r = mulmod(r, r, f);
    return r;
}

} // namespace

std::uint64_t default_reduction_poly(int m) {
    if (m < 1 || m > 32) throw std::invalid_argument("field bit-width must be in 1..32, got " + std::to_string(m));
    return kReductionPolys[static_cast<std::size_t>(m)];
}

bool is_irreducible(std::uint64_t poly) {
    const int m = degree(poly);
    if (m < 1 || m > 32) return false;
    if (m == 1) return true;
    if ((poly & 1) == 0) return false;
    if (frobenius_power(poly, m) != 0x2) return false;
    for (int q = 2; q <= m; ++q) {
        if (m % q != 0) continue;
        bool prime = true;
        for (int d = 2; d * d <= q; ++d) prime = prime && (q % d != 0);
        if (!prime) continue;
        const std::uint64_t h = frobenius_power(poly, m / q) ^ 0x2;
        if (poly_gcd(poly, h) != 1) return false;
    }
    return true;
}

FieldSpec FieldSpec::for_bits(int m) { return FieldSpec{m, default_reduction_poly(m)}; }

Field::Field(FieldSpec spec) : spec_(spec) {
    if (spec.m < 1 || spec.m > 32) throw std::invalid_argument("field bit-width must be in 1..32");
    if (degree(spec.reduction_poly) != spec.m || !is_irreducible(spec.reduction_poly))
        throw std::invalid_argument("reduction polynomial is not an irreducible of degree " + std::to_string(spec.m));
}

FieldElement Field::mul(FieldElement a, FieldElement b) const {
    const int m = spec_.m;
    const std::uint64_t f = spec_.reduction_poly;
    std::uint64_t acc = 0;
    std::uint64_t x = a.value;
    std::uint32_t y = b.value;
    // Shift-and-add with reduction folded into each doubling of x.
    while (y != 0) {
        if (y & 1) acc ^= x;
        y >>= 1;
        x <<= 1;
        if ((x >> m) & 1) x ^= f;
    }
    return FieldElement(static_cast<std::uint32_t>(acc));
}

FieldElement Field::pow(FieldElement a, std::uint64_t e) const {
    FieldElement result = kOne;
    while (e != 0) {
        if (e & 1) result = mul(result, a);
        a = mul(a, a);
        e >>= 1;
    }
    return result;
}

FieldElement Field::inv(FieldElement a) const {
    if (a.is_zero()) throw ZeroInverse();
    return pow(a, order() - 2);
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = kOne;
    return m;
}

std::vector<FieldElement> Matrix::column(std::size_t c) const {
    std::vector<FieldElement> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

Matrix Matrix::hconcat(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hconcat: row count mismatch");
    Matrix out(a.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
        for (std::size_t c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(r, c);
    }
    return out;
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
    Matrix out(rows_, cols.size());
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t j = 0; j < cols.size(); ++j) out(r, j) = (*this)(r, cols[j]);
    return out;
}

Matrix multiply(const Field& f, const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: dimension mismatch");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const FieldElement aik = a(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += f.mul(aik, b(k, j));
        }
    return out;
}

std::vector<FieldElement> multiply(const Field& f, const Matrix& a, std::span<const FieldElement> x) {
    if (a.cols() != x.size()) throw std::invalid_argument("multiply: dimension mismatch");
    std::vector<FieldElement> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) out[i] += f.mul(a(i, k), x[k]);
    return out;
}

Matrix scale_rows(const Field& f, std::span<const FieldElement> d, const Matrix& a) {
    if (d.size() != a.rows()) throw std::invalid_argument("scale_rows: dimension mismatch");
    Matrix out = a;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = f.mul(d[r], a(r, c));
    return out;
}

namespace {

// Reduces m (and the optional right-hand side) to row-echelon form in place;
// returns the pivot column of each pivot row.
std::vector<std::size_t> eliminate(const Field& f, Matrix& m, std::vector<FieldElement>* rhs) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && m(sel, col).is_zero()) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row) {
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(sel, c), m(row, c));
            if (rhs) std::swap((*rhs)[sel], (*rhs)[row]);
        }
        const FieldElement scale = f.inv(m(row, col));
        for (std::size_t c = col; c < m.cols(); ++c) m(row, c) = f.mul(m(row, c), scale);
        if (rhs) (*rhs)[row] = f.mul((*rhs)[row], scale);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row) continue;
            const FieldElement factor = m(r, col);
            if (factor.is_zero()) continue;
            for (std::size_t c = col; c < m.cols(); ++c) m(r, c) += f.mul(factor, m(row, c));
            if (rhs) (*rhs)[r] += f.mul(factor, (*rhs)[row]);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace

std::size_t rank(const Field& f, const Matrix& m) {
    Matrix work = m;
    return eliminate(f, work, nullptr).size();
}

std::vector<std::size_t> independent_columns(const Field& f, const Matrix& m) {
    Matrix work = m;
    return eliminate(f, work, nullptr);
}

std::optional<Solution> solve(const Field& f, const Matrix& m, std::span<const FieldElement> y) {
    if (y.size() != m.rows()) throw std::invalid_argument("solve: right-hand side has wrong length");
    Matrix work = m;
    std::vector<FieldElement> rhs(y.begin(), y.end());
    const auto pivots = eliminate(f, work, &rhs);
    for (std::size_t r = pivots.size(); r < rhs.size(); ++r)
        if (!rhs[r].is_zero()) return std::nullopt;
    Solution sol;
    sol.z.assign(m.cols(), kZero);
    for (std::size_t r = 0; r < pivots.size(); ++r) sol.z[pivots[r]] = rhs[r];
    sol.unique = pivots.size() == m.cols();
    return sol;
}

} // namespace pbna
