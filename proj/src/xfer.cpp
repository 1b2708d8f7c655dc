#include "pbna/xfer.hpp"

#include "pbna/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace pbna {

std::vector<FieldElement> gains_from(const Scenario& sc, const Field& f, const CodingAssignment& x, EdgeId src) {
    if (x.coeffs.size() != sc.adjacent_pairs().size()) throw std::invalid_argument("coding assignment does not match scenario");
    std::vector<FieldElement> gain(sc.edge_count(), kZero);
    gain[src] = kOne;
    const auto order = sc.topological_order();
    for (std::size_t pos = sc.position(src) + 1; pos < order.size(); ++pos) {
        const EdgeId e = order[pos];
        const auto preds = sc.predecessors(e);
        const auto pairs = sc.incoming_pairs(e);
        FieldElement acc = kZero;
        for (std::size_t k = 0; k < preds.size(); ++k) {
            const FieldElement g = gain[preds[k]];
            if (!g.is_zero()) acc += f.mul(x.coeffs[pairs[k]], g);
        }
        gain[e] = acc;
    }
    return gain;
}

TransferValue evaluate_transfer(const Scenario& sc, const Field& f, const CodingAssignment& x, EdgeId src, EdgeId dst) {
    return TransferValue{gains_from(sc, f, x, src)[dst], src, dst, x.slot};
}

TransferMatrix evaluate_transfer_matrix(const Scenario& sc, const Field& f, const CodingAssignment& x) {
    TransferMatrix m{};
    for (int j = 0; j < 3; ++j) {
        const auto g = gains_from(sc, f, x, sc.sigma(j));
        for (int i = 0; i < 3; ++i) m[j][i] = g[sc.tau(i)];
    }
    return m;
}

SparsePoly SparsePoly::from_terms(std::vector<Monomial> terms) {
    for (Monomial& t : terms) std::sort(t.begin(), t.end());
    std::sort(terms.begin(), terms.end());
    std::vector<Monomial> out;
    out.reserve(terms.size());
    for (std::size_t i = 0; i < terms.size();) {
        std::size_t j = i;
        while (j < terms.size() && terms[j] == terms[i]) ++j;
        if ((j - i) % 2 == 1) out.push_back(std::move(terms[i]));
        i = j;
    }
    return SparsePoly(std::move(out));
}

std::size_t SparsePoly::total_degree() const {
    std::size_t d = 0;
    for (const Monomial& t : terms_) d = std::max(d, t.size());
    return d;
}

std::size_t SparsePoly::degree_in(std::uint32_t var) const {
    std::size_t d = 0;
    for (const Monomial& t : terms_) d = std::max(d, static_cast<std::size_t>(std::count(t.begin(), t.end(), var)));
    return d;
}

SparsePoly operator+(const SparsePoly& a, const SparsePoly& b) {
    std::vector<Monomial> out;
    out.reserve(a.terms_.size() + b.terms_.size());
    std::set_symmetric_difference(a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(), std::back_inserter(out));
    return SparsePoly(std::move(out));
}

SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
    std::vector<Monomial> products;
    products.reserve(a.terms_.size() * b.terms_.size());
    for (const Monomial& s : a.terms_)
        for (const Monomial& t : b.terms_) {
            Monomial prod;
            prod.reserve(s.size() + t.size());
            std::merge(s.begin(), s.end(), t.begin(), t.end(), std::back_inserter(prod));
            products.push_back(std::move(prod));
        }
    return SparsePoly::from_terms(std::move(products));
}

SparsePoly SparsePoly::coefficient_of(std::uint32_t var, std::size_t power) const {
    std::vector<Monomial> out;
    for (const Monomial& t : terms_) {
        if (static_cast<std::size_t>(std::count(t.begin(), t.end(), var)) != power) continue;
        Monomial rest;
        std::copy_if(t.begin(), t.end(), std::back_inserter(rest), [var](std::uint32_t v) { return v != var; });
        out.push_back(std::move(rest));
    }
    return from_terms(std::move(out));
}

FieldElement SparsePoly::evaluate(const Field& f, const CodingAssignment& x) const {
    FieldElement sum = kZero;
    for (const Monomial& t : terms_) {
        FieldElement prod = kOne;
        for (std::uint32_t v : t) prod = f.mul(prod, x.coeffs.at(v));
        sum += prod;
    }
    return sum;
}

std::uint64_t count_paths(const Scenario& sc, EdgeId src, EdgeId dst, std::uint64_t limit) {
    std::vector<std::uint64_t> paths(sc.edge_count(), 0);
    paths[src] = 1;
    const auto order = sc.topological_order();
    for (std::size_t pos = sc.position(src) + 1; pos <= sc.position(dst) && pos < order.size(); ++pos) {
        const EdgeId e = order[pos];
        std::uint64_t total = 0;
        for (EdgeId p : sc.predecessors(e)) total = std::min(total + paths[p], limit + 1);
        paths[e] = total;
    }
    return paths[dst];
}

SparsePoly oracle_transfer_poly(const Scenario& sc, EdgeId src, EdgeId dst) {
    if (count_paths(sc, src, dst) > kOraclePathLimit)
        throw TooLarge("more than 2^20 paths from edge '" + sc.edge(src).name + "' to '" + sc.edge(dst).name + "'");
    if (src == dst) return SparsePoly::one();

    const EdgeSet useful = sc.reachable_edges(dst, Direction::Backward);
    std::vector<Monomial> terms;
    Monomial path;
    // Explicit DFS stack of (edge, next successor index).
    std::vector<std::pair<EdgeId, std::size_t>> stack{{src, 0}};
    while (!stack.empty()) {
        auto& [edge, next] = stack.back();
        const auto succ = sc.successors(edge);
        if (next == succ.size()) {
            stack.pop_back();
            if (!path.empty()) path.pop_back();
            continue;
        }
        const EdgeId to = succ[next++];
        if (!useful[to]) continue;
        // Coefficient x_{edge,to}: locate the pair index in incoming_pairs(to).
        const auto preds = sc.predecessors(to);
        const auto in_pairs = sc.incoming_pairs(to);
        const auto at = static_cast<std::size_t>(std::find(preds.begin(), preds.end(), edge) - preds.begin());
        path.push_back(in_pairs[at]);
        if (to == dst) {
            terms.push_back(path);
            path.pop_back();
            continue;
        }
        stack.emplace_back(to, 0);
    }
    return SparsePoly::from_terms(std::move(terms));
}

TransferPolys oracle_transfer_polys(const Scenario& sc) {
    TransferPolys m;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) m[j][i] = oracle_transfer_poly(sc, sc.sigma(j), sc.tau(i));
    return m;
}

RatioSpec RatioSpec::p(int i) {
    switch (i) {
    case 1: return {RatioKind::P1, {{0, 2}, {1, 0}}, {{0, 0}, {1, 2}}};  // m13 m21 / (m11 m23)
    case 2: return {RatioKind::P2, {{0, 2}, {1, 1}}, {{0, 1}, {1, 2}}};  // m13 m22 / (m12 m23)
    case 3: return {RatioKind::P3, {{1, 0}, {2, 2}}, {{1, 2}, {2, 0}}};  // m21 m33 / (m23 m31)
    default: throw std::invalid_argument("p index must be 1..3");
    }
}

RatioSpec RatioSpec::eta() {
    // m13 m21 m32 / (m12 m23 m31)
    return {RatioKind::Eta, {{0, 2}, {1, 0}, {2, 1}}, {{0, 1}, {1, 2}, {2, 0}}};
}

std::string to_string(RatioKind k) {
    switch (k) {
    case RatioKind::P1: return "p1";
    case RatioKind::P2: return "p2";
    case RatioKind::P3: return "p3";
    case RatioKind::Eta: return "eta";
    case RatioKind::Custom: return "custom";
    }
    return "?";
}

std::optional<FieldElement> evaluate_ratio(const Field& f, const TransferMatrix& m, const RatioSpec& r) {
    FieldElement num = kOne;
    FieldElement den = kOne;
    for (const auto& t : r.denominator) {
        const FieldElement v = m[static_cast<std::size_t>(t.sender)][static_cast<std::size_t>(t.receiver)];
        if (v.is_zero()) return std::nullopt;
        den = f.mul(den, v);
    }
    for (const auto& t : r.numerator) num = f.mul(num, m[static_cast<std::size_t>(t.sender)][static_cast<std::size_t>(t.receiver)]);
    return f.div(num, den);
}

std::optional<FieldElement> evaluate_ratio(const Scenario& sc, const Field& f, const CodingAssignment& x, const RatioSpec& r) {
    return evaluate_ratio(f, evaluate_transfer_matrix(sc, f, x), r);
}

std::pair<SparsePoly, SparsePoly> square_term_coefficients(const TransferPolys& m, int a, int b, int p, int q, std::uint32_t var) {
    auto at = [&](int j, int i) -> const SparsePoly& { return m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]; };
    const SparsePoly direct = at(a, b) * at(p, q);
    const SparsePoly crossed = at(a, q) * at(p, b);
    return {direct.coefficient_of(var, 2), crossed.coefficient_of(var, 2)};
}

std::pair<SparsePoly, SparsePoly> square_term_coefficients(const Scenario& sc, int a, int b, int p, int q, std::uint32_t var) {
    return square_term_coefficients(oracle_transfer_polys(sc), a, b, p, q, var);
}

} // namespace pbna
