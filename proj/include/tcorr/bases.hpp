/*
 * Operator bases used to expand states over time and correlation tensors.
 *
 * pauli              (d=2): {I, sx, sy, sz},            tr(G_i G_j) = 2 d_ij
 * wigner_qutrit      (d=3): phase-point operators K1..K9, tr(K_i K_j) = 3 d_ij,
 *                           tr(K_i) = 1, sum_i K_i = 3 I, spectrum {1, 1, -1}
 * gellmann_normalized      : I/sqrt(d) + SU(d) generators scaled to tr(G^2) = 1
 *
 * Element ordering is part of the public contract; downstream indexing
 * depends on it.  Index tables:
 *   pauli:              0:I  1:sx  2:sy  3:sz
 *   wigner_qutrit:      0..8 = K1..K9 in the order below (K7=K4^T etc.)
 *   gellmann_normalized d=3: 0:I/sqrt3, then the standard eight generators
 *                       (sym 01, antisym 01, diag(1,-1,0), sym 02, antisym 02,
 *                        sym 12, antisym 12, diag(1,1,-2)/sqrt3), each /sqrt2
 */
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcorr/matrix.hpp"

namespace tcorr {

enum class BasisKind { pauli, wigner_qutrit, gellmann_normalized };

struct OperatorBasis {
    int dim = 0;
    BasisKind kind = BasisKind::pauli;
    std::vector<HermitianOperator> elements;  // d^2 entries

    /// tr(G_i^2), constant across a basis by construction.
    double element_norm2() const { return hs_inner(elements[0].mat(), elements[0].mat()); }
};

namespace detail {

inline ComplexMatrix mat2(complexd a, complexd b, complexd c, complexd d) {
    return ComplexMatrix(2, 2, {a, b, c, d});
}

inline ComplexMatrix mat3(std::initializer_list<complexd> e) {
    return ComplexMatrix(3, 3, std::vector<complexd>(e));
}

inline void verify_orthogonality(const OperatorBasis& basis, double norm2, double tol) {
    const int n = static_cast<int>(basis.elements.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double g = hs_inner(basis.elements[i].mat(), basis.elements[j].mat());
            const double want = (i == j) ? norm2 : 0.0;
            if (std::abs(g - want) > tol)
                throw numerical_error("operator basis: Gram entry (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") = " + std::to_string(g));
        }
}

}  // namespace detail

inline OperatorBasis pauli_basis() {
    using detail::mat2;
    const complexd i1(0.0, 1.0);
    OperatorBasis b;
    b.dim = 2;
    b.kind = BasisKind::pauli;
    b.elements.emplace_back(mat2(1, 0, 0, 1));
    b.elements.emplace_back(mat2(0, 1, 1, 0));
    b.elements.emplace_back(mat2(0, -i1, i1, 0));
    b.elements.emplace_back(mat2(1, 0, 0, -1));
    detail::verify_orthogonality(b, 2.0, 1e-12);
    return b;
}

/*
 * The nine qutrit phase-point operators. K1..K3 are the real permutation
 * forms, K4..K6 carry the cube-root-of-unity phases w = (-1 + i sqrt3)/2,
 * and K7..K9 are the transposes of K4..K6.
 */
inline OperatorBasis wigner_qutrit_basis() {
    using detail::mat3;
    const complexd w(-0.5, std::sqrt(3.0) / 2.0);   // e^{2 pi i/3}
    const complexd wc = std::conj(w);

    OperatorBasis b;
    b.dim = 3;
    b.kind = BasisKind::wigner_qutrit;
    b.elements.emplace_back(mat3({1, 0, 0, 0, 0, 1, 0, 1, 0}));
    b.elements.emplace_back(mat3({0, 1, 0, 1, 0, 0, 0, 0, 1}));
    b.elements.emplace_back(mat3({0, 0, 1, 0, 1, 0, 1, 0, 0}));
    b.elements.emplace_back(mat3({1, 0, 0, 0, 0, wc, 0, w, 0}));
    b.elements.emplace_back(mat3({0, wc, 0, w, 0, 0, 0, 0, 1}));
    b.elements.emplace_back(mat3({0, 0, wc, 0, 1, 0, w, 0, 0}));
    for (int k = 3; k < 6; ++k)
        b.elements.emplace_back(b.elements[k].mat().transpose());

    // Construction-time checks: sum K = 3I, tr(K_i K_j) = 3 d_ij, tr K_i = 1.
    ComplexMatrix sum(3, 3);
    for (const auto& k : b.elements) {
        sum += k.mat();
        if (std::abs(k.trace() - 1.0) > 1e-14)
            throw numerical_error("wigner_qutrit_basis: unit-trace violation");
    }
    if ((sum - ComplexMatrix::identity(3) * complexd(3.0)).max_abs() > 1e-14)
        throw numerical_error("wigner_qutrit_basis: resolution of identity violation");
    detail::verify_orthogonality(b, 3.0, 1e-12);
    return b;
}

inline OperatorBasis gellmann_basis(int d) {
    if (d != 2 && d != 3)
        throw std::invalid_argument("gellmann_basis: only d in {2,3} supported");
    OperatorBasis b;
    b.dim = d;
    b.kind = BasisKind::gellmann_normalized;
    b.elements.emplace_back(ComplexMatrix::identity(d) * complexd(1.0 / std::sqrt(double(d))));
    const double r = 1.0 / std::sqrt(2.0);
    const complexd i1(0.0, 1.0);
    for (int p = 0; p < d; ++p)
        for (int q = p + 1; q < d; ++q) {
            ComplexMatrix sym(d, d), asym(d, d);
            sym(p, q) = r;
            sym(q, p) = r;
            asym(p, q) = -i1 * r;
            asym(q, p) = i1 * r;
            b.elements.emplace_back(sym);
            b.elements.emplace_back(asym);
        }
    // Diagonal generators diag(1,..,1,-k,0,..)/sqrt(k(k+1)), k = 1..d-1.
    for (int k = 1; k < d; ++k) {
        ComplexMatrix m(d, d);
        const double norm = 1.0 / std::sqrt(double(k) * (k + 1));
        for (int i = 0; i < k; ++i) m(i, i) = norm;
        m(k, k) = -double(k) * norm;
        b.elements.emplace_back(m);
    }
    detail::verify_orthogonality(b, 1.0, 1e-12);
    return b;
}

/*
 * Coefficients of a bipartite operator over basisA (x) basisB, scaled so the
 * reconstruction  op = sum_ij C_ij G_i (x) G_j  is exact:
 *   C_ij = tr[op (G_i (x) G_j)] / (tr(G_i^2) tr(G_j^2)).
 * For orthonormal bases (gellmann_normalized) this is the plain overlap.
 */
struct CorrelationTensor {
    int rows = 0, cols = 0;
    std::vector<double> c;  // row-major

    double& operator()(int i, int j) { return c[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return c[static_cast<std::size_t>(i) * cols + j]; }

    ComplexMatrix as_matrix() const {
        ComplexMatrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = (*this)(i, j);
        return m;
    }
};

inline CorrelationTensor expand(const HermitianOperator& op, const OperatorBasis& basis_a,
                                const OperatorBasis& basis_b) {
    if (op.dim() != basis_a.dim * basis_b.dim)
        throw std::invalid_argument("expand: operator dim does not match basis dims");
    const double na = basis_a.element_norm2();
    const double nb = basis_b.element_norm2();
    CorrelationTensor t;
    t.rows = static_cast<int>(basis_a.elements.size());
    t.cols = static_cast<int>(basis_b.elements.size());
    t.c.resize(static_cast<std::size_t>(t.rows) * t.cols);
    for (int i = 0; i < t.rows; ++i)
        for (int j = 0; j < t.cols; ++j) {
            const HermitianOperator gij = kron(basis_a.elements[i], basis_b.elements[j]);
            t(i, j) = hs_inner(gij.mat(), op.mat()) / (na * nb);
        }
    return t;
}

inline HermitianOperator reconstruct(const CorrelationTensor& t, const OperatorBasis& basis_a,
                                     const OperatorBasis& basis_b) {
    const int d = basis_a.dim * basis_b.dim;
    ComplexMatrix m(d, d);
    for (int i = 0; i < t.rows; ++i)
        for (int j = 0; j < t.cols; ++j) {
            if (t(i, j) == 0.0) continue;
            m += kron(basis_a.elements[i].mat(), basis_b.elements[j].mat()) * complexd(t(i, j));
        }
    return HermitianOperator(m);
}

}  // namespace tcorr
