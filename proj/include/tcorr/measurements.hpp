/*
 * Projective measurements and mutually unbiased bases for d = 2, 3.
 */
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tcorr/matrix.hpp"

namespace tcorr {

/// Projection-valued measure: orthogonal projectors summing to identity.
struct Pvm {
    int dim = 0;
    std::vector<HermitianOperator> outcomes;

    Pvm(int d, std::vector<HermitianOperator> projs) : dim(d), outcomes(std::move(projs)) {
        ComplexMatrix sum(d, d);
        for (const auto& p : outcomes) {
            if (p.dim() != d) throw std::invalid_argument("Pvm: projector dim mismatch");
            if ((p.mat() * p.mat() - p.mat()).max_abs() > 1e-10)
                throw std::invalid_argument("Pvm: outcome not idempotent");
            sum += p.mat();
        }
        for (const auto& p : outcomes)
            for (const auto& q : outcomes)
                if (&p != &q && (p.mat() * q.mat()).max_abs() > 1e-10)
                    throw std::invalid_argument("Pvm: outcomes not orthogonal");
        if ((sum - ComplexMatrix::identity(d)).max_abs() > 1e-10)
            throw std::invalid_argument("Pvm: outcomes do not sum to identity");
    }

    static Pvm from_basis_columns(const ComplexMatrix& u) {
        const int d = u.rows();
        std::vector<HermitianOperator> projs;
        projs.reserve(d);
        for (int k = 0; k < d; ++k) {
            ComplexMatrix p(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) p(i, j) = u(i, k) * std::conj(u(j, k));
            projs.emplace_back(p);
        }
        return Pvm(d, std::move(projs));
    }
};

/// sqrt(M) for a POVM effect; collapses to M itself when M is a projector.
inline HermitianOperator effect_sqrt(const HermitianOperator& m) {
    if ((m.mat() * m.mat() - m.mat()).max_abs() <= 1e-10) return m;
    return hermitian_function(m, [](double e) { return std::sqrt(std::max(0.0, e)); });
}

/*
 * Up to d+1 mutually unbiased bases, ordered as the eigenbases of the
 * generalized Z, X, XZ, XZ^2 operators. For d = 3 the non-computational
 * bases have vectors v_j = w^{2 m j^2 + k j}/sqrt(3), w = e^{2 pi i/3}.
 */
inline std::vector<Pvm> mub_pvms(int d, int count) {
    if (d != 2 && d != 3) throw std::invalid_argument("mub_pvms: d must be 2 or 3");
    if (count < 1 || count > d + 1)
        throw std::invalid_argument("mub_pvms: count must be in [1, d+1]");

    std::vector<ComplexMatrix> bases;
    bases.push_back(ComplexMatrix::identity(d));
    if (d == 2) {
        const double r = 1.0 / std::sqrt(2.0);
        const complexd i1(0.0, 1.0);
        bases.push_back(ComplexMatrix(2, 2, {r, r, r, -r}));            // X eigenbasis
        bases.push_back(ComplexMatrix(2, 2, {r, r, i1 * r, -i1 * r}));  // Y (= XZ) eigenbasis
    } else {
        const double r = 1.0 / std::sqrt(3.0);
        for (int m = 0; m < 3; ++m) {
            ComplexMatrix u(3, 3);
            for (int k = 0; k < 3; ++k)
                for (int j = 0; j < 3; ++j) {
                    const int expo = (2 * m * j * j + k * j) % 3;
                    const double ang = 2.0 * M_PI * expo / 3.0;
                    u(j, k) = complexd(std::cos(ang), std::sin(ang)) * r;
                }
            bases.push_back(u);
        }
    }

    std::vector<Pvm> out;
    for (int i = 0; i < count; ++i) out.push_back(Pvm::from_basis_columns(bases[i]));
    return out;
}

}  // namespace tcorr
