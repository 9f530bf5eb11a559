/*
 * Two-time states over time for a single qudit evolving through a channel.
 *
 * Two constructions are provided:
 *
 *   build_pdo    : R = (1/d^2) sum_ij <G_i (x) G_j> G_i (x) G_j, where the
 *                  expectation of the product of the two measured outcomes is
 *                  <G_i (x) G_j> = sum_a a tr[E (P_{i,a} rho P_{i,a} (x) G_j)]
 *                  with P_{i,a} the projector onto the (clustered) eigenspace
 *                  of G_i for outcome a.  Basis: pauli (d=2) or the qutrit
 *                  phase-point operators (d=3).
 *
 *   build_wigner : R = sum_ij r(j|i) r(i) K_i (x) K_j with quasi-probabilities
 *                  r(i) = tr(rho K_i)/d and r(j|i) = tr[E (K_i (x) K_j)]/d.
 *                  The 1/d factors make tr R = 1, sum_i r(i) = 1 and
 *                  sum_j r(j|i) = 1, and give R = E/d at maximally mixed
 *                  input. Qutrit only.
 *
 * Both yield a trace-1 Hermitian operator on the doubled space whose A-side
 * marginal is the initial state; negative eigenvalues signal time-like
 * correlations, quantified by causality_f = trace norm - 1.
 */
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcorr/bases.hpp"
#include "tcorr/channels.hpp"
#include "tcorr/matrix.hpp"
#include "tcorr/measurements.hpp"

namespace tcorr {

enum class Construction { pdo, wigner };

struct StateOverTime {
    int dim_a = 0, dim_b = 0;
    HermitianOperator op;
    Construction construction = Construction::pdo;
    // provenance
    HermitianOperator initial_state;
    Channel channel;

    StateOverTime(int da, int db, HermitianOperator o, Construction c, HermitianOperator rho,
                  Channel ch)
        : dim_a(da), dim_b(db), op(std::move(o)), construction(c), initial_state(std::move(rho)),
          channel(ch) {
        if (op.dim() != da * db) throw std::invalid_argument("StateOverTime: dims mismatch");
        if (std::abs(op.trace() - 1.0) > 1e-10)
            throw std::invalid_argument("StateOverTime: trace != 1 (" +
                                        std::to_string(op.trace()) + ")");
    }
};

namespace detail {

inline void check_state(const HermitianOperator& rho) {
    if (std::abs(rho.trace() - 1.0) > 1e-10)
        throw std::invalid_argument("state over time: initial state trace != 1");
    if (min_eigenvalue(rho) < -1e-10)
        throw std::invalid_argument("state over time: initial state not PSD");
}

}  // namespace detail

/// PDO built from an explicit process operator; basis must match the factor dims.
inline StateOverTime build_pdo(const HermitianOperator& rho_a, const ChoiOperator& process,
                               const OperatorBasis& basis, const Channel& provenance) {
    const int d = basis.dim;
    if (rho_a.dim() != d || process.dim_a != d || process.dim_b != d)
        throw std::invalid_argument("build_pdo: dim mismatch between state, process and basis");
    if (!((d == 2 && basis.kind == BasisKind::pauli) ||
          (d == 3 && basis.kind == BasisKind::wigner_qutrit)))
        throw std::invalid_argument("build_pdo: unsupported basis/dim pairing");
    detail::check_state(rho_a);

    const int n = static_cast<int>(basis.elements.size());
    ComplexMatrix r(d * d, d * d);
    for (int i = 0; i < n; ++i) {
        // Post-measurement average sum_a a P_a rho P_a over clustered eigenspaces.
        const auto projs = eigprojectors(basis.elements[i]);
        ComplexMatrix collapsed(d, d);
        for (const auto& [a, p] : projs) {
            if (a == 0.0) continue;
            collapsed += (p.mat() * rho_a.mat() * p.mat()) * complexd(a);
        }
        // <G_i (x) G_j> = tr[E (collapsed (x) G_j)] = tr[E(collapsed) G_j]
        const ComplexMatrix evolved = propagate_choi(process, collapsed);
        for (int j = 0; j < n; ++j) {
            const double expect = hs_inner(basis.elements[j].mat(), evolved);
            if (expect == 0.0) continue;
            r += kron(basis.elements[i].mat(), basis.elements[j].mat()) * complexd(expect);
        }
    }
    r *= complexd(1.0 / double(d * d));
    return StateOverTime(d, d, HermitianOperator(r), Construction::pdo, rho_a, provenance);
}

inline StateOverTime build_pdo(const HermitianOperator& rho_a, const Channel& ch,
                               const OperatorBasis& basis) {
    return build_pdo(rho_a, choi(ch), basis, ch);
}

/// Convenience: picks the canonical basis for the channel dimension.
inline StateOverTime build_pdo(const HermitianOperator& rho_a, const Channel& ch) {
    return build_pdo(rho_a, ch, ch.dim == 2 ? pauli_basis() : wigner_qutrit_basis());
}

inline StateOverTime build_wigner(const HermitianOperator& rho_a, const ChoiOperator& process,
                                  const Channel& provenance) {
    if (rho_a.dim() != 3 || process.dim_a != 3 || process.dim_b != 3)
        throw std::invalid_argument("build_wigner: qutrit only");
    detail::check_state(rho_a);

    const OperatorBasis basis = wigner_qutrit_basis();
    ComplexMatrix r(9, 9);
    for (int i = 0; i < 9; ++i) {
        const double ri = hs_inner(basis.elements[i].mat(), rho_a.mat()) / 3.0;
        for (int j = 0; j < 9; ++j) {
            const double rji =
                hs_inner(kron(basis.elements[i].mat(), basis.elements[j].mat()), process.op.mat()) /
                3.0;
            const double w = rji * ri;
            if (w == 0.0) continue;
            r += kron(basis.elements[i].mat(), basis.elements[j].mat()) * complexd(w);
        }
    }
    return StateOverTime(3, 3, HermitianOperator(r), Construction::wigner, rho_a, provenance);
}

inline StateOverTime build_wigner(const HermitianOperator& rho_a, const Channel& ch) {
    if (ch.dim != 3) throw std::invalid_argument("build_wigner: qutrit only");
    return build_wigner(rho_a, choi(ch), ch);
}

inline StateOverTime build_sot(const HermitianOperator& rho_a, const Channel& ch,
                               Construction construction) {
    return construction == Construction::pdo ? build_pdo(rho_a, ch) : build_wigner(rho_a, ch);
}

/// Causality monotone: trace norm minus one; zero iff the operator is PSD.
inline double causality_f(const StateOverTime& r) { return trace_norm(r.op) - 1.0; }

struct NsitReport {
    bool satisfied = false;
    double max_violation = 0.0;  // trace-norm distance to the unmeasured marginal
    std::vector<HermitianOperator> setting_marginals;
    std::string note;
};

/*
 * No-signaling in time: for every setting x, the post-measurement marginal
 * sum_a E(P_{a|x} rho P_{a|x}) must equal the unmeasured evolution E(rho).
 */
inline NsitReport nsit_check(const HermitianOperator& rho_a, const Channel& ch,
                             const std::vector<Pvm>& settings, double tol = 1e-9) {
    if (settings.empty()) throw std::invalid_argument("nsit_check: at least one setting required");
    detail::check_state(rho_a);
    const HermitianOperator unmeasured = HermitianOperator(act(ch, rho_a.mat()));

    NsitReport report;
    for (const auto& pvm : settings) {
        if (pvm.dim != ch.dim) throw std::invalid_argument("nsit_check: PVM dim mismatch");
        ComplexMatrix marginal(ch.dim, ch.dim);
        for (const auto& p : pvm.outcomes)
            marginal += act(ch, p.mat() * rho_a.mat() * p.mat());
        const HermitianOperator m(marginal);
        report.setting_marginals.push_back(m);
        report.max_violation = std::max(report.max_violation, trace_norm(m - unmeasured));
    }
    report.satisfied = report.max_violation <= tol;
    if (settings.size() == 1)
        report.note = "single setting: only the comparison against the unmeasured marginal applies";
    return report;
}

}  // namespace tcorr
