/*
 * Single-qudit noise channels (d = 2, 3) and their Choi operators.
 *
 * The qutrit maps are implemented as direct matrix maps:
 *   amplitude damping: the three-level ladder |0> -> |1> -> |2> with decay
 *                      rate gamma, |0> carrying two excitations
 *   phase damping    : off-diagonals scaled by e^{-gamma t}
 *   depolarizing     : rho -> e^{-gamma t} rho + (1 - e^{-gamma t}) I/3
 * The qubit variants are the d = 2 specializations on the same time scale.
 *
 * Choi convention:  E = sum_ij |i><j| (x) E(|j><i|),  which propagates as
 * E(rho) = tr_A[E (rho (x) I)] with no transpose (the index swap inside the
 * Choi sum absorbs it).  `apply` and `propagate_choi` are tested to agree.
 */
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "tcorr/matrix.hpp"

namespace tcorr {

enum class ChannelKind { amplitude_damping, phase_damping, depolarizing, identity };

inline std::string to_string(ChannelKind k) {
    switch (k) {
        case ChannelKind::amplitude_damping: return "amplitude_damping";
        case ChannelKind::phase_damping: return "phase_damping";
        case ChannelKind::depolarizing: return "depolarizing";
        case ChannelKind::identity: return "identity";
    }
    return "?";
}

inline ChannelKind channel_kind_from_string(const std::string& s) {
    if (s == "amplitude_damping") return ChannelKind::amplitude_damping;
    if (s == "phase_damping") return ChannelKind::phase_damping;
    if (s == "depolarizing") return ChannelKind::depolarizing;
    if (s == "identity") return ChannelKind::identity;
    throw std::invalid_argument("unknown channel kind: " + s);
}

struct Channel {
    int dim = 2;
    ChannelKind kind = ChannelKind::identity;
    double gamma_t = 0.0;  // dimensionless product of decay rate and time

    Channel() = default;
    Channel(int d, ChannelKind k, double gt) : dim(d), kind(k), gamma_t(gt) {
        if (d != 2 && d != 3) throw std::invalid_argument("Channel: dim must be 2 or 3");
        if (!(gt >= 0.0)) throw std::invalid_argument("Channel: gamma_t must be >= 0");
    }
};

/// Linear action of the channel on an arbitrary (not necessarily Hermitian)
/// matrix; used for Choi construction and internal expectation values.
inline ComplexMatrix act(const Channel& ch, const ComplexMatrix& rho) {
    if (rho.rows() != ch.dim || rho.cols() != ch.dim)
        throw std::invalid_argument("channel act: dim mismatch");
    const double e1 = std::exp(-ch.gamma_t);

    switch (ch.kind) {
        case ChannelKind::identity:
            return rho;

        case ChannelKind::depolarizing: {
            ComplexMatrix out = rho * complexd(e1);
            const complexd mix = (1.0 - e1) * rho.trace() / double(ch.dim);
            for (int i = 0; i < ch.dim; ++i) out(i, i) += mix;
            return out;
        }

        case ChannelKind::phase_damping: {
            ComplexMatrix out = rho;
            for (int i = 0; i < ch.dim; ++i)
                for (int j = 0; j < ch.dim; ++j)
                    if (i != j) out(i, j) *= e1;
            return out;
        }

        case ChannelKind::amplitude_damping: {
            if (ch.dim == 2) {
                // Kraus {|0><0| + e^{-gt/2}|1><1|, sqrt(1-e^{-gt})|0><1|}
                const double eh = std::exp(-0.5 * ch.gamma_t);
                ComplexMatrix out(2, 2);
                out(0, 0) = rho(0, 0) + (1.0 - e1) * rho(1, 1);
                out(0, 1) = eh * rho(0, 1);
                out(1, 0) = eh * rho(1, 0);
                out(1, 1) = e1 * rho(1, 1);
                return out;
            }
            const double e12 = std::exp(-0.5 * ch.gamma_t);
            const double e32 = std::exp(-1.5 * ch.gamma_t);
            const double e2 = std::exp(-2.0 * ch.gamma_t);
            const double s2 = std::sqrt(2.0);
            ComplexMatrix out(3, 3);
            out(0, 0) = e2 * rho(0, 0);
            out(0, 1) = e32 * rho(0, 1);
            out(0, 2) = e1 * rho(0, 2);
            out(1, 0) = e32 * rho(1, 0);
            out(1, 1) = 2.0 * (e1 - e2) * rho(0, 0) + e1 * rho(1, 1);
            out(1, 2) = s2 * (e12 - e32) * rho(0, 1) + e12 * rho(1, 2);
            out(2, 0) = e1 * rho(2, 0);
            out(2, 1) = s2 * (e12 - e32) * rho(1, 0) + e12 * rho(2, 1);
            out(2, 2) = (e2 - 2.0 * e1 + 1.0) * rho(0, 0) + (1.0 - e1) * rho(1, 1) + rho(2, 2);
            return out;
        }
    }
    throw std::logic_error("channel act: unreachable");
}

/// Validated action on a density matrix.
inline HermitianOperator apply(const Channel& ch, const HermitianOperator& rho) {
    if (rho.dim() != ch.dim) throw std::invalid_argument("channel apply: dim mismatch");
    if (std::abs(rho.trace() - 1.0) > 1e-10)
        throw std::invalid_argument("channel apply: input trace != 1");
    if (min_eigenvalue(rho) < -1e-10)
        throw std::invalid_argument("channel apply: input not positive semi-definite");
    return HermitianOperator(act(ch, rho.mat()));
}

struct ChoiOperator {
    int dim_a = 0, dim_b = 0;
    HermitianOperator op;

    ChoiOperator(int da, int db, HermitianOperator o) : dim_a(da), dim_b(db), op(std::move(o)) {
        if (op.dim() != da * db) throw std::invalid_argument("ChoiOperator: dims mismatch");
    }
};

inline ChoiOperator choi(const Channel& ch) {
    const int d = ch.dim;
    ComplexMatrix e(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            ComplexMatrix unit(d, d);
            unit(j, i) = 1.0;  // |j><i|
            const ComplexMatrix evolved = act(ch, unit);
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) e(i * d + k, j * d + l) = evolved(k, l);
        }
    return ChoiOperator(d, d, HermitianOperator(e));
}

/// Standard-ordered Choi matrix sum_ij |i><j| (x) E(|i><j|): positive
/// semi-definite exactly when the map is completely positive. The process
/// operator `choi()` above uses the index-swapped convention and is not PSD
/// in general (identity gives the swap operator).
inline HermitianOperator cp_choi(const Channel& ch) {
    const int d = ch.dim;
    ComplexMatrix e(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            ComplexMatrix unit(d, d);
            unit(i, j) = 1.0;
            const ComplexMatrix evolved = act(ch, unit);
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) e(i * d + k, j * d + l) = evolved(k, l);
        }
    return HermitianOperator(e);
}

/// E(rho) = tr_A[E (rho (x) I_B)]; linear in rho, rho need not be Hermitian.
inline ComplexMatrix propagate_choi(const ChoiOperator& e, const ComplexMatrix& rho) {
    if (rho.rows() != e.dim_a || rho.cols() != e.dim_a)
        throw std::invalid_argument("propagate_choi: dim mismatch");
    const int da = e.dim_a, db = e.dim_b;
    ComplexMatrix out(db, db);
    for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l) {
            complexd s = 0.0;
            for (int i = 0; i < da; ++i)
                for (int j = 0; j < da; ++j) s += e.op(i * db + k, j * db + l) * rho(j, i);
            out(k, l) = s;
        }
    return out;
}

inline HermitianOperator propagate_choi(const ChoiOperator& e, const HermitianOperator& rho) {
    return HermitianOperator(propagate_choi(e, rho.mat()));
}

}  // namespace tcorr
