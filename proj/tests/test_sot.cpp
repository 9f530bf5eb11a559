#include <catch2/catch_amalgamated.hpp>

#include "support/test_rng.hpp"
#include "tcorr/state_over_time.hpp"

using namespace tcorr;
using Catch::Approx;

namespace {

HermitianOperator maximally_mixed(int d) {
    return HermitianOperator(ComplexMatrix::identity(d) * complexd(1.0 / d));
}

HermitianOperator ket0(int d) {
    ComplexMatrix m(d, d);
    m(0, 0) = 1.0;
    return HermitianOperator(m);
}

HermitianOperator balanced(int d) {
    ComplexMatrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = 1.0 / d;
    return HermitianOperator(m);
}

/// Choi operator of U' o E o (U . U^dag), built entrywise through the map.
ChoiOperator conjugate_choi(const ChoiOperator& e, const ComplexMatrix& u,
                            const ComplexMatrix& uprime) {
    const int d = e.dim_a;
    ComplexMatrix out(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            ComplexMatrix unit(d, d);
            unit(j, i) = 1.0;
            const ComplexMatrix evolved =
                uprime * propagate_choi(e, u.adjoint() * unit * u) * uprime.adjoint();
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) out(i * d + k, j * d + l) = evolved(k, l);
        }
    return ChoiOperator(d, d, HermitianOperator(out));
}

std::vector<double> sorted_spectrum(const HermitianOperator& op) {
    return eig_hermitian(op).eigenvalues;
}

const std::vector<ChannelKind> kDampingKinds = {
    ChannelKind::amplitude_damping, ChannelKind::phase_damping, ChannelKind::depolarizing};

}  // namespace

TEST_CASE("qubit identity-channel construction at maximally mixed input") {
    const StateOverTime r = build_pdo(maximally_mixed(2), Channel(2, ChannelKind::identity, 0.0));
    // R = SWAP/2
    ComplexMatrix swap(4, 4);
    swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
    REQUIRE((r.op.mat() - swap * complexd(0.5)).max_abs() <= 1e-12);
    const auto eigs = sorted_spectrum(r.op);
    REQUIRE(eigs[0] == Approx(0.5).margin(1e-12));
    REQUIRE(eigs[2] == Approx(0.5).margin(1e-12));
    REQUIRE(eigs[3] == Approx(-0.5).margin(1e-12));
    REQUIRE(causality_f(r) == Approx(1.0).margin(1e-10));
}

TEST_CASE("maximally mixed input reduces to the process operator") {
    for (int d : {2, 3})
        for (const auto kind : kDampingKinds)
            for (double gt : {0.0, 0.6, 2.4}) {
                const Channel ch(d, kind, gt);
                const ChoiOperator e = choi(ch);
                const StateOverTime pdo = build_pdo(maximally_mixed(d), ch);
                REQUIRE((pdo.op.mat() - e.op.mat() * complexd(1.0 / d)).max_abs() <= 1e-10);
                if (d == 3) {
                    const StateOverTime w = build_wigner(maximally_mixed(3), ch);
                    REQUIRE((w.op.mat() - e.op.mat() * complexd(1.0 / 3.0)).max_abs() <= 1e-10);
                    REQUIRE((w.op.mat() - pdo.op.mat()).max_abs() <= 1e-9);
                }
            }
}

TEST_CASE("qutrit identity channel at maximally mixed input") {
    const StateOverTime w = build_wigner(maximally_mixed(3), Channel(3, ChannelKind::identity, 0.0));
    // R = SWAP_3/3: six eigenvalues +1/3 (symmetric), three -1/3 (antisymmetric).
    const auto eigs = sorted_spectrum(w.op);
    for (int k = 0; k < 6; ++k) REQUIRE(eigs[k] == Approx(1.0 / 3.0).margin(1e-10));
    for (int k = 6; k < 9; ++k) REQUIRE(eigs[k] == Approx(-1.0 / 3.0).margin(1e-10));
    REQUIRE(trace_norm(w.op) == Approx(3.0).margin(1e-10));
    REQUIRE(causality_f(w) == Approx(2.0).margin(1e-10));
}

TEST_CASE("wigner quasi-probability normalization") {
    const OperatorBasis basis = wigner_qutrit_basis();
    for (const auto kind : kDampingKinds) {
        const ChoiOperator e = choi(Channel(3, kind, 0.8));
        for (int i = 0; i < 9; ++i) {
            double row = 0.0;
            for (int j = 0; j < 9; ++j)
                row += hs_inner(kron(basis.elements[i].mat(), basis.elements[j].mat()),
                                e.op.mat()) /
                       3.0;
            REQUIRE(row == Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("both constructions have the initial state as early marginal") {
    auto g = test::rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const HermitianOperator rho2 = test::random_state(g, 2);
        const HermitianOperator rho3 = test::random_state(g, 3);
        for (const auto kind : kDampingKinds) {
            const double gt = 0.1 + 0.5 * trial / 10.0;
            const StateOverTime p2 = build_pdo(rho2, Channel(2, kind, gt));
            REQUIRE((partial_trace(p2.op, 2, 2, Subsystem::A).mat() - rho2.mat()).max_abs() <=
                    1e-9);
            const StateOverTime p3 = build_pdo(rho3, Channel(3, kind, gt));
            REQUIRE((partial_trace(p3.op, 3, 3, Subsystem::A).mat() - rho3.mat()).max_abs() <=
                    1e-9);
            const StateOverTime w3 = build_wigner(rho3, Channel(3, kind, gt));
            REQUIRE((partial_trace(w3.op, 3, 3, Subsystem::A).mat() - rho3.mat()).max_abs() <=
                    1e-9);
        }
    }
}

TEST_CASE("qutrit spectrum is independent of the pure initial state (identity channel)") {
    const Channel ch(3, ChannelKind::identity, 0.0);
    const auto reference = sorted_spectrum(build_pdo(ket0(3), ch).op);
    auto g = test::rng(22);
    std::vector<HermitianOperator> states = {balanced(3)};
    for (int i = 0; i < 10; ++i) states.push_back(test::random_pure_state(g, 3));
    for (const auto& rho : states) {
        const auto spec = sorted_spectrum(build_pdo(rho, ch).op);
        for (int k = 0; k < 9; ++k) REQUIRE(spec[k] == Approx(reference[k]).margin(1e-8));
    }
}

TEST_CASE("causality monotone is unitarily invariant") {
    auto g = test::rng(23);
    for (int d : {2, 3})
        for (int trial = 0; trial < 5; ++trial) {
            const HermitianOperator rho = test::random_state(g, d);
            const Channel ch(d, kDampingKinds[trial % 3], 0.5);
            const ComplexMatrix u = test::random_unitary(g, d);
            const ComplexMatrix up = test::random_unitary(g, d);

            const OperatorBasis basis = d == 2 ? pauli_basis() : wigner_qutrit_basis();
            const StateOverTime r = build_pdo(rho, choi(ch), basis, ch);
            const HermitianOperator rho_rot(u * rho.mat() * u.adjoint());
            const StateOverTime r_rot =
                build_pdo(rho_rot, conjugate_choi(choi(ch), u, up), basis, ch);

            REQUIRE(causality_f(r_rot) == Approx(causality_f(r)).margin(1e-8));
            // The rotated construction is the rotated operator, so spectra agree too.
            const auto s1 = sorted_spectrum(r.op);
            const auto s2 = sorted_spectrum(r_rot.op);
            for (std::size_t k = 0; k < s1.size(); ++k)
                REQUIRE(s2[k] == Approx(s1[k]).margin(1e-8));
        }
}

TEST_CASE("causality monotone is convex") {
    auto g = test::rng(24);
    for (int trial = 0; trial < 20; ++trial) {
        const Channel cha(3, kDampingKinds[trial % 3], 0.3);
        const Channel chb(3, kDampingKinds[(trial + 1) % 3], 1.1);
        const StateOverTime r1 = build_pdo(test::random_state(g, 3), cha);
        const StateOverTime r2 = build_pdo(test::random_state(g, 3), chb);
        const double p = 0.1 + 0.8 * (trial / 20.0);
        const HermitianOperator mix(r1.op.mat() * complexd(p) + r2.op.mat() * complexd(1.0 - p));
        const double f_mix = trace_norm(mix) - 1.0;
        const double f_parts = p * causality_f(r1) + (1.0 - p) * causality_f(r2);
        REQUIRE(f_mix <= f_parts + 1e-10);
    }
}

TEST_CASE("fully depolarized limit is a positive product operator") {
    for (int d : {2, 3}) {
        const Channel ch(d, ChannelKind::depolarizing, 40.0);
        const HermitianOperator rho = d == 2 ? ket0(2) : balanced(3);
        const StateOverTime r = build_pdo(rho, ch);
        const HermitianOperator want = kron(rho, maximally_mixed(d));
        REQUIRE((r.op.mat() - want.mat()).max_abs() <= 1e-9);
        REQUIRE(min_eigenvalue(r.op) >= -1e-10);
        REQUIRE(causality_f(r) == Approx(0.0).margin(1e-9));
        if (d == 3) {
            const StateOverTime w = build_wigner(rho, ch);
            REQUIRE((w.op.mat() - want.mat()).max_abs() <= 1e-9);
        }
    }
}

TEST_CASE("nsit check") {
    SECTION("maximally mixed input always satisfies") {
        for (int d : {2, 3}) {
            const auto settings = mub_pvms(d, 2);
            for (const auto kind : kDampingKinds) {
                const NsitReport rep =
                    nsit_check(maximally_mixed(d), Channel(d, kind, 0.9), settings);
                REQUIRE(rep.satisfied);
                REQUIRE(rep.max_violation <= 1e-9);
            }
        }
    }
    SECTION("pure state with unbiased settings violates") {
        const NsitReport rep =
            nsit_check(ket0(2), Channel(2, ChannelKind::identity, 0.0), mub_pvms(2, 2));
        REQUIRE_FALSE(rep.satisfied);
        REQUIRE(rep.max_violation == Approx(1.0).margin(1e-12));
        // One marginal stays pure, the other is maximally mixed.
        REQUIRE((rep.setting_marginals[0].mat() - ket0(2).mat()).max_abs() <= 1e-12);
        REQUIRE((rep.setting_marginals[1].mat() - maximally_mixed(2).mat()).max_abs() <= 1e-12);
    }
    SECTION("single setting is flagged") {
        const NsitReport rep =
            nsit_check(maximally_mixed(2), Channel(2, ChannelKind::identity, 0.0),
                       {mub_pvms(2, 1).front()});
        REQUIRE(rep.satisfied);
        REQUIRE_FALSE(rep.note.empty());
    }
    SECTION("errors") {
        REQUIRE_THROWS_AS(
            nsit_check(maximally_mixed(2), Channel(2, ChannelKind::identity, 0.0), {}),
            std::invalid_argument);
        REQUIRE_THROWS_AS(nsit_check(maximally_mixed(2), Channel(2, ChannelKind::identity, 0.0),
                                     {mub_pvms(3, 1).front()}),
                          std::invalid_argument);
    }
}

TEST_CASE("construction argument errors") {
    REQUIRE_THROWS_AS(build_wigner(maximally_mixed(2), Channel(2, ChannelKind::identity, 0.0)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(
        build_pdo(maximally_mixed(2), Channel(2, ChannelKind::identity, 0.0), gellmann_basis(2)),
        std::invalid_argument);
    // Non-state input.
    ComplexMatrix m(2, 2);
    m(0, 0) = 2.0;
    REQUIRE_THROWS_AS(build_pdo(HermitianOperator(m), Channel(2, ChannelKind::identity, 0.0)),
                      std::invalid_argument);
}
