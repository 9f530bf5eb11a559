#include <catch2/catch_amalgamated.hpp>

#include "support/test_rng.hpp"
#include "tcorr/bases.hpp"
#include "tcorr/matrix_io.hpp"

using namespace tcorr;
using Catch::Approx;

#ifndef TCORR_FIXTURE_DIR
#define TCORR_FIXTURE_DIR "tests/fixtures"
#endif

TEST_CASE("pauli basis") {
    const OperatorBasis b = pauli_basis();
    REQUIRE(b.elements.size() == 4);
    REQUIRE((b.elements[0].mat() - ComplexMatrix::identity(2)).max_abs() == 0.0);
    REQUIRE(hs_inner(b.elements[1].mat(), b.elements[2].mat()) == Approx(0.0).margin(1e-15));
    double total = 0.0;
    for (const auto& e : b.elements) total += hs_inner(e.mat(), e.mat());
    REQUIRE(total == Approx(8.0));
}

TEST_CASE("qutrit phase-point operators") {
    const OperatorBasis b = wigner_qutrit_basis();
    REQUIRE(b.elements.size() == 9);

    SECTION("unit traces and resolution of identity") {
        ComplexMatrix sum(3, 3);
        for (const auto& k : b.elements) {
            REQUIRE(k.trace() == Approx(1.0).margin(1e-14));
            sum += k.mat();
        }
        REQUIRE((sum - ComplexMatrix::identity(3) * complexd(3.0)).max_abs() <= 1e-14);
        REQUIRE(b.elements[3].trace() == Approx(1.0).margin(1e-14));
    }
    SECTION("orthogonality tr(K_i K_j) = 3 delta_ij") {
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 9; ++j)
                REQUIRE(hs_inner(b.elements[i].mat(), b.elements[j].mat()) ==
                        Approx(i == j ? 3.0 : 0.0).margin(1e-12));
        REQUIRE(hs_inner(b.elements[1].mat(), b.elements[4].mat()) ==
                Approx(0.0).margin(1e-13));  // tr(K2 K5)
    }
    SECTION("each operator has spectrum {1, 1, -1}") {
        for (const auto& k : b.elements) {
            REQUIRE((k.mat() - k.mat().adjoint()).max_abs() <= 1e-14);
            const Spectrum s = eig_hermitian(k);
            REQUIRE(s.eigenvalues[0] == Approx(1.0).margin(1e-12));
            REQUIRE(s.eigenvalues[1] == Approx(1.0).margin(1e-12));
            REQUIRE(s.eigenvalues[2] == Approx(-1.0).margin(1e-12));
        }
    }
    SECTION("matches the golden fixture files") {
        for (int i = 0; i < 9; ++i) {
            const std::string path =
                std::string(TCORR_FIXTURE_DIR) + "/wigner_k" + std::to_string(i + 1) + ".json";
            const ComplexMatrix golden = read_matrix_file(path);
            REQUIRE((golden - b.elements[i].mat()).max_abs() <= 1e-15);
        }
    }
    SECTION("transpose pairing of the last three") {
        for (int k = 0; k < 3; ++k)
            REQUIRE((b.elements[6 + k].mat() - b.elements[3 + k].mat().transpose()).max_abs() ==
                    0.0);
    }
}

TEST_CASE("gellmann basis") {
    SECTION("d=2 reduces to scaled paulis") {
        const OperatorBasis b = gellmann_basis(2);
        REQUIRE(b.elements.size() == 4);
        const OperatorBasis p = pauli_basis();
        REQUIRE((b.elements[1].mat() - p.elements[1].mat() * complexd(1.0 / std::sqrt(2.0)))
                    .max_abs() <= 1e-15);
    }
    SECTION("d=3 gram matrix is the identity") {
        const OperatorBasis b = gellmann_basis(3);
        REQUIRE(b.elements.size() == 9);
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 9; ++j)
                REQUIRE(hs_inner(b.elements[i].mat(), b.elements[j].mat()) ==
                        Approx(i == j ? 1.0 : 0.0).margin(1e-12));
    }
    SECTION("unsupported dimension") {
        REQUIRE_THROWS_AS(gellmann_basis(4), std::invalid_argument);
    }
}

TEST_CASE("correlation tensor expand/reconstruct") {
    const OperatorBasis p = pauli_basis();

    SECTION("maximally mixed two-qubit state") {
        const HermitianOperator rho(ComplexMatrix::identity(4) * complexd(0.25));
        const CorrelationTensor c = expand(rho, p, p);
        REQUIRE(c(0, 0) == Approx(0.25));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i || j) REQUIRE(c(i, j) == Approx(0.0).margin(1e-14));
    }
    SECTION("swap/2 is diagonal with weight 1/4") {
        ComplexMatrix swap(4, 4);
        swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
        const CorrelationTensor c = expand(HermitianOperator(swap * complexd(0.5)), p, p);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                REQUIRE(c(i, j) == Approx(i == j ? 0.25 : 0.0).margin(1e-14));
    }
    SECTION("round-trip on random operators, all basis pairings") {
        auto g = test::rng(5150);
        const OperatorBasis w = wigner_qutrit_basis();
        const OperatorBasis gm = gellmann_basis(3);
        for (int trial = 0; trial < 25; ++trial) {
            const HermitianOperator h9 = test::random_hermitian(g, 9);
            for (const OperatorBasis& basis : {w, gm}) {
                const HermitianOperator back = reconstruct(expand(h9, basis, basis), basis, basis);
                REQUIRE((back.mat() - h9.mat()).max_abs() <= 1e-10);
            }
            const HermitianOperator h4 = test::random_hermitian(g, 4);
            const HermitianOperator back = reconstruct(expand(h4, p, p), p, p);
            REQUIRE((back.mat() - h4.mat()).max_abs() <= 1e-10);
        }
    }
    SECTION("dim mismatch rejected") {
        REQUIRE_THROWS_AS(expand(HermitianOperator::identity(6), p, p), std::invalid_argument);
    }
}
