#include "doctest.h"
#include "test_support.hpp"

#include "tetra/gallery.hpp"
#include "tetra/structure.hpp"

using namespace tetra;

TEST_CASE("decomposition of a partial isometry")
{
    const ComplexMatrix u = random_unitary(5, 4);
    ComplexMatrix p = ComplexMatrix::Zero(5, 5);
    p(0, 0) = p(1, 1) = 1.0;
    const ComplexMatrix t = u * p * random_unitary(5, 6);  // rank-2 partial isometry
    const auto d = decompose_partial_isometry(t);
    CHECK(d.ran_Tstar.dim() == 2);
    CHECK(d.ker_T.dim() == 3);
    CHECK(d.second_column_residual < 1e-12);
    CHECK(d.Z_isometry_residual < 1e-12);
    const ComplexMatrix w = d.change_of_basis();
    CHECK(oracle::svd_norm(w.adjoint() * w - ComplexMatrix::Identity(5, 5)) < 1e-12);
    // T W = [[Y, 0], [X, 0]] in block coordinates
    const ComplexMatrix blocks = w.adjoint() * t * w;
    CHECK(oracle::svd_norm(blocks.rightCols(3)) < 1e-12);
    CHECK(oracle::svd_norm(blocks.topLeftCorner(2, 2) - d.Y) < 1e-12);
    CHECK(oracle::svd_norm(blocks.bottomLeftCorner(3, 2) - d.X) < 1e-12);
}

TEST_CASE("non-partial isometries are rejected")
{
    CHECK_THROWS_WITH_AS(decompose_partial_isometry(ComplexMatrix::Identity(3, 3) * 0.5),
                         doctest::Contains("NotPartialIsometry"), TetraError);
}

TEST_CASE("counterexample: F = 0 + D and the P2 verdicts agree")
{
    const auto ex = gallery::example_counterexample(8);
    const auto a = analyze_partial_isometry_triple(ex.triple);
    CHECK(a.report.holds("Ker T invariant under T1"));
    CHECK(a.report.holds("Ker T invariant under T2"));
    CHECK(a.report.holds("F1 = 0 + D1"));
    CHECK(a.report.holds("F2 = 0 + D2"));
    CHECK(a.report.holds("reconstruction"));
    CHECK(a.report.holds("P1"));
    CHECK_FALSE(a.report.holds("P2"));
    CHECK_FALSE(a.report.holds("P2 on (D1, D2)"));
    CHECK(a.report.holds("P2 verdicts agree"));
    for (const char* name : {"B1 = 0", "A1 = A2^* Y + C2^* X", "C1 = D2^* X", "B2 = 0", "A2 = A1^* Y + C1^* X",
                             "C2 = D1^* X"})
        CHECK(a.report.holds(name));
    // the restriction pair equals the expected one away from the truncation edge
    const ComplexMatrix k = a.decomposition.ker_T.basis;
    const ComplexMatrix& p = ex.protected_projector;
    CHECK(oracle::svd_norm(p * (k * a.restriction.D1 * k.adjoint() - ex.expected_D1_ambient) * p) < 1e-10);
    CHECK(oracle::svd_norm(p * (k * a.restriction.D2 * k.adjoint() - ex.expected_D2_ambient) * p) < 1e-10);
}

TEST_CASE("pal example: restriction pair is (J, 0)")
{
    const auto ex = gallery::example_pal(4);
    const auto a = analyze_partial_isometry_triple(ex.triple);
    const ComplexMatrix k = a.decomposition.ker_T.basis;
    const ComplexMatrix& p = ex.protected_projector;
    CHECK(oracle::svd_norm(p * (k * a.restriction.D1 * k.adjoint() - ex.expected_D1_ambient) * p) < 1e-10);
    CHECK(oracle::svd_norm(a.restriction.D2) < 1e-12);
    CHECK_FALSE(a.report.holds("P2"));
    CHECK(a.report.holds("P2 verdicts agree"));
}

TEST_CASE("random partial-isometry triples: P1 holds and the P2 forms agree")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        gallery::GallerySpec spec{gallery::FamilyKind::partial_isometry_random, 8, 3 + static_cast<int>(seed % 4), seed};
        const auto t = gallery::random_family(spec);
        const auto a = analyze_partial_isometry_triple(t);
        CHECK(a.report.holds("P1"));
        CHECK(a.report.holds("P2 verdicts agree"));
        CHECK(a.reconstruction_residual < 1e-8);
    }
}

TEST_CASE("a triple whose T is not a partial isometry")
{
    const ComplexMatrix a = ComplexMatrix::Identity(2, 2) * 0.5;
    const auto t = make_triple(a, a, a * a);
    CHECK_THROWS_WITH_AS(analyze_partial_isometry_triple(t), doctest::Contains("NotPartialIsometry"), TetraError);
}
