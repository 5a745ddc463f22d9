#include "doctest.h"
#include "test_support.hpp"

#include "tetra/operator_core.hpp"

#include <algorithm>

using namespace tetra;

TEST_CASE("tolerances validate")
{
    CHECK_NOTHROW(Tolerances{}.validate());
    CHECK_THROWS_AS(Tolerances({0.0, 1e-8, 360}).validate(), TetraError);
    CHECK_THROWS_AS(Tolerances({1e-9, -1.0, 360}).validate(), TetraError);
    CHECK_THROWS_AS(Tolerances({1e-9, 1e-8, 4}).validate(), TetraError);
}

TEST_CASE("operator norm matches the largest singular value")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Index rows = 1 + seed % 7;
        const Index cols = 1 + (seed * 3) % 5;
        const ComplexMatrix a = random_gaussian(rows, cols, seed);
        CHECK(operator_norm(a) == doctest::Approx(oracle::svd_norm(a)).epsilon(1e-12));
    }
}

TEST_CASE("defect of a scalar contraction")
{
    ComplexMatrix x(1, 1);
    x << Complex(0.6, 0.0);
    const DefectData d = defect_data(x);
    CHECK(std::abs(d.defect(0, 0) - 0.8) < 1e-15);
    CHECK(d.range.dim() == 1);
    CHECK(d.kernel.dim() == 0);
}

TEST_CASE("defect operator squares to I - X*X and is positive")
{
    for (std::uint64_t seed = 1; seed < 15; ++seed) {
        const Index n = 2 + seed % 6;
        const ComplexMatrix x = oracle::contraction(n, seed, 0.3 + 0.05 * static_cast<double>(seed % 10));
        const DefectData d = defect_data(x);
        const ComplexMatrix expected = ComplexMatrix::Identity(n, n) - x.adjoint() * x;
        CHECK(oracle::svd_norm(d.defect * d.defect - expected) < 1e-12);
        CHECK(oracle::svd_norm(d.defect - d.defect.adjoint()) < 1e-14);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(d.defect);
        CHECK(eig.eigenvalues().minCoeff() > -1e-12);
        // range and kernel split the space orthogonally
        CHECK(d.range.dim() + d.kernel.dim() == n);
        if (d.kernel.dim() > 0)
            CHECK(oracle::svd_norm(d.range.basis.adjoint() * d.kernel.basis) < 1e-12);
    }
}

TEST_CASE("defect of a partial isometry is the kernel projection")
{
    ComplexMatrix t = ComplexMatrix::Zero(3, 3);
    t(1, 0) = 1.0;
    const DefectData d = defect_data(t);
    ComplexMatrix expected = ComplexMatrix::Identity(3, 3);
    expected(0, 0) = 0.0;
    CHECK(oracle::svd_norm(d.defect - expected) < 1e-14);
    CHECK(d.range.dim() == 2);
    CHECK(d.kernel.dim() == 1);
}

TEST_CASE("pseudo-inverse satisfies the Moore-Penrose equations")
{
    ComplexMatrix t = random_gaussian(4, 4, 7);
    t = t * (1.0 / oracle::svd_norm(t));  // norm one: the defect has a kernel
    const DefectData d = defect_data(t);
    const ComplexMatrix p = d.pseudo_inverse();
    CHECK(oracle::svd_norm(d.defect * p * d.defect - d.defect) < 1e-8);
    CHECK(oracle::svd_norm(p * d.defect * p - p) < 1e-6);
    CHECK(oracle::svd_norm((d.defect * p).adjoint() - d.defect * p) < 1e-8);
}

TEST_CASE("a non-contraction has no defect operator")
{
    ComplexMatrix x(2, 2);
    x << 1.2, 0.0, 0.0, 0.1;
    CHECK_THROWS_WITH_AS(defect_data(x), doctest::Contains("NotAContraction"), TetraError);
}

TEST_CASE("numerical radius: closed forms")
{
    ComplexMatrix nil(2, 2);
    nil << 0.0, 1.0, 0.0, 0.0;
    CHECK(numerical_radius(nil) == doctest::Approx(0.5).epsilon(1e-12));

    ComplexMatrix normal = ComplexMatrix::Zero(3, 3);
    normal(0, 0) = Complex(0.0, 0.9);
    normal(1, 1) = -0.3;
    normal(2, 2) = Complex(0.2, 0.2);
    const ComplexMatrix u = random_unitary(3, 5);
    CHECK(numerical_radius(u * normal * u.adjoint()) == doctest::Approx(0.9).epsilon(1e-10));

    // w(I (1 + z) / 2) = |1 + z| / 2
    for (double phase : {0.0, 1.0, 2.5}) {
        const Complex z = std::polar(1.0, phase);
        const ComplexMatrix m = ComplexMatrix::Identity(2, 2) * ((1.0 + z) / 2.0);
        CHECK(numerical_radius(m) == doctest::Approx(std::abs(1.0 + z) / 2.0).epsilon(1e-12));
    }
    CHECK(numerical_radius(ComplexMatrix(0, 0)) == 0.0);
}

TEST_CASE("numerical radius agrees with a dense sweep and respects norm bounds")
{
    for (std::uint64_t seed = 30; seed < 45; ++seed) {
        const Index n = 2 + seed % 5;
        const ComplexMatrix a = random_gaussian(n, n, seed);
        const double w = numerical_radius(a);
        const double sweep = oracle::numerical_radius_sweep(a, 20000);
        const double norm = oracle::svd_norm(a);
        CHECK(w >= sweep - 1e-6 * norm);
        CHECK(w <= sweep + 1e-6 * norm);
        CHECK(w <= norm * (1.0 + 1e-12));
        CHECK(w >= norm / 2.0 * (1.0 - 1e-12));
    }
}

TEST_CASE("spectral radius of planted spectra")
{
    ComplexMatrix d = ComplexMatrix::Zero(3, 3);
    d(0, 0) = 0.3;
    d(1, 1) = Complex(0.0, -0.7);
    d(2, 2) = 0.1;
    d(0, 2) = 5.0;  // non-normal, same eigenvalues
    CHECK(spectral_radius(d) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("classification flags")
{
    const ComplexMatrix u = random_unitary(4, 3);
    const OperatorClass cu = classify(u);
    CHECK(cu.unitary);
    CHECK(cu.isometry);
    CHECK(cu.coisometry);
    CHECK(cu.partial_isometry);
    CHECK_FALSE(cu.projection);

    ComplexMatrix p = ComplexMatrix::Zero(3, 3);
    p(0, 0) = 1.0;
    const OperatorClass cp = classify(p);
    CHECK(cp.projection);
    CHECK(cp.partial_isometry);
    CHECK_FALSE(cp.isometry);

    const ComplexMatrix s = oracle::shift_matrix(4);
    const OperatorClass cs = classify(s);
    CHECK(cs.partial_isometry);
    CHECK(cs.contraction);
    CHECK_FALSE(cs.isometry);

    ComplexMatrix big = ComplexMatrix::Identity(2, 2) * 1.5;
    CHECK_FALSE(classify(big).contraction);
}

TEST_CASE("subspaces: span, projector and complement")
{
    ComplexMatrix spanning(3, 3);
    spanning << 1, 2, 0, 0, 0, 0, 0, 0, 1;  // rank 2
    const Subspace s = Subspace::span_of(spanning, 1e-9);
    CHECK(s.dim() == 2);
    const Subspace c = orthogonal_complement(s);
    CHECK(c.dim() == 1);
    CHECK(oracle::svd_norm(s.projector() + c.projector() - ComplexMatrix::Identity(3, 3)) < 1e-12);
    CHECK(Subspace::zero(4).dim() == 0);
    CHECK(Subspace::full(4).dim() == 4);
}

TEST_CASE("unitary extension: e1 to e2")
{
    Subspace domain;
    domain.ambient_dim = 2;
    domain.basis = ComplexMatrix::Identity(2, 1);
    Subspace codomain;
    codomain.ambient_dim = 2;
    codomain.basis = ComplexMatrix::Zero(2, 1);
    codomain.basis(1, 0) = 1.0;
    ComplexMatrix map = ComplexMatrix::Zero(2, 2);
    map(1, 0) = 1.0;
    const ComplexMatrix u = extend_isometry_to_unitary(domain, codomain, map);
    CHECK(oracle::svd_norm(u.adjoint() * u - ComplexMatrix::Identity(2, 2)) < 1e-14);
    CHECK(std::abs(u(1, 0) - 1.0) < 1e-14);
}

TEST_CASE("unitary extension: random isometric correspondences")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Index n = 3 + seed % 4;
        const Index k = 1 + seed % 3;
        const ComplexMatrix q1 = random_unitary(n, seed);
        const ComplexMatrix q2 = random_unitary(n, seed + 100);
        Subspace domain{n, q1.leftCols(k)};
        Subspace codomain{n, q2.leftCols(k)};
        const ComplexMatrix map = q2.leftCols(k) * q1.leftCols(k).adjoint();
        const ComplexMatrix u = extend_isometry_to_unitary(domain, codomain, map);
        CHECK(oracle::svd_norm(u.adjoint() * u - ComplexMatrix::Identity(n, n)) < 1e-12);
        CHECK(oracle::svd_norm(u * u.adjoint() - ComplexMatrix::Identity(n, n)) < 1e-12);
        CHECK(oracle::svd_norm(u * domain.basis - map * domain.basis) < 1e-12);
    }
}

TEST_CASE("unitary extension: degenerate and invalid inputs")
{
    const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
    CHECK(extend_isometry_to_unitary(Subspace::zero(3), Subspace::zero(3), id) == id);

    Subspace line{3, ComplexMatrix::Identity(3, 1)};
    const ComplexMatrix doubling = 2.0 * id;
    Subspace image{3, ComplexMatrix::Identity(3, 1)};
    CHECK_THROWS_WITH_AS(extend_isometry_to_unitary(line, image, doubling), doctest::Contains("NotIsometric"),
                         TetraError);
    CHECK_THROWS_WITH_AS(extend_isometry_to_unitary(line, Subspace::full(3), id),
                         doctest::Contains("DimensionMismatch"), TetraError);
}

namespace {

bool same_multiset(std::vector<JointEigenvalue> got, std::vector<JointEigenvalue> want, double tol)
{
    if (got.size() != want.size())
        return false;
    for (const auto& w : want) {
        auto it = std::find_if(got.begin(), got.end(), [&](const JointEigenvalue& g) {
            for (std::size_t i = 0; i < w.size(); ++i)
                if (std::abs(g[i] - w[i]) > tol)
                    return false;
            return true;
        });
        if (it == got.end())
            return false;
        got.erase(it);
    }
    return true;
}

} // namespace

TEST_CASE("joint eigenvalues recover planted spectra")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Index n = 2 + seed % 5;
        const ComplexMatrix q = random_unitary(n, seed + 7);
        const ComplexMatrix d1 = random_gaussian(n, 1, seed + 11);
        const ComplexMatrix d2 = random_gaussian(n, 1, seed + 13);
        std::vector<JointEigenvalue> planted;
        for (Index k = 0; k < n; ++k)
            planted.push_back({d1(k, 0), d2(k, 0)});
        const std::array<ComplexMatrix, 2> ops{q * d1.col(0).asDiagonal() * q.adjoint(),
                                               q * d2.col(0).asDiagonal() * q.adjoint()};
        CHECK(same_multiset(joint_eigenvalues(ops), planted, 1e-10));
    }
}

TEST_CASE("joint eigenvalues of a repeated eigenvalue and of non-commuting input")
{
    // x (+) x with a nilpotent partner: commuting, not simultaneously diagonalizable
    ComplexMatrix a = ComplexMatrix::Identity(2, 2) * 0.5;
    ComplexMatrix b = ComplexMatrix::Zero(2, 2);
    b(0, 1) = 1.0;
    const std::array<ComplexMatrix, 2> ops{a, b};
    CHECK(same_multiset(joint_eigenvalues(ops), {{0.5, 0.0}, {0.5, 0.0}}, 1e-12));

    const std::array<ComplexMatrix, 2> bad{random_gaussian(3, 3, 1), random_gaussian(3, 3, 2)};
    CHECK_THROWS_WITH_AS(joint_eigenvalues(bad), doctest::Contains("NotCommuting"), TetraError);
}

TEST_CASE("random generators are deterministic")
{
    CHECK(random_gaussian(3, 2, 9) == random_gaussian(3, 2, 9));
    CHECK(random_unitary(4, 9) == random_unitary(4, 9));
    CHECK_FALSE(random_unitary(4, 9) == random_unitary(4, 10));
}
