#include "tetra/gallery.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace tetra::gallery {

using shift::StructuredOperator;

namespace {

// Max residual of lhs = rhs over the budget, via the exact calculus.
double identity_residual(const StructuredOperator& lhs, const StructuredOperator& rhs, int budget)
{
    return shift::verify_identity(lhs, rhs, budget).max_residual;
}

ComplexMatrix protected_projector(int fiber, int n)
{
    ComplexMatrix p = ComplexMatrix::Zero(fiber * n, fiber * n);
    for (int f = 0; f < fiber; ++f)
        for (int k = 0; k + 1 < n; ++k)
            p(f * n + k, f * n + k) = 1.0;
    return p;
}

void require_truncation(int n)
{
    if (n < 2)
        throw TetraError(ErrorKind::InvalidArgument, "truncation must be at least 2");
}

} // namespace

StructuredPair structured_fundamental_pair(const StructuredTriple& t, int degree_budget)
{
    const int fiber = t.T.in_fiber();
    StructuredPair out;
    out.D = StructuredOperator::identity(fiber) - t.T.adjoint() * t.T;
    out.idempotence_residual = identity_residual(out.D * out.D, out.D, degree_budget);
    const StructuredOperator x1 = t.T1 - t.T2.adjoint() * t.T;
    const StructuredOperator x2 = t.T2 - t.T1.adjoint() * t.T;
    out.F1 = out.D * x1 * out.D;
    out.F2 = out.D * x2 * out.D;
    out.defining_residual = std::max(identity_residual(x1, out.D * out.F1 * out.D, degree_budget),
                                     identity_residual(x2, out.D * out.F2 * out.D, degree_budget));
    return out;
}

NamedExample example_counterexample(int n)
{
    require_truncation(n);
    const auto zero = StructuredOperator::zero();
    const auto id = StructuredOperator::identity();
    const auto s = StructuredOperator::shift();

    NamedExample ex;
    ex.truncation = n;
    ex.structured.T1 = StructuredOperator::block(zero, zero, id, zero);
    ex.structured.T2 = StructuredOperator::block(s, zero, zero, s);
    ex.structured.T = StructuredOperator::block(zero, zero, s, zero);
    ex.expected_F1 = StructuredOperator::zero(2, 2);
    ex.expected_F2 = StructuredOperator::block(zero, zero, zero, s);

    // The compressed products agree exactly with the compressed T, so the
    // compressed triple commutes exactly.
    ex.triple = make_triple(shift::compress(ex.structured.T1, n), shift::compress(ex.structured.T2, n),
                            shift::compress(ex.structured.T, n));
    ex.expected_F1_ambient = ComplexMatrix::Zero(2 * n, 2 * n);
    ex.expected_F2_ambient = shift::compress(ex.expected_F2, n);
    // Ker T = 0 (+) H^2 with D1 = 0, D2 = S there.
    ex.expected_D1_ambient = ComplexMatrix::Zero(2 * n, 2 * n);
    ex.expected_D2_ambient = shift::compress(ex.expected_F2, n);
    ex.protected_projector = protected_projector(2, n);
    return ex;
}

PalExample example_pal(int n)
{
    require_truncation(n);
    ComplexMatrix small(2, 2);
    small << 0.0, 0.25, 0.0, 0.0;

    const auto z2 = StructuredOperator::zero(2, 2);
    const auto z4 = StructuredOperator::zero(4, 4);
    const auto h = StructuredOperator::tensor(StructuredOperator::unit(0, 0), small);
    const auto j = StructuredOperator::block(h, z2, z2, z2);
    const auto y = StructuredOperator::block(z2, StructuredOperator::shift(2), StructuredOperator::identity(2), z2);

    PalExample ex;
    ex.truncation = n;
    ex.J = j;
    ex.small_block = small;
    ex.structured.T1 = StructuredOperator::block(z4, z4, z4, j);
    ex.structured.T2 = StructuredOperator::zero(8, 8);
    ex.structured.T = StructuredOperator::block(z4, z4, y, z4);
    ex.expected_F1 = ex.structured.T1;
    ex.expected_F2 = StructuredOperator::zero(8, 8);

    ex.triple = make_triple(shift::compress(ex.structured.T1, n), shift::compress(ex.structured.T2, n),
                            shift::compress(ex.structured.T, n));
    ex.expected_F1_ambient = shift::compress(ex.expected_F1, n);
    ex.expected_F2_ambient = ComplexMatrix::Zero(8 * n, 8 * n);
    ex.expected_D1_ambient = ex.expected_F1_ambient;
    ex.expected_D2_ambient = ComplexMatrix::Zero(8 * n, 8 * n);
    ex.protected_projector = protected_projector(8, n);
    return ex;
}

void GallerySpec::validate() const
{
    if (truncation < 2)
        throw TetraError(ErrorKind::InvalidArgument, "gallery truncation must be at least 2");
    if (dim < 1)
        throw TetraError(ErrorKind::InvalidArgument, "gallery dimension must be at least 1");
    if (kind == FamilyKind::partial_isometry_random && dim < 2)
        throw TetraError(ErrorKind::InvalidArgument, "partial-isometry family needs dimension at least 2");
}

namespace {

Complex complex_normal(std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

ComplexMatrix scaled_to(const ComplexMatrix& m, double target)
{
    const double norm = operator_norm(m);
    return norm > 0.0 ? ComplexMatrix(m * (target / norm)) : m;
}

// Two polynomials in one random contraction, each rescaled to norm <= 0.95.
CommutingTriple product_random(Index n, std::mt19937_64& rng, const Tolerances& tol)
{
    const ComplexMatrix a = scaled_to(random_gaussian(n, n, rng()), uniform(rng, 0.3, 1.0));
    auto poly = [&] {
        const int degree = uniform_int(rng, 1, 3);
        ComplexMatrix p = complex_normal(rng) * ComplexMatrix::Identity(n, n);
        ComplexMatrix power = ComplexMatrix::Identity(n, n);
        for (int k = 1; k <= degree; ++k) {
            power = power * a;
            p += complex_normal(rng) * power;
        }
        return scaled_to(p, uniform(rng, 0.2, 0.95));
    };
    ComplexMatrix t1 = poly();
    ComplexMatrix t2 = poly();
    ComplexMatrix t = t1 * t2;
    return make_triple(std::move(t1), std::move(t2), std::move(t), tol);
}

// Q diag(conj(b_k) u_k, b_k, u_k) Q^* with |b_k| <= 1, |u_k| = 1.
CommutingTriple tetra_unitary_random(Index n, std::mt19937_64& rng, const Tolerances& tol)
{
    const ComplexMatrix q = random_unitary(n, rng());
    ComplexVector d1(n), d2(n), d3(n);
    for (Index k = 0; k < n; ++k) {
        const double modulus = (k % 3 == 0) ? 1.0 : std::sqrt(uniform(rng, 0.0, 1.0));
        const Complex b = std::polar(modulus, uniform(rng, 0.0, 2.0 * std::numbers::pi));
        const Complex u = std::polar(1.0, uniform(rng, 0.0, 2.0 * std::numbers::pi));
        d1(k) = std::conj(b) * u;
        d2(k) = b;
        d3(k) = u;
    }
    return make_triple(q * d1.asDiagonal() * q.adjoint(), q * d2.asDiagonal() * q.adjoint(),
                       q * d3.asDiagonal() * q.adjoint(), tol);
}

// Random partial isometry on C^m of the given rank.
ComplexMatrix partial_isometry(Index m, Index rank, std::mt19937_64& rng)
{
    const ComplexMatrix u = random_unitary(m, rng());
    const ComplexMatrix v = random_unitary(m, rng());
    return u.leftCols(rank) * v.leftCols(rank).adjoint();
}

ComplexMatrix embed_blocks(Index n, const ComplexMatrix& core, const ComplexVector& tail)
{
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    out.topLeftCorner(core.rows(), core.cols()) = core;
    for (Index i = 0; i < tail.size(); ++i)
        out(core.rows() + i, core.cols() + i) = tail(i);
    return out;
}

// Block template over C^m (+) C^m (+) C^k:
//   T1 = [[0, 0], [I, 0]] (+) diag(a),  T2 = [[W, 0], [M, W]] (+) diag(b),
// with W a partial isometry and M = P_{Ker W^*} M' P_{Ker W}, ||M'|| <= 1,
// so that T2 is a contraction and T = T1 T2 = [[0, 0], [W, 0]] (+) diag(ab)
// is a partial isometry; a, b unimodular. Conjugated by a random unitary.
CommutingTriple partial_isometry_random(Index n, std::mt19937_64& rng, const Tolerances& tol)
{
    const Index k = uniform_int(rng, 0, static_cast<int>(n) - 2);
    const Index m = (n - k) / 2;
    const Index unitary_part = n - 2 * m;
    const Index rank = uniform_int(rng, 1, static_cast<int>(m));

    const ComplexMatrix w = partial_isometry(m, rank, rng);
    const ComplexMatrix p_ker_w = ComplexMatrix::Identity(m, m) - w.adjoint() * w;
    const ComplexMatrix p_ker_wstar = ComplexMatrix::Identity(m, m) - w * w.adjoint();
    const ComplexMatrix mixing = p_ker_wstar * scaled_to(random_gaussian(m, m, rng()), uniform(rng, 0.2, 1.0)) * p_ker_w;

    ComplexMatrix core1 = ComplexMatrix::Zero(2 * m, 2 * m);
    core1.bottomLeftCorner(m, m).setIdentity();
    ComplexMatrix core2 = ComplexMatrix::Zero(2 * m, 2 * m);
    core2.topLeftCorner(m, m) = w;
    core2.bottomRightCorner(m, m) = w;
    core2.bottomLeftCorner(m, m) = mixing;

    ComplexVector a(unitary_part), b(unitary_part);
    for (Index i = 0; i < unitary_part; ++i) {
        a(i) = std::polar(1.0, uniform(rng, 0.0, 2.0 * std::numbers::pi));
        b(i) = std::polar(1.0, uniform(rng, 0.0, 2.0 * std::numbers::pi));
    }
    const ComplexMatrix q = random_unitary(n, rng());
    const ComplexMatrix t1 = q * embed_blocks(n, core1, a) * q.adjoint();
    const ComplexMatrix t2 = q * embed_blocks(n, core2, b) * q.adjoint();
    ComplexMatrix t = t1 * t2;
    return make_triple(t1, t2, std::move(t), tol);
}

} // namespace

CommutingTriple random_family(const GallerySpec& spec, const Tolerances& tol)
{
    spec.validate();
    switch (spec.kind) {
    case FamilyKind::counterexample: return example_counterexample(spec.truncation).triple;
    case FamilyKind::pal: return example_pal(spec.truncation).triple;
    default: break;
    }

    constexpr int max_attempts = 20;
    std::string last_error;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::mt19937_64 rng(spec.seed * 1000003ULL + static_cast<std::uint64_t>(attempt));
        try {
            switch (spec.kind) {
            case FamilyKind::product_random: return product_random(spec.dim, rng, tol);
            case FamilyKind::tetra_unitary_random: return tetra_unitary_random(spec.dim, rng, tol);
            case FamilyKind::partial_isometry_random: {
                CommutingTriple t = partial_isometry_random(spec.dim, rng, tol);
                if (!classify(t.T, tol).partial_isometry)
                    throw TetraError(ErrorKind::NotPartialIsometry, "generated T is not a partial isometry");
                return t;
            }
            default: break;
            }
        } catch (const TetraError& e) {
            last_error = e.what();
        }
    }
    std::ostringstream msg;
    msg << family_name(spec.kind) << " failed after " << max_attempts << " draws: " << last_error;
    throw TetraError(ErrorKind::GenerationFailed, msg.str());
}

std::string_view family_name(FamilyKind kind) noexcept
{
    switch (kind) {
    case FamilyKind::counterexample: return "counterexample";
    case FamilyKind::pal: return "pal";
    case FamilyKind::product_random: return "product-random";
    case FamilyKind::tetra_unitary_random: return "tetra-unitary";
    case FamilyKind::partial_isometry_random: return "partial-isometry";
    }
    return "unknown";
}

std::optional<FamilyKind> parse_family(std::string_view name)
{
    for (auto kind : {FamilyKind::counterexample, FamilyKind::pal, FamilyKind::product_random,
                      FamilyKind::tetra_unitary_random, FamilyKind::partial_isometry_random})
        if (family_name(kind) == name)
            return kind;
    return std::nullopt;
}

std::vector<std::string> gallery_names()
{
    return {"counterexample", "pal", "product-random", "tetra-unitary", "partial-isometry"};
}

} // namespace tetra::gallery
