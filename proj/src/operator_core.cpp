#include "tetra/operator_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace tetra {

namespace {

void require_square(const ComplexMatrix& a, const char* what)
{
    if (a.rows() != a.cols()) {
        std::ostringstream msg;
        msg << what << " expects a square matrix, got " << a.rows() << "x" << a.cols();
        throw TetraError(ErrorKind::DimensionMismatch, msg.str());
    }
}

ComplexMatrix hermitian_part(const ComplexMatrix& a)
{
    return (a + a.adjoint()) * 0.5;
}

double top_eigenvalue(const ComplexMatrix& hermitian)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw TetraError(ErrorKind::EigenSolverFailed, "Hermitian eigenvalue solver did not converge");
    return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

} // namespace

void Tolerances::validate() const
{
    if (!(rank_tol > 0.0) || !(residual_tol > 0.0) || grid_points < 8) {
        std::ostringstream msg;
        msg << "tolerances must be positive and grid_points >= 8 (rank_tol=" << rank_tol
            << ", residual_tol=" << residual_tol << ", grid_points=" << grid_points << ")";
        throw TetraError(ErrorKind::InvalidArgument, msg.str());
    }
}

Subspace Subspace::zero(Index ambient_dim)
{
    return Subspace{ambient_dim, ComplexMatrix(ambient_dim, 0)};
}

Subspace Subspace::full(Index ambient_dim)
{
    return Subspace{ambient_dim, ComplexMatrix::Identity(ambient_dim, ambient_dim)};
}

Subspace Subspace::span_of(const ComplexMatrix& spanning, double rank_tol)
{
    const Index n = spanning.rows();
    if (spanning.cols() == 0 || n == 0)
        return zero(n);
    Eigen::JacobiSVD<ComplexMatrix> svd(spanning, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double top = sv.size() > 0 ? sv(0) : 0.0;
    if (top == 0.0)
        return zero(n);
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > rank_tol * std::max(1.0, top))
        ++rank;
    return Subspace{n, svd.matrixU().leftCols(rank)};
}

Subspace orthogonal_complement(const Subspace& s)
{
    const Index n = s.ambient_dim;
    const Index k = s.dim();
    if (k == 0)
        return Subspace::full(n);
    if (k == n)
        return Subspace::zero(n);
    Eigen::HouseholderQR<ComplexMatrix> qr(s.basis);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    return Subspace{n, q.rightCols(n - k)};
}

double operator_norm(const ComplexMatrix& a)
{
    if (a.size() == 0)
        return 0.0;
    // The Gram matrix on the smaller side keeps the eigenproblem small.
    const ComplexMatrix gram = a.rows() < a.cols() ? ComplexMatrix(a * a.adjoint())
                                                   : ComplexMatrix(a.adjoint() * a);
    return std::sqrt(std::max(0.0, top_eigenvalue(hermitian_part(gram))));
}

bool all_finite(const ComplexMatrix& a)
{
    return a.allFinite();
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b)
{
    return a * b - b * a;
}

ComplexMatrix random_gaussian(Index rows, Index cols, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im) / std::numbers::sqrt2;
        }
    return g;
}

ComplexMatrix random_unitary(Index n, std::uint64_t seed)
{
    const ComplexMatrix g = random_gaussian(n, n, seed);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix column phases so the distribution is Haar.
    for (Index j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0)
            q.col(j) *= d / std::abs(d);
    }
    return q;
}

// Defect operators -------------------------------------------------------------

ComplexMatrix DefectData::coordinates() const
{
    return range.basis.adjoint() * defect;
}

ComplexMatrix DefectData::pseudo_inverse() const
{
    const Eigen::VectorXcd inv = singular.cwiseInverse().cast<Complex>();
    return range.basis * inv.asDiagonal() * range.basis.adjoint();
}

DefectData defect_data(const ComplexMatrix& x, const Tolerances& tol)
{
    require_square(x, "defect_operator");
    const Index n = x.rows();
    const ComplexMatrix gap =
        hermitian_part(ComplexMatrix::Identity(n, n) - x.adjoint() * x);

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gap);
    if (solver.info() != Eigen::Success)
        throw TetraError(ErrorKind::EigenSolverFailed, "defect eigen-decomposition failed");
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    const ComplexMatrix& vecs = solver.eigenvectors();

    if (n > 0 && lambda(0) < -tol.rank_tol) {
        std::ostringstream msg;
        msg << "I - X*X has eigenvalue " << lambda(0) << " below -rank_tol";
        throw TetraError(ErrorKind::NotAContraction, msg.str());
    }

    // Eigenvalues ascend, so the defect space is a trailing block; store it
    // in descending order.
    Index kernel_dim = 0;
    while (kernel_dim < n && lambda(kernel_dim) <= tol.rank_tol)
        ++kernel_dim;
    const Index rank = n - kernel_dim;

    DefectData out;
    out.range.ambient_dim = n;
    out.kernel.ambient_dim = n;
    out.range.basis = vecs.rightCols(rank).rowwise().reverse();
    out.kernel.basis = vecs.leftCols(kernel_dim);
    out.singular = lambda.tail(rank).reverse().cwiseSqrt();
    out.defect = out.range.basis * out.singular.cast<Complex>().asDiagonal() *
                 out.range.basis.adjoint();
    return out;
}

ComplexMatrix defect_operator(const ComplexMatrix& x, const Tolerances& tol)
{
    return defect_data(x, tol).defect;
}

Subspace defect_space(const ComplexMatrix& x, const Tolerances& tol)
{
    return defect_data(x, tol).range;
}

// Radii ------------------------------------------------------------------------

double numerical_radius(const ComplexMatrix& a, int grid_points)
{
    require_square(a, "numerical_radius");
    if (a.rows() == 0)
        return 0.0;
    if (a.rows() == 1)
        return std::abs(a(0, 0));
    grid_points = std::max(grid_points, 8);

    const ComplexMatrix adj = a.adjoint();
    auto real_part_top = [&](double theta) {
        const Complex phase = std::polar(1.0, theta);
        return top_eigenvalue((phase * a + std::conj(phase) * adj) * 0.5);
    };

    const double step = 2.0 * std::numbers::pi / grid_points;
    double best = -std::numeric_limits<double>::infinity();
    double best_theta = 0.0;
    for (int k = 0; k < grid_points; ++k) {
        const double theta = k * step;
        const double value = real_part_top(theta);
        if (value > best) {
            best = value;
            best_theta = theta;
        }
    }

    // Golden-section ascent inside the neighbouring grid cells.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = best_theta - step;
    double hi = best_theta + step;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = real_part_top(x1);
    double f2 = real_part_top(x2);
    for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = real_part_top(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = real_part_top(x1);
        }
    }
    return std::max({best, f1, f2, 0.0});
}

double spectral_radius(const ComplexMatrix& a)
{
    require_square(a, "spectral_radius");
    if (a.rows() == 0)
        return 0.0;
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, false);
    if (solver.info() != Eigen::Success)
        throw TetraError(ErrorKind::EigenSolverFailed, "eigenvalue solver did not converge");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

// Classification ---------------------------------------------------------------

OperatorClass classify(const ComplexMatrix& x, const Tolerances& tol)
{
    require_square(x, "classify");
    const Index n = x.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix xx = x.adjoint() * x;

    OperatorClass c;
    c.norm = operator_norm(x);
    c.isometry_residual = operator_norm(xx - id);
    c.coisometry_residual = operator_norm(x * x.adjoint() - id);
    c.partial_isometry_residual = operator_norm(x * xx - x);
    c.projection_residual = std::max(operator_norm(x * x - x), operator_norm(x - x.adjoint()));

    const double t = tol.residual_tol;
    c.contraction = c.norm <= 1.0 + t;
    c.isometry = c.isometry_residual <= t;
    c.coisometry = c.coisometry_residual <= t;
    c.unitary = c.isometry && c.coisometry;
    c.partial_isometry = c.partial_isometry_residual <= t;
    c.projection = c.projection_residual <= t;
    return c;
}

// Unitary completion ---------------------------------------------------------------

ComplexMatrix extend_isometry_to_unitary(const Subspace& domain, const Subspace& codomain,
                                         const ComplexMatrix& map, const Tolerances& tol)
{
    const Index n = domain.ambient_dim;
    if (codomain.ambient_dim != n || map.rows() != n || map.cols() != n)
        throw TetraError(ErrorKind::DimensionMismatch,
                         "domain, codomain and map must share the ambient space");
    if (domain.dim() != codomain.dim()) {
        std::ostringstream msg;
        msg << "domain has dimension " << domain.dim() << " but codomain has " << codomain.dim();
        throw TetraError(ErrorKind::DimensionMismatch, msg.str());
    }
    const Index k = domain.dim();
    if (k == 0)
        return ComplexMatrix::Identity(n, n);

    const ComplexMatrix images = map * domain.basis;
    const double iso = operator_norm(images.adjoint() * images - ComplexMatrix::Identity(k, k));
    if (iso > tol.residual_tol) {
        std::ostringstream msg;
        msg << "map is not isometric on the domain (residual " << iso << ")";
        throw TetraError(ErrorKind::NotIsometric, msg.str());
    }
    const double outside = operator_norm(images - codomain.projector() * images);
    if (outside > tol.residual_tol) {
        std::ostringstream msg;
        msg << "map leaves the codomain (residual " << outside << ")";
        throw TetraError(ErrorKind::NotIsometric, msg.str());
    }

    const Subspace dom_perp = orthogonal_complement(domain);
    const Subspace cod_perp = orthogonal_complement(Subspace::span_of(images, tol.rank_tol));
    if (dom_perp.dim() != cod_perp.dim())
        throw TetraError(ErrorKind::DimensionMismatch, "orthogonal complements differ in dimension");

    return images * domain.basis.adjoint() + cod_perp.basis * dom_perp.basis.adjoint();
}

// Joint spectrum -------------------------------------------------------------------

std::vector<JointEigenvalue> joint_eigenvalues(std::span<const ComplexMatrix> ops,
                                               const Tolerances& tol, std::uint64_t seed)
{
    if (ops.empty())
        return {};
    const Index n = ops.front().rows();
    for (const auto& op : ops) {
        require_square(op, "joint_eigenvalues");
        if (op.rows() != n)
            throw TetraError(ErrorKind::DimensionMismatch, "joint_eigenvalues: operators differ in size");
    }
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i + 1; j < ops.size(); ++j) {
            const double r = operator_norm(commutator(ops[i], ops[j]));
            if (r > tol.residual_tol) {
                std::ostringstream msg;
                msg << "operators " << i << " and " << j << " have commutator norm " << r;
                throw TetraError(ErrorKind::NotCommuting, msg.str());
            }
        }
    if (n == 0)
        return {};

    constexpr int max_attempts = 6; // first try plus 5 retries
    double worst = 0.0;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        const ComplexMatrix weights =
            random_gaussian(static_cast<Index>(ops.size()), 1, seed * 7919 + attempt);
        ComplexMatrix combo = ComplexMatrix::Zero(n, n);
        for (std::size_t i = 0; i < ops.size(); ++i)
            combo += weights(static_cast<Index>(i), 0) * ops[i];

        Eigen::ComplexSchur<ComplexMatrix> schur(combo);
        if (schur.info() != Eigen::Success)
            continue;
        const ComplexMatrix& u = schur.matrixU();

        worst = 0.0;
        std::vector<ComplexMatrix> transformed;
        transformed.reserve(ops.size());
        for (const auto& op : ops) {
            ComplexMatrix t = u.adjoint() * op * u;
            const ComplexMatrix lower = t.triangularView<Eigen::StrictlyLower>();
            worst = std::max(worst, operator_norm(lower) / std::max(1.0, operator_norm(op)));
            transformed.push_back(std::move(t));
        }
        if (worst > tol.residual_tol)
            continue;

        std::vector<JointEigenvalue> tuples(static_cast<std::size_t>(n));
        for (Index k = 0; k < n; ++k)
            for (const auto& t : transformed)
                tuples[static_cast<std::size_t>(k)].push_back(t(k, k));
        return tuples;
    }
    std::ostringstream msg;
    msg << "no combination triangularized all operators (worst lower residual " << worst << ")";
    throw TetraError(ErrorKind::TriangularizationFailed, msg.str());
}

} // namespace tetra
