#pragma once
//
// Dense complex-matrix primitives shared by every analysis stage: defect
// operators and spaces, numerical and spectral radius, operator
// classification, unitary completion and joint eigenvalues.
//

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "tetra/errors.hpp"

namespace tetra {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

struct Tolerances {
    double rank_tol = 1e-9;
    double residual_tol = 1e-8;
    int grid_points = 360;

    /// Throws InvalidArgument unless both tolerances are positive and the
    /// grid has at least 8 points.
    void validate() const;
};

/// Subspace of C^ambient_dim described by an orthonormal column basis.
struct Subspace {
    Index ambient_dim = 0;
    ComplexMatrix basis;

    Index dim() const { return basis.cols(); }
    ComplexMatrix projector() const { return basis * basis.adjoint(); }

    static Subspace zero(Index ambient_dim);
    static Subspace full(Index ambient_dim);
    /// Orthonormalizes the columns of `spanning`, dropping directions whose
    /// singular value is at most rank_tol times the largest one.
    static Subspace span_of(const ComplexMatrix& spanning, double rank_tol);
};

/// Orthogonal complement within the ambient space.
Subspace orthogonal_complement(const Subspace& s);

// Norms and small helpers ---------------------------------------------------

double operator_norm(const ComplexMatrix& a);
bool all_finite(const ComplexMatrix& a);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix random_unitary(Index n, std::uint64_t seed);
ComplexMatrix random_gaussian(Index rows, Index cols, std::uint64_t seed);

// Defect operators -----------------------------------------------------------

/// Spectral data of D_X = (I - X*X)^{1/2}.
///
/// Eigenvalues of I - X*X in [-rank_tol, rank_tol] are treated as zero; the
/// defect space keeps exactly the eigenvectors above that cut, so `range`
/// is the closure of Ran D_X at the working precision.
struct DefectData {
    ComplexMatrix defect;       // D_X, Hermitian PSD
    Subspace range;             // orthonormal basis of the defect space
    Subspace kernel;            // orthonormal basis of Ker D_X
    Eigen::VectorXd singular;   // eigenvalues of D_X on `range`, column order

    /// D_X in defect-space coordinates: range.basis^* D_X.
    ComplexMatrix coordinates() const;
    /// Moore-Penrose pseudoinverse of D_X with the same rank cut.
    ComplexMatrix pseudo_inverse() const;
};

DefectData defect_data(const ComplexMatrix& x, const Tolerances& tol = {});
ComplexMatrix defect_operator(const ComplexMatrix& x, const Tolerances& tol = {});
Subspace defect_space(const ComplexMatrix& x, const Tolerances& tol = {});

// Radii ----------------------------------------------------------------------

/// Lower bound for w(A): grid over theta of the top eigenvalue of
/// Re(e^{i theta} A), then golden-section refinement around the grid maximum.
double numerical_radius(const ComplexMatrix& a, int grid_points = 360);

double spectral_radius(const ComplexMatrix& a);

// Classification ---------------------------------------------------------------

struct OperatorClass {
    bool contraction = false;
    bool isometry = false;
    bool coisometry = false;
    bool unitary = false;
    bool partial_isometry = false;
    bool projection = false;

    double norm = 0.0;
    double isometry_residual = 0.0;          // ||X*X - I||
    double coisometry_residual = 0.0;        // ||XX* - I||
    double partial_isometry_residual = 0.0;  // ||XX*X - X||
    double projection_residual = 0.0;        // max(||X^2 - X||, ||X - X*||)
};

OperatorClass classify(const ComplexMatrix& x, const Tolerances& tol = {});

// Unitary completion -------------------------------------------------------------

/// Unitary U on the ambient space with U * domain.basis = map * domain.basis.
/// The images must be orthonormal and lie in `codomain`.
ComplexMatrix extend_isometry_to_unitary(const Subspace& domain, const Subspace& codomain,
                                         const ComplexMatrix& map, const Tolerances& tol = {});

// Joint spectrum -------------------------------------------------------------------

using JointEigenvalue = std::vector<Complex>;

/// Joint eigenvalues of pairwise-commuting matrices via a Schur form of a
/// seeded random linear combination (up to 5 retries with fresh weights).
std::vector<JointEigenvalue> joint_eigenvalues(std::span<const ComplexMatrix> ops,
                                               const Tolerances& tol = {},
                                               std::uint64_t seed = 0);

} // namespace tetra
