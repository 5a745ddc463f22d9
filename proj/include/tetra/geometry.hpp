#pragma once
//
// Scalar model of the tetrablock: the image of the open unit ball of 2x2
// matrices under A -> (a11, a22, det A).
//

#include <cstdint>
#include <vector>

#include "tetra/operator_core.hpp"

namespace tetra::geometry {

using Matrix2c = Eigen::Matrix2cd;

struct TetraPoint {
    Complex x1;
    Complex x2;
    Complex x3;

    bool operator==(const TetraPoint&) const = default;
};

/// (a11, a22, det A).
TetraPoint project(const Matrix2c& a);

/// Spectral norm of a 2x2 matrix without cancellation near equal singular values.
double norm2x2(const Matrix2c& a);

/// The witness with a12 = r, a21 = (x1 x2 - x3) / r.
Matrix2c witness_for_radius(const TetraPoint& p, double r);

struct Membership {
    bool member = false;
    bool closed = false;
    double witness_norm = 0.0;   // minimal ||A|| found by the search
    Matrix2c witness = Matrix2c::Zero();
};

/// Minimal-norm witness search. Diagonal unitary conjugation preserves the
/// diagonal, the determinant and the norm, so a12 can be taken real and
/// nonnegative; the search then runs over r = a12 > 0 on a log-spaced
/// bracket followed by golden-section refinement. Points with
/// x1 x2 = x3 use the diagonal witness.
///
/// Open membership requires witness_norm < 1 - tol, closed membership
/// witness_norm <= 1 + tol. Throws SearchFailed when no interior minimizer
/// exists on the bracket.
Membership in_tetrablock(const TetraPoint& p, bool closed, double tol = 1e-9);

/// x1 = conj(x2) x3, |x2| <= 1, |x3| = 1, each within tol.
bool in_distinguished_boundary(const TetraPoint& p, double tol = 1e-9);

/// n points (a11, a22, det A) for seeded random A with ||A|| < 1.
std::vector<TetraPoint> sample_tetrablock(std::size_t n, std::uint64_t seed);

/// n points (conj(b) u, b, u) with |b| <= 1, |u| = 1. Every other point has
/// |b| = 1, i.e. lies on the torus image {(z1, z2, z1 z2)}.
std::vector<TetraPoint> sample_distinguished_boundary(std::size_t n, std::uint64_t seed);

/// Distinguished-boundary point from polar parameters of b and the phase of u.
TetraPoint boundary_point(double b_modulus, double b_phase, double u_phase);

} // namespace tetra::geometry
