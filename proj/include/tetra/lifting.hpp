#pragma once
//
// Truncated isometric lifts.
//
// Lifts live on H (+) L^N: finitely many copies ("levels") of a defect
// space. Every construction here is lower-triangular with respect to
// H (+) H^perp, so compressions of polynomials in the lift to H reproduce
// the polynomial in the original operators exactly. Commutation and
// isometry hold only on the protected range: vectors w(V) h whose orbit
// never reaches the last level.
//

#include <string>
#include <string_view>
#include <vector>

#include "tetra/analysis.hpp"

namespace tetra {

// Single contraction ------------------------------------------------------------

struct IsometricLift {
    ComplexMatrix V;
    ComplexMatrix embed;  // first n coordinates
    int levels = 0;
    Index level_dim = 0;  // dim D_T
    int protected_degree = 0;
};

/// V(h, d_1, ..., d_N) = (T h, D_T h, d_1, ..., d_{N-1}) in defect coordinates.
/// Isometric except on the last level; protected degree N - 1.
IsometricLift sz_nagy_lift(const ComplexMatrix& t, int levels, const Tolerances& tol = {});

/// max_{k <= degree} || embed^* V^k embed - T^k ||.
double verify_power_lift(const ComplexMatrix& t, const IsometricLift& lift, int degree);

// Commuting pairs and product triples ----------------------------------------------

struct LiftDiagnostic {
    std::string name;
    double value = 0.0;
};

struct LiftResult {
    ComplexMatrix V1;
    ComplexMatrix V2;
    ComplexMatrix V;        // V1 V2
    ComplexMatrix embed;    // isometric embedding of H
    ComplexMatrix pairing;  // unitary on E (+) E, E = D_{T1} (+) D_{T2} in coordinates
    int levels = 0;
    Index level_dim = 0;    // dim E
    int protected_degree = 0;
    std::vector<LiftDiagnostic> diagnostics;
    /// Tetrablock-isometry conditions on the protected range (product lifts only).
    ConditionReport isometry_report;

    /// Throws InvalidArgument for an unknown name.
    double diagnostic(std::string_view name) const;
};

/// Andô-type lift on H (+) E^N. Each V_i starts from the naive lift that
/// writes D_{T_i} h into its own slot of E, and a pairing unitary G on E (+) E
///   G (D1 T2 h, D2 h) = (D2 T1 h, D1 h)
/// acts on the level pairs (1,2), (3,4), ...: V1 = G~ W1, V2 = W2 G~^*.
/// Protected degree floor(N / 2).
///
/// Throws NotCommuting, NotAContraction, PairingNotIsometric (the norm
/// identity behind G fails numerically).
LiftResult ando_lift(const ComplexMatrix& t1, const ComplexMatrix& t2, int levels, const Tolerances& tol = {});

/// (V1, V2, V1 V2) from ando_lift with the tetrablock-isometry conditions
/// evaluated on the protected range.
LiftResult tetra_product_lift(const ComplexMatrix& t1, const ComplexMatrix& t2, int levels,
                              const Tolerances& tol = {});

/// Orthonormal basis of span{ V1^a V2^b embed : a + b <= word_length }.
ComplexMatrix protected_basis(const LiftResult& lift, int word_length, double rank_tol = 1e-9);

/// max over x1^a x2^b x3^c, a + b + c <= degree, of
/// || embed^* q(V1, V2, V) embed - q(T1, T2, T) ||.
/// Throws DegreeExceedsProtection for degree > protected_degree.
double verify_lift(const CommutingTriple& t, const LiftResult& lift, int degree);

/// Blocks of the lift over embed(H) (+) (K - H): V_j = [[T_j, 0], [C_j, S_j]],
/// V = [[T, 0], [C, S]], and the isometry Lambda with Lambda D_T = C.
/// Lambda maps defect coordinates into complement coordinates.
struct LiftDecomposition {
    ComplexMatrix C1, C2, C;
    ComplexMatrix S1, S2, S;
    ComplexMatrix Lambda;
    ComplexMatrix complement;  // orthonormal basis of K - H
};

struct BlockIdentityReport {
    LiftDecomposition blocks;
    ConditionReport report;
};

/// Residuals of
///   T1 - T2^*T = C2^*C, C2^*S = 0, T2 - T1^*T = C1^*C, C1^*S = 0,
///   C1 T2 + S1 C2 = C2 T1 + S2 C1, F_i = Lambda^* S_i Lambda,
/// with the identities on K - H restricted to the protected range.
/// Throws LiftNotVerified unless the lift verifies at degree 2.
BlockIdentityReport lift_block_identities(const CommutingTriple& t, const LiftResult& lift,
                                          const Tolerances& tol = {});
BlockIdentityReport lift_block_identities(const CommutingTriple& t, const LiftResult& lift,
                                          const FundamentalPair& fp, const Tolerances& tol = {});

} // namespace tetra
