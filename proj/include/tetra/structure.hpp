#pragma once
//
// Partial-isometry triples: T written in blocks over Ran T^* (+) Ker T, the
// block forms of T1, T2, the restriction (D1, D2) = (T1, T2)|Ker T, and the
// consequences for the fundamental pair.
//

#include <array>

#include "tetra/analysis.hpp"

namespace tetra {

struct PartialIsometryDecomposition {
    Subspace ran_Tstar;
    Subspace ker_T;
    /// T = [[Y, 0], [X, 0]] with respect to Ran T^* (+) Ker T.
    ComplexMatrix Y;
    ComplexMatrix X;
    double second_column_residual = 0.0;  // norm of T on Ker T
    double Z_isometry_residual = 0.0;     // || [Y; X]^* [Y; X] - I ||

    /// Unitary [ran_Tstar | ker_T] taking block coordinates to the ambient space.
    ComplexMatrix change_of_basis() const;
};

/// Throws NotPartialIsometry unless T T^* T = T within residual_tol.
PartialIsometryDecomposition decompose_partial_isometry(const ComplexMatrix& t, const Tolerances& tol = {});

struct RestrictionPair {
    ComplexMatrix D1;  // in Ker T coordinates
    ComplexMatrix D2;
    std::array<double, 2> invariance_residuals{};  // || P_{(Ker T)^perp} T_i |Ker T ||
};

struct OperatorBlocks {
    ComplexMatrix A, B, C, D;  // [[A, B], [C, D]] over Ran T^* (+) Ker T
};

struct PartialIsometryAnalysis {
    PartialIsometryDecomposition decomposition;
    RestrictionPair restriction;
    std::array<OperatorBlocks, 2> blocks;
    /// Max over i of || T_i - (T_i rebuilt from the block template) ||.
    double reconstruction_residual = 0.0;
    /// invariance, F = 0 (+) D, block equations, P1, P2, the (D1, D2) forms
    /// and the agreement of the two P2 verdicts.
    ConditionReport report;
};

/// Throws NotPartialIsometry; propagates NoFundamentalPair.
PartialIsometryAnalysis analyze_partial_isometry_triple(const CommutingTriple& t, const Tolerances& tol = {});
PartialIsometryAnalysis analyze_partial_isometry_triple(const CommutingTriple& t, const FundamentalPair& fp,
                                                        const Tolerances& tol = {});

} // namespace tetra
