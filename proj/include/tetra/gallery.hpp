#pragma once
//
// Named examples (exact structured form plus degree-N compression) and the
// seeded random families used by the property suites.
//

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tetra/analysis.hpp"
#include "tetra/shift_calculus.hpp"

namespace tetra::gallery {

struct StructuredTriple {
    shift::StructuredOperator T1 = shift::StructuredOperator::zero();
    shift::StructuredOperator T2 = shift::StructuredOperator::zero();
    shift::StructuredOperator T = shift::StructuredOperator::zero();
};

/// Exact fundamental pair of a structured triple whose T is a partial
/// isometry: D_T = I - T^*T is then a projection and F_i = D_T (T_i - T_j^* T) D_T.
struct StructuredPair {
    shift::StructuredOperator D = shift::StructuredOperator::zero();
    shift::StructuredOperator F1 = shift::StructuredOperator::zero();
    shift::StructuredOperator F2 = shift::StructuredOperator::zero();
    double idempotence_residual = 0.0;  // D^2 vs D on the budget
    double defining_residual = 0.0;     // T_i - T_j^* T vs D F_i D on the budget
};

StructuredPair structured_fundamental_pair(const StructuredTriple& t, int degree_budget);

struct NamedExample {
    CommutingTriple triple;       // compression at degree N
    StructuredTriple structured;  // exact operators on H^2(C^f)
    int truncation = 0;
    /// Expected fundamental operators, exact and compressed (ambient coordinates).
    shift::StructuredOperator expected_F1 = shift::StructuredOperator::zero();
    shift::StructuredOperator expected_F2 = shift::StructuredOperator::zero();
    ComplexMatrix expected_F1_ambient;
    ComplexMatrix expected_F2_ambient;
    /// Expected restriction pair (T1, T2)|Ker T in ambient coordinates.
    ComplexMatrix expected_D1_ambient;
    ComplexMatrix expected_D2_ambient;
    /// Projection onto span{e_0, ..., e_{N-2}} in every fiber component,
    /// where compressions agree with the operators they approximate.
    ComplexMatrix protected_projector;
};

/// T1 = [[0, 0], [I, 0]], T2 = diag(S, S), T = T1 T2 = [[0, 0], [S, 0]] on H^2 (+) H^2.
/// Expected pair (0, 0 (+) S).
NamedExample example_counterexample(int n);

struct PalExample : NamedExample {
    shift::StructuredOperator J = shift::StructuredOperator::zero();  // on H_1 = H^2(C^2) (+) H^2(C^2)
    ComplexMatrix small_block;    // the 2x2 fiber matrix with norm 1/4
};

/// H_1 = H^2(C^2) (+) H^2(C^2), H = P_0 (x) [[0, 1/4], [0, 0]], J = H (+) 0,
/// Y = [[0, S], [I, 0]] on H_1; T1 = 0 (+) J, T2 = 0, T = [[0, 0], [Y, 0]].
/// Expected pair (0 (+) J, 0).
PalExample example_pal(int n);

enum class FamilyKind { counterexample, pal, product_random, tetra_unitary_random, partial_isometry_random };

struct GallerySpec {
    FamilyKind kind = FamilyKind::product_random;
    int truncation = 8;  // named examples only
    int dim = 4;         // random families only
    std::uint64_t seed = 0;

    /// Throws InvalidArgument unless truncation >= 2 and dim >= 1
    /// (dim >= 2 for partial_isometry_random).
    void validate() const;
};

/// Deterministic per seed. Throws GenerationFailed when a generated triple
/// cannot pass make_triple within a bounded number of redraws.
CommutingTriple random_family(const GallerySpec& spec, const Tolerances& tol = {});

/// CLI names: counterexample, pal, product-random, tetra-unitary, partial-isometry.
std::string_view family_name(FamilyKind kind) noexcept;
std::optional<FamilyKind> parse_family(std::string_view name);
std::vector<std::string> gallery_names();

} // namespace tetra::gallery
