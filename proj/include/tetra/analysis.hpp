#pragma once
//
// Fundamental operators of a commuting triple (T1, T2, T), the relations they
// satisfy, tetrablock-isometry checks, the necessary conditions on Ker D_T,
// the sufficient conditions (P1)/(P2), and a Monte Carlo falsifier for the
// spectral-set inequality over the tetrablock.
//

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tetra/operator_core.hpp"

namespace tetra {

struct CommutingTriple {
    ComplexMatrix T1;
    ComplexMatrix T2;
    ComplexMatrix T;
    /// ||[T1,T2]||, ||[T1,T]||, ||[T2,T]||.
    std::array<double, 3> commutator_residuals{};

    Index dim() const { return T.rows(); }
};

/// Validates shapes, finiteness and pairwise commutation.
CommutingTriple make_triple(ComplexMatrix t1, ComplexMatrix t2, ComplexMatrix t, const Tolerances& tol = {});

// Condition reports ----------------------------------------------------------------

enum class Verdict { holds, fails, not_evaluated };

std::string_view to_string(Verdict v) noexcept;

struct Condition {
    std::string name;
    Verdict verdict = Verdict::not_evaluated;
    std::optional<double> residual;
    double tolerance = 0.0;
    std::string note;
    std::optional<ComplexMatrix> witness;

    bool holds() const { return verdict == Verdict::holds; }
};

/// Condition whose verdict is residual <= tolerance.
Condition residual_condition(std::string name, double residual, double tolerance, std::string note = {});
Condition unevaluated_condition(std::string name, std::string note);

class ConditionReport {
public:
    void add(Condition c);
    /// Throws InvalidArgument for an unknown name.
    const Condition& at(std::string_view name) const;
    bool contains(std::string_view name) const;
    bool holds(std::string_view name) const { return at(name).holds(); }
    /// True when no evaluated condition fails.
    bool all_hold() const;
    double max_residual() const;
    const std::vector<Condition>& conditions() const { return conditions_; }
    void append(const ConditionReport& other);

private:
    std::vector<Condition> conditions_;
};

// Fundamental operators ---------------------------------------------------------------

struct FundamentalPair {
    ComplexMatrix F1;   // in defect-space coordinates
    ComplexMatrix F2;
    DefectData defect;  // D_T, its range (the coordinate basis) and kernel
    double residual_eq21 = 0.0;     // max_i ||D_T F_i D_T - (T_i - T_j^* T)||
    double residual_fundrel = 0.0;  // max residual of the two fundamental relations
    double numerical_radius_margin = 1.0;  // 1 - max_{|z|=1} w(F1 + z F2)
    double off_defect_residual = 0.0;      // part of T_i - T_j^* T outside D_T x D_T

    const Subspace& defect_basis() const { return defect.range; }
    /// F_i as operators on the full space (zero off the defect space).
    ComplexMatrix F1_ambient() const;
    ComplexMatrix F2_ambient() const;
};

/// F_i = D_T^+ (T_i - T_j^* T) D_T^+ in defect coordinates.
///
/// Throws NoFundamentalPair when T_i - T_j^* T does not vanish on and into
/// Ker D_T within residual_tol, NotAContraction when T is not a contraction.
/// The numerical-radius margin is evaluated on tol.grid_points boundary
/// points; pass `with_radius = false` to skip that sweep.
FundamentalPair fundamental_operators(const CommutingTriple& t, const Tolerances& tol = {},
                                      bool with_radius = true);

/// Residuals of
///   D_T T1 = F1 D_T + F2^* D_T T,   D_T T2 = F2 D_T + F1^* D_T T,
/// and of the derived identity
///   F1^* D_T T1 - F2^* D_T T2 = (F1^*F1 - F2^*F2) D_T + (F1^*F2^* - F2^*F1^*) D_T T
/// (checked at 10x residual_tol).
ConditionReport check_fundamental_relations(const CommutingTriple& t, const FundamentalPair& fp,
                                            const Tolerances& tol = {});

struct RadiusCondition {
    bool holds = false;
    double max_radius = 0.0;  // max over the |z| = 1 grid of w(F1 + z F2)
    double margin = 1.0;      // 1 - max_radius
    double argmax_phase = 0.0;
};

/// max over |z| = 1 suffices: z -> w(F1 + z F2) is convex, so its maximum on
/// the closed disk is attained on the circle.
RadiusCondition numerical_radius_condition(const ComplexMatrix& f1, const ComplexMatrix& f2,
                                           int grid_points = 360, double tol = 1e-8);
RadiusCondition numerical_radius_condition(const FundamentalPair& fp, int grid_points = 360,
                                           double tol = 1e-8);

/// Items (2) and (3) on an orthonormal basis of Ker D_T; item (1) is
/// reported as not evaluated.
ConditionReport necessary_conditions(const CommutingTriple& t, const FundamentalPair& fp,
                                     const Tolerances& tol = {});

/// (P1) F1 F2 = F2 F1 and (P2) F1^*F1 - F1F1^* = F2^*F2 - F2F2^*.
ConditionReport sufficient_conditions(const FundamentalPair& fp, const Tolerances& tol = {});
ConditionReport sufficient_conditions(const ComplexMatrix& f1, const ComplexMatrix& f2,
                                      const Tolerances& tol = {});

// Spectral-set falsifier --------------------------------------------------------------

struct Monomial {
    int a = 0;  // power of x1
    int b = 0;  // power of x2
    int c = 0;  // power of x3

    int degree() const { return a + b + c; }
    bool operator==(const Monomial&) const = default;
};

/// All x1^a x2^b x3^c with a + b + c <= degree, graded then lexicographic.
std::vector<Monomial> monomials_up_to(int degree);

struct FalsifierConfig {
    int degree = 3;
    int n_polys = 200;
    std::size_t n_samples = 20000;
    std::uint64_t seed = 0;
    double margin = 0.05;
    /// Try every monomial before the random polynomials.
    bool probe_monomials = true;
};

struct ViolationCertificate {
    std::vector<Monomial> monomials;
    std::vector<Complex> coefficients;
    double operator_norm = 0.0;  // ||p(T1, T2, T)||
    double sup_estimate = 0.0;   // lower bound for sup over the tetrablock of |p|
    double ratio = 0.0;          // operator_norm / sup_estimate
    std::string label;           // "monomial x1^1" or "random polynomial #k"
};

/// Compares ||p(T)|| against a Monte Carlo estimate of sup |p| over the
/// tetrablock (interior samples, distinguished-boundary samples and a local
/// ascent on the boundary). Returns the first p whose norm exceeds the
/// estimate by more than the margin. "No certificate" proves nothing.
std::optional<ViolationCertificate> spectral_set_falsifier(const CommutingTriple& t,
                                                           const FalsifierConfig& config = {});

// Tetrablock isometries -----------------------------------------------------------------

struct IsometryCheckOptions {
    /// Light falsifier run used as evidence for "tetrablock contraction" in
    /// the second characterization.
    FalsifierConfig falsifier{2, 40, 2000, 0, 0.05, true};
    bool run_falsifier = true;
};

/// Evaluates three equivalent characterizations of a tetrablock isometry:
///   (2) tetrablock contraction with V an isometry: V isometric, joint
///       spectrum inside the closed tetrablock, falsifier silent;
///   (3) V1 = V2^* V, V2 a contraction, V an isometry;
///   (4) V1 = V2^* V, spectral radii of V1, V2 at most one, V an isometry.
/// The overall "tetrablock isometry" verdict is taken from (3).
ConditionReport check_tetrablock_isometry(const CommutingTriple& t, const Tolerances& tol = {},
                                          const IsometryCheckOptions& options = {});

} // namespace tetra
