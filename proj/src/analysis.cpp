#include "tetra/analysis.hpp"

#include "tetra/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tetra {

CommutingTriple make_triple(ComplexMatrix t1, ComplexMatrix t2, ComplexMatrix t, const Tolerances& tol)
{
    const Index n = t.rows();
    for (const ComplexMatrix* m : {&t1, &t2, &t}) {
        if (m->rows() != n || m->cols() != n) {
            std::ostringstream msg;
            msg << "triple entries must be square of equal size; got " << t1.rows() << "x" << t1.cols()
                << ", " << t2.rows() << "x" << t2.cols() << ", " << t.rows() << "x" << t.cols();
            throw TetraError(ErrorKind::DimensionMismatch, msg.str());
        }
        if (!all_finite(*m))
            throw TetraError(ErrorKind::InvalidArgument, "triple has non-finite entries");
    }

    CommutingTriple out;
    out.commutator_residuals = {operator_norm(commutator(t1, t2)), operator_norm(commutator(t1, t)),
                                operator_norm(commutator(t2, t))};
    constexpr std::array<const char*, 3> names{"(T1, T2)", "(T1, T)", "(T2, T)"};
    for (std::size_t i = 0; i < 3; ++i)
        if (out.commutator_residuals[i] > tol.residual_tol) {
            std::ostringstream msg;
            msg << "pair " << names[i] << " has commutator norm " << out.commutator_residuals[i];
            throw TetraError(ErrorKind::NotCommuting, msg.str());
        }
    out.T1 = std::move(t1);
    out.T2 = std::move(t2);
    out.T = std::move(t);
    return out;
}

// Condition reports ------------------------------------------------------------------

std::string_view to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::not_evaluated: return "not evaluated";
    }
    return "unknown";
}

Condition residual_condition(std::string name, double residual, double tolerance, std::string note)
{
    Condition c;
    c.name = std::move(name);
    c.residual = residual;
    c.tolerance = tolerance;
    c.verdict = residual <= tolerance ? Verdict::holds : Verdict::fails;
    c.note = std::move(note);
    return c;
}

Condition unevaluated_condition(std::string name, std::string note)
{
    Condition c;
    c.name = std::move(name);
    c.note = std::move(note);
    return c;
}

void ConditionReport::add(Condition c)
{
    conditions_.push_back(std::move(c));
}

bool ConditionReport::contains(std::string_view name) const
{
    return std::any_of(conditions_.begin(), conditions_.end(), [&](const Condition& c) { return c.name == name; });
}

const Condition& ConditionReport::at(std::string_view name) const
{
    for (const auto& c : conditions_)
        if (c.name == name)
            return c;
    throw TetraError(ErrorKind::InvalidArgument, "no condition named '" + std::string(name) + "'");
}

bool ConditionReport::all_hold() const
{
    return std::none_of(conditions_.begin(), conditions_.end(),
                        [](const Condition& c) { return c.verdict == Verdict::fails; });
}

double ConditionReport::max_residual() const
{
    double worst = 0.0;
    for (const auto& c : conditions_)
        if (c.residual)
            worst = std::max(worst, *c.residual);
    return worst;
}

void ConditionReport::append(const ConditionReport& other)
{
    conditions_.insert(conditions_.end(), other.conditions_.begin(), other.conditions_.end());
}

// Fundamental operators ------------------------------------------------------------------

ComplexMatrix FundamentalPair::F1_ambient() const
{
    return defect.range.basis * F1 * defect.range.basis.adjoint();
}

ComplexMatrix FundamentalPair::F2_ambient() const
{
    return defect.range.basis * F2 * defect.range.basis.adjoint();
}

namespace {

struct RelationResiduals {
    double first = 0.0;
    double second = 0.0;
    double derived = 0.0;
};

RelationResiduals relation_residuals(const CommutingTriple& t, const FundamentalPair& fp)
{
    const ComplexMatrix& d = fp.defect.defect;
    const ComplexMatrix f1 = fp.F1_ambient();
    const ComplexMatrix f2 = fp.F2_ambient();
    const ComplexMatrix dt = d * t.T;

    RelationResiduals r;
    r.first = operator_norm(d * t.T1 - f1 * d - f2.adjoint() * dt);
    r.second = operator_norm(d * t.T2 - f2 * d - f1.adjoint() * dt);
    const ComplexMatrix lhs = f1.adjoint() * d * t.T1 - f2.adjoint() * d * t.T2;
    const ComplexMatrix rhs = (f1.adjoint() * f1 - f2.adjoint() * f2) * d +
                              (f1.adjoint() * f2.adjoint() - f2.adjoint() * f1.adjoint()) * dt;
    r.derived = operator_norm(lhs - rhs);
    return r;
}

} // namespace

FundamentalPair fundamental_operators(const CommutingTriple& t, const Tolerances& tol, bool with_radius)
{
    FundamentalPair fp;
    fp.defect = defect_data(t.T, tol);

    const ComplexMatrix x1 = t.T1 - t.T2.adjoint() * t.T;
    const ComplexMatrix x2 = t.T2 - t.T1.adjoint() * t.T;

    const ComplexMatrix& kernel = fp.defect.kernel.basis;
    if (kernel.cols() > 0) {
        fp.off_defect_residual = std::max({operator_norm(x1 * kernel), operator_norm(kernel.adjoint() * x1),
                                           operator_norm(x2 * kernel), operator_norm(kernel.adjoint() * x2)});
        if (fp.off_defect_residual > tol.residual_tol) {
            std::ostringstream msg;
            msg << "T_i - T_j^* T does not live on the defect space (residual " << fp.off_defect_residual << ")";
            throw TetraError(ErrorKind::NoFundamentalPair, msg.str());
        }
    }

    const ComplexMatrix& basis = fp.defect.range.basis;
    const Eigen::VectorXcd inv = fp.defect.singular.cwiseInverse().cast<Complex>();
    fp.F1 = inv.asDiagonal() * (basis.adjoint() * x1 * basis) * inv.asDiagonal();
    fp.F2 = inv.asDiagonal() * (basis.adjoint() * x2 * basis) * inv.asDiagonal();

    const ComplexMatrix& d = fp.defect.defect;
    fp.residual_eq21 = std::max(operator_norm(d * fp.F1_ambient() * d - x1), operator_norm(d * fp.F2_ambient() * d - x2));
    const RelationResiduals rel = relation_residuals(t, fp);
    fp.residual_fundrel = std::max(rel.first, rel.second);

    if (with_radius)
        fp.numerical_radius_margin = numerical_radius_condition(fp, tol.grid_points, tol.residual_tol).margin;
    return fp;
}

ConditionReport check_fundamental_relations(const CommutingTriple& t, const FundamentalPair& fp,
                                            const Tolerances& tol)
{
    const RelationResiduals r = relation_residuals(t, fp);
    ConditionReport report;
    report.add(residual_condition("defining equations", fp.residual_eq21, tol.residual_tol,
                                  "T_i - T_j^* T = D_T F_i D_T"));
    report.add(residual_condition("fundamental relation 1", r.first, tol.residual_tol,
                                  "D_T T1 = F1 D_T + F2^* D_T T"));
    report.add(residual_condition("fundamental relation 2", r.second, tol.residual_tol,
                                  "D_T T2 = F2 D_T + F1^* D_T T"));
    report.add(residual_condition("derived identity", r.derived, 10.0 * tol.residual_tol,
                                  "F1^*D_T T1 - F2^*D_T T2 = (F1^*F1 - F2^*F2)D_T + (F1^*F2^* - F2^*F1^*)D_T T"));
    return report;
}

RadiusCondition numerical_radius_condition(const ComplexMatrix& f1, const ComplexMatrix& f2, int grid_points,
                                           double tol)
{
    RadiusCondition out;
    if (f1.rows() == 0) {
        out.holds = true;
        return out;
    }
    const int points = std::max(grid_points, 8);
    // The theta grid inside w(.) only seeds the golden-section refinement.
    constexpr int inner_grid = 72;
    for (int k = 0; k < points; ++k) {
        const double phase = 2.0 * std::numbers::pi * k / points;
        const double w = numerical_radius(f1 + std::polar(1.0, phase) * f2, inner_grid);
        if (w > out.max_radius) {
            out.max_radius = w;
            out.argmax_phase = phase;
        }
    }
    out.margin = 1.0 - out.max_radius;
    out.holds = out.max_radius <= 1.0 + tol;
    return out;
}

RadiusCondition numerical_radius_condition(const FundamentalPair& fp, int grid_points, double tol)
{
    return numerical_radius_condition(fp.F1, fp.F2, grid_points, tol);
}

ConditionReport necessary_conditions(const CommutingTriple& t, const FundamentalPair& fp, const Tolerances& tol)
{
    ConditionReport report;
    report.add(unevaluated_condition("necessary (1)",
                                     "joint Halmos dilation to a commuting subnormal pair: non-constructive"));

    const ComplexMatrix& kernel = fp.defect.kernel.basis;
    if (kernel.cols() == 0) {
        report.add(residual_condition("necessary (2)", 0.0, tol.residual_tol, "Ker D_T = 0, vacuous"));
        report.add(residual_condition("necessary (3)", 0.0, tol.residual_tol, "Ker D_T = 0, vacuous"));
        return report;
    }
    const ComplexMatrix& d = fp.defect.defect;
    const ComplexMatrix f1 = fp.F1_ambient();
    const ComplexMatrix f2 = fp.F2_ambient();
    const ComplexMatrix item2 = (f1.adjoint() * d * t.T1 - f2.adjoint() * d * t.T2) * kernel;
    const ComplexMatrix item3 = (f1.adjoint() * f2.adjoint() - f2.adjoint() * f1.adjoint()) * d * t.T * kernel;
    report.add(residual_condition("necessary (2)", operator_norm(item2), tol.residual_tol,
                                  "(F1^* D_T T1 - F2^* D_T T2) on Ker D_T"));
    report.add(residual_condition("necessary (3)", operator_norm(item3), tol.residual_tol,
                                  "(F1^* F2^* - F2^* F1^*) D_T T on Ker D_T"));
    return report;
}

ConditionReport sufficient_conditions(const ComplexMatrix& f1, const ComplexMatrix& f2, const Tolerances& tol)
{
    ConditionReport report;
    report.add(residual_condition("P1", operator_norm(commutator(f1, f2)), tol.residual_tol, "F1 F2 = F2 F1"));
    const ComplexMatrix gap1 = f1.adjoint() * f1 - f1 * f1.adjoint();
    const ComplexMatrix gap2 = f2.adjoint() * f2 - f2 * f2.adjoint();
    report.add(residual_condition("P2", operator_norm(gap1 - gap2), tol.residual_tol,
                                  "F1^*F1 - F1F1^* = F2^*F2 - F2F2^*"));
    return report;
}

ConditionReport sufficient_conditions(const FundamentalPair& fp, const Tolerances& tol)
{
    return sufficient_conditions(fp.F1, fp.F2, tol);
}

// Tetrablock isometries ----------------------------------------------------------------------

ConditionReport check_tetrablock_isometry(const CommutingTriple& t, const Tolerances& tol,
                                          const IsometryCheckOptions& options)
{
    const double eps = tol.residual_tol;
    const Index n = t.dim();
    ConditionReport report;

    const double factor = operator_norm(t.T1 - t.T2.adjoint() * t.T);
    const double v2_excess = std::max(0.0, operator_norm(t.T2) - 1.0);
    const double v_iso = operator_norm(t.T.adjoint() * t.T - ComplexMatrix::Identity(n, n));
    const double radius_excess = std::max({0.0, spectral_radius(t.T1) - 1.0, spectral_radius(t.T2) - 1.0});

    report.add(residual_condition("V1 = V2^* V", factor, eps));
    report.add(residual_condition("V2 contraction", v2_excess, eps, "excess of ||V2|| over 1"));
    report.add(residual_condition("V isometry", v_iso, eps, "||V^*V - I||"));
    report.add(residual_condition("spectral radii <= 1", radius_excess, eps, "excess of max(r(V1), r(V2)) over 1"));

    // Evidence for "tetrablock contraction": joint spectrum in the closed
    // tetrablock (necessary) and no falsifier certificate.
    double spectrum_excess = 0.0;
    std::string spectrum_note = "max witness norm excess over 1 across joint eigenvalues";
    bool spectrum_ok = true;
    try {
        const std::array<ComplexMatrix, 3> ops{t.T1, t.T2, t.T};
        for (const auto& tuple : joint_eigenvalues(ops, tol)) {
            const geometry::TetraPoint p{tuple[0], tuple[1], tuple[2]};
            const auto m = geometry::in_tetrablock(p, true, eps);
            spectrum_excess = std::max(spectrum_excess, m.witness_norm - 1.0);
        }
    } catch (const TetraError& e) {
        spectrum_ok = false;
        spectrum_note = e.what();
    }
    if (spectrum_ok)
        report.add(residual_condition("joint spectrum in closed tetrablock", std::max(0.0, spectrum_excess), eps,
                                      spectrum_note));
    else {
        Condition c = unevaluated_condition("joint spectrum in closed tetrablock", spectrum_note);
        c.verdict = Verdict::fails;
        report.add(std::move(c));
    }

    double falsifier_excess = 0.0;
    if (options.run_falsifier) {
        const auto cert = spectral_set_falsifier(t, options.falsifier);
        if (cert)
            falsifier_excess = cert->ratio - 1.0;
        Condition c = residual_condition("falsifier silent", cert ? falsifier_excess : 0.0, options.falsifier.margin,
                                         cert ? cert->label : "no violation found (not a proof)");
        if (cert)
            c.verdict = Verdict::fails;
        report.add(std::move(c));
    } else {
        report.add(unevaluated_condition("falsifier silent", "disabled"));
    }

    auto worst = [&](std::initializer_list<std::string_view> names) {
        double r = 0.0;
        bool ok = true;
        for (auto name : names) {
            const Condition& c = report.at(name);
            if (c.residual)
                r = std::max(r, *c.residual);
            ok = ok && c.verdict != Verdict::fails;
        }
        return std::pair{r, ok};
    };

    const auto [r2, ok2] = worst({"V isometry", "joint spectrum in closed tetrablock", "falsifier silent"});
    const auto [r3, ok3] = worst({"V1 = V2^* V", "V2 contraction", "V isometry"});
    const auto [r4, ok4] = worst({"V1 = V2^* V", "spectral radii <= 1", "V isometry"});

    auto combined = [&](std::string name, double r, bool ok, std::string note) {
        Condition c = residual_condition(std::move(name), r, eps, std::move(note));
        c.verdict = ok ? Verdict::holds : Verdict::fails;
        return c;
    };
    report.add(combined("characterization (2)", r2, ok2, "tetrablock contraction with V an isometry"));
    report.add(combined("characterization (3)", r3, ok3, "V1 = V2^* V, V2 contraction, V isometry"));
    report.add(combined("characterization (4)", r4, ok4, "V1 = V2^* V, spectral radii <= 1, V isometry"));
    report.add(combined("tetrablock isometry", r3, ok3, "verdict of characterization (3)"));
    return report;
}

} // namespace tetra
