#include "tetra/structure.hpp"

#include <Eigen/Eigenvalues>

#include <sstream>

namespace tetra {

ComplexMatrix PartialIsometryDecomposition::change_of_basis() const
{
    ComplexMatrix w(ran_Tstar.ambient_dim, ran_Tstar.dim() + ker_T.dim());
    w << ran_Tstar.basis, ker_T.basis;
    return w;
}

PartialIsometryDecomposition decompose_partial_isometry(const ComplexMatrix& t, const Tolerances& tol)
{
    if (t.rows() != t.cols())
        throw TetraError(ErrorKind::DimensionMismatch, "T must be square");
    const OperatorClass cls = classify(t, tol);
    if (!cls.partial_isometry) {
        std::ostringstream msg;
        msg << "||T T^* T - T|| = " << cls.partial_isometry_residual;
        throw TetraError(ErrorKind::NotPartialIsometry, msg.str());
    }

    const Index n = t.rows();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(t.adjoint() * t);
    if (eig.info() != Eigen::Success)
        throw TetraError(ErrorKind::EigenSolverFailed, "eigendecomposition of T^*T failed");

    std::vector<Index> kernel_cols;
    std::vector<Index> range_cols;
    for (Index k = n - 1; k >= 0; --k)
        (eig.eigenvalues()(k) <= tol.rank_tol ? kernel_cols : range_cols).push_back(k);

    auto gather = [&](const std::vector<Index>& cols) {
        Subspace s;
        s.ambient_dim = n;
        s.basis.resize(n, static_cast<Index>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j)
            s.basis.col(static_cast<Index>(j)) = eig.eigenvectors().col(cols[j]);
        return s;
    };

    PartialIsometryDecomposition out;
    out.ran_Tstar = gather(range_cols);
    out.ker_T = gather(kernel_cols);
    const ComplexMatrix& r = out.ran_Tstar.basis;
    const ComplexMatrix& k = out.ker_T.basis;
    out.Y = r.adjoint() * t * r;
    out.X = k.adjoint() * t * r;
    out.second_column_residual = k.cols() > 0 ? operator_norm(t * k) : 0.0;
    if (out.second_column_residual > tol.residual_tol) {
        std::ostringstream msg;
        msg << "T does not vanish on its kernel basis (residual " << out.second_column_residual << ")";
        throw TetraError(ErrorKind::NotPartialIsometry, msg.str());
    }
    ComplexMatrix stacked(n, r.cols());
    stacked << out.Y, out.X;
    out.Z_isometry_residual =
        r.cols() > 0 ? operator_norm(stacked.adjoint() * stacked - ComplexMatrix::Identity(r.cols(), r.cols())) : 0.0;
    return out;
}

PartialIsometryAnalysis analyze_partial_isometry_triple(const CommutingTriple& t, const Tolerances& tol)
{
    // The partial-isometry test comes first so that a non-partial-isometry
    // reports as such even when it also lacks a fundamental pair.
    decompose_partial_isometry(t.T, tol);
    return analyze_partial_isometry_triple(t, fundamental_operators(t, tol, false), tol);
}

PartialIsometryAnalysis analyze_partial_isometry_triple(const CommutingTriple& t, const FundamentalPair& fp,
                                                        const Tolerances& tol)
{
    const double eps = tol.residual_tol;
    PartialIsometryAnalysis out;
    out.decomposition = decompose_partial_isometry(t.T, tol);
    const auto& dec = out.decomposition;
    const ComplexMatrix& r = dec.ran_Tstar.basis;
    const ComplexMatrix& k = dec.ker_T.basis;

    const std::array<const ComplexMatrix*, 2> ops{&t.T1, &t.T2};
    for (std::size_t i = 0; i < 2; ++i) {
        const ComplexMatrix& ti = *ops[i];
        out.blocks[i] = {r.adjoint() * ti * r, r.adjoint() * ti * k, k.adjoint() * ti * r, k.adjoint() * ti * k};
        out.restriction.invariance_residuals[i] = out.blocks[i].B.size() > 0 ? operator_norm(out.blocks[i].B) : 0.0;
    }
    out.restriction.D1 = out.blocks[0].D;
    out.restriction.D2 = out.blocks[1].D;

    auto& rep = out.report;
    rep.add(residual_condition("Ker T invariant under T1", out.restriction.invariance_residuals[0], eps));
    rep.add(residual_condition("Ker T invariant under T2", out.restriction.invariance_residuals[1], eps));

    // For a partial isometry D_T is the projection onto Ker T, so the
    // fundamental operators should be D_i on Ker T and zero elsewhere.
    const ComplexMatrix f1 = fp.F1_ambient();
    const ComplexMatrix f2 = fp.F2_ambient();
    rep.add(residual_condition("F1 = 0 + D1", operator_norm(f1 - k * out.restriction.D1 * k.adjoint()), eps));
    rep.add(residual_condition("F2 = 0 + D2", operator_norm(f2 - k * out.restriction.D2 * k.adjoint()), eps));

    auto safe_norm = [](const ComplexMatrix& m) { return m.size() > 0 ? operator_norm(m) : 0.0; };
    const ComplexMatrix w = dec.change_of_basis();
    for (std::size_t i = 0; i < 2; ++i) {
        const std::size_t j = 1 - i;
        const std::string tag = std::to_string(i + 1);
        const auto& bi = out.blocks[i];
        const auto& bj = out.blocks[j];
        const ComplexMatrix a_rebuilt = bj.A.adjoint() * dec.Y + bj.C.adjoint() * dec.X;
        const ComplexMatrix c_rebuilt = bj.D.adjoint() * dec.X;
        rep.add(residual_condition("B" + tag + " = 0", safe_norm(bi.B), eps));
        rep.add(residual_condition("A" + tag + " = A" + std::to_string(j + 1) + "^* Y + C" + std::to_string(j + 1) + "^* X",
                                   safe_norm(bi.A - a_rebuilt), eps));
        rep.add(residual_condition("C" + tag + " = D" + std::to_string(j + 1) + "^* X", safe_norm(bi.C - c_rebuilt), eps));

        ComplexMatrix rebuilt = ComplexMatrix::Zero(t.dim(), t.dim());
        const Index m = r.cols();
        const Index q = k.cols();
        rebuilt.topLeftCorner(m, m) = a_rebuilt;
        rebuilt.bottomLeftCorner(q, m) = c_rebuilt;
        rebuilt.bottomRightCorner(q, q) = bi.D;
        out.reconstruction_residual =
            std::max(out.reconstruction_residual, operator_norm(w * rebuilt * w.adjoint() - *ops[i]));
    }
    rep.add(residual_condition("reconstruction", out.reconstruction_residual, eps));

    const ConditionReport on_f = sufficient_conditions(fp, tol);
    const ConditionReport on_d = sufficient_conditions(out.restriction.D1, out.restriction.D2, tol);
    rep.add(on_f.at("P1"));
    rep.add(on_f.at("P2"));
    Condition p1d = on_d.at("P1");
    p1d.name = "P1 on (D1, D2)";
    Condition p2d = on_d.at("P2");
    p2d.name = "P2 on (D1, D2)";
    p2d.note = "D1^*D1 - D1D1^* = D2^*D2 - D2D2^*";
    rep.add(p1d);
    rep.add(p2d);

    Condition agree = residual_condition("P2 verdicts agree",
                                         std::abs(*on_f.at("P2").residual - *p2d.residual), eps,
                                         "P2 on (F1, F2) and on (D1, D2) give the same verdict");
    agree.verdict = on_f.at("P2").verdict == p2d.verdict ? Verdict::holds : Verdict::fails;
    rep.add(std::move(agree));
    return out;
}

} // namespace tetra
