#include "tetra/lifting.hpp"

#include <Eigen/SVD>

#include <sstream>

namespace tetra {

namespace {

void require_levels(int levels)
{
    if (levels < 1)
        throw TetraError(ErrorKind::InvalidArgument, "a lift needs at least one defect level");
}

void require_square_pair(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw TetraError(ErrorKind::DimensionMismatch, "lift inputs must be square of equal size");
}

double norm_or_zero(const ComplexMatrix& m)
{
    return m.size() > 0 ? operator_norm(m) : 0.0;
}

// Level-k block offset in H (+) L^N.
Index level_offset(Index n, Index level_dim, int k)
{
    return n + static_cast<Index>(k - 1) * level_dim;
}

ComplexMatrix power(const ComplexMatrix& a, int k)
{
    ComplexMatrix out = ComplexMatrix::Identity(a.rows(), a.cols());
    for (int i = 0; i < k; ++i)
        out = out * a;
    return out;
}

} // namespace

IsometricLift sz_nagy_lift(const ComplexMatrix& t, int levels, const Tolerances& tol)
{
    require_levels(levels);
    if (t.rows() != t.cols())
        throw TetraError(ErrorKind::DimensionMismatch, "T must be square");
    const DefectData dd = defect_data(t, tol);
    const Index n = t.rows();
    const Index r = dd.range.dim();
    const Index k = n + levels * r;

    IsometricLift lift;
    lift.levels = levels;
    lift.level_dim = r;
    lift.protected_degree = levels - 1;
    lift.V = ComplexMatrix::Zero(k, k);
    lift.V.topLeftCorner(n, n) = t;
    lift.V.block(n, 0, r, n) = dd.coordinates();
    for (int lvl = 1; lvl < levels; ++lvl)
        lift.V.block(level_offset(n, r, lvl + 1), level_offset(n, r, lvl), r, r).setIdentity();
    lift.embed = ComplexMatrix::Identity(k, n);
    return lift;
}

double verify_power_lift(const ComplexMatrix& t, const IsometricLift& lift, int degree)
{
    if (degree < 0)
        throw TetraError(ErrorKind::InvalidArgument, "degree must be nonnegative");
    if (degree > lift.protected_degree)
        throw TetraError(ErrorKind::DegreeExceedsProtection,
                         "degree " + std::to_string(degree) + " exceeds protected degree " +
                             std::to_string(lift.protected_degree));
    double worst = 0.0;
    ComplexMatrix orbit = lift.embed;
    ComplexMatrix tk = ComplexMatrix::Identity(t.rows(), t.cols());
    for (int k = 0; k <= degree; ++k) {
        worst = std::max(worst, norm_or_zero(lift.embed.adjoint() * orbit - tk));
        orbit = lift.V * orbit;
        tk = t * tk;
    }
    return worst;
}

double LiftResult::diagnostic(std::string_view name) const
{
    for (const auto& d : diagnostics)
        if (d.name == name)
            return d.value;
    throw TetraError(ErrorKind::InvalidArgument, "no lift diagnostic named '" + std::string(name) + "'");
}

namespace {

// Unitary G on E (+) E with G a = b column by column, where a^* a = b^* b.
ComplexMatrix pairing_unitary(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerances& tol)
{
    const Index size = a.rows();
    if (size == 0)
        return ComplexMatrix(0, 0);

    Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double cut = tol.rank_tol * std::max(1.0, sigma.size() > 0 ? sigma(0) : 0.0);
    Index rank = 0;
    while (rank < sigma.size() && sigma(rank) > cut)
        ++rank;
    if (rank == 0)
        return ComplexMatrix::Identity(size, size);

    const ComplexMatrix qa = svd.matrixU().leftCols(rank);
    const Eigen::VectorXcd inv = sigma.head(rank).cwiseInverse().cast<Complex>();
    ComplexMatrix qb = b * svd.matrixV().leftCols(rank) * inv.asDiagonal();
    // Polar factor removes the O(eps / sigma_min) drift from orthonormality.
    Eigen::JacobiSVD<ComplexMatrix> polar(qb, Eigen::ComputeThinU | Eigen::ComputeThinV);
    qb = polar.matrixU() * polar.matrixV().adjoint();

    Subspace domain;
    domain.ambient_dim = size;
    domain.basis = qa;
    Tolerances loose = tol;
    loose.residual_tol = std::max(tol.residual_tol, 1e-6);
    Subspace codomain;
    codomain.ambient_dim = size;
    codomain.basis = qb;
    return extend_isometry_to_unitary(domain, codomain, qb * qa.adjoint(), loose);
}

struct MonomialWords {
    std::vector<ComplexMatrix> blocks;  // V1^a V2^b embed for a + b <= length
};

MonomialWords monomial_words(const LiftResult& lift, int length)
{
    MonomialWords out;
    if (length < 0)
        return out;
    std::vector<ComplexMatrix> v2_powers{lift.embed};
    for (int b = 1; b <= length; ++b)
        v2_powers.push_back(lift.V2 * v2_powers.back());
    for (int b = 0; b <= length; ++b) {
        ComplexMatrix x = v2_powers[static_cast<std::size_t>(b)];
        for (int a = 0; a + b <= length; ++a) {
            out.blocks.push_back(x);
            x = lift.V1 * x;
        }
    }
    return out;
}

} // namespace

ComplexMatrix protected_basis(const LiftResult& lift, int word_length, double rank_tol)
{
    const auto words = monomial_words(lift, std::max(word_length, 0));
    Index cols = 0;
    for (const auto& w : words.blocks)
        cols += w.cols();
    ComplexMatrix spanning(lift.embed.rows(), cols);
    Index at = 0;
    for (const auto& w : words.blocks) {
        spanning.middleCols(at, w.cols()) = w;
        at += w.cols();
    }
    return Subspace::span_of(spanning, rank_tol).basis;
}

LiftResult ando_lift(const ComplexMatrix& t1, const ComplexMatrix& t2, int levels, const Tolerances& tol)
{
    require_levels(levels);
    require_square_pair(t1, t2);
    const double comm = operator_norm(commutator(t1, t2));
    if (comm > tol.residual_tol) {
        std::ostringstream msg;
        msg << "pair (T1, T2) has commutator norm " << comm;
        throw TetraError(ErrorKind::NotCommuting, msg.str());
    }

    const DefectData d1 = defect_data(t1, tol);
    const DefectData d2 = defect_data(t2, tol);
    const ComplexMatrix c1 = d1.coordinates();  // r1 x n
    const ComplexMatrix c2 = d2.coordinates();  // r2 x n
    const Index n = t1.rows();
    const Index r1 = c1.rows();
    const Index r2 = c2.rows();
    const Index m = r1 + r2;
    const Index k = n + levels * m;

    // Norm identity behind the pairing: |D1 T2 h|^2 + |D2 h|^2 = |D2 T1 h|^2 + |D1 h|^2.
    ComplexMatrix a = ComplexMatrix::Zero(2 * m, n);
    ComplexMatrix b = ComplexMatrix::Zero(2 * m, n);
    a.topRows(r1) = c1 * t2;
    a.bottomRows(r2) = c2;
    b.middleRows(r1, r2) = c2 * t1;
    b.middleRows(m, r1) = c1;
    const double identity_residual = norm_or_zero(a.adjoint() * a - b.adjoint() * b);
    if (identity_residual > 10.0 * tol.residual_tol) {
        std::ostringstream msg;
        msg << "pairing norm identity fails with residual " << identity_residual;
        throw TetraError(ErrorKind::PairingNotIsometric, msg.str());
    }
    const ComplexMatrix g = pairing_unitary(a, b, tol);

    auto naive = [&](const ComplexMatrix& ti, const ComplexMatrix& ci, Index slot) {
        ComplexMatrix w = ComplexMatrix::Zero(k, k);
        w.topLeftCorner(n, n) = ti;
        w.block(n + slot, 0, ci.rows(), n) = ci;
        for (int lvl = 1; lvl < levels; ++lvl)
            w.block(level_offset(n, m, lvl + 1), level_offset(n, m, lvl), m, m).setIdentity();
        return w;
    };
    const ComplexMatrix w1 = naive(t1, c1, 0);
    const ComplexMatrix w2 = naive(t2, c2, r1);

    ComplexMatrix g_tilde = ComplexMatrix::Identity(k, k);
    for (int lvl = 1; lvl + 1 <= levels; lvl += 2)
        g_tilde.block(level_offset(n, m, lvl), level_offset(n, m, lvl), 2 * m, 2 * m) = g;

    LiftResult lift;
    lift.levels = levels;
    lift.level_dim = m;
    lift.protected_degree = levels / 2;
    lift.pairing = g;
    lift.V1 = g_tilde * w1;
    lift.V2 = w2 * g_tilde.adjoint();
    lift.V = lift.V1 * lift.V2;
    lift.embed = ComplexMatrix::Identity(k, n);

    auto& diag = lift.diagnostics;
    diag.push_back({"pairing_identity_residual", identity_residual});
    diag.push_back({"pairing_map_residual", norm_or_zero(g * a - b)});
    diag.push_back({"pairing_unitary_residual",
                    norm_or_zero(g.adjoint() * g - ComplexMatrix::Identity(g.rows(), g.cols()))});
    // Complements in E (+) E always have equal dimension here, so no zero
    // slots are ever added before the extension.
    diag.push_back({"padding_slots", 0.0});
    diag.push_back({"lift_property_residual",
                    std::max(operator_norm(lift.V1.adjoint() * lift.embed - lift.embed * t1.adjoint()),
                             operator_norm(lift.V2.adjoint() * lift.embed - lift.embed * t2.adjoint()))});

    const int p = lift.protected_degree;
    double comm_residual = 0.0;
    if (p >= 2)
        for (const auto& x : monomial_words(lift, p - 2).blocks)
            comm_residual = std::max(comm_residual, operator_norm(lift.V1 * (lift.V2 * x) - lift.V2 * (lift.V1 * x)));
    double iso1 = 0.0;
    double iso2 = 0.0;
    if (p >= 1)
        for (const auto& x : monomial_words(lift, p - 1).blocks) {
            iso1 = std::max(iso1, operator_norm(lift.V1.adjoint() * (lift.V1 * x) - x));
            iso2 = std::max(iso2, operator_norm(lift.V2.adjoint() * (lift.V2 * x) - x));
        }
    diag.push_back({"commutation_residual", comm_residual});
    diag.push_back({"isometry_residual_V1", iso1});
    diag.push_back({"isometry_residual_V2", iso2});
    return lift;
}

LiftResult tetra_product_lift(const ComplexMatrix& t1, const ComplexMatrix& t2, int levels, const Tolerances& tol)
{
    LiftResult lift = ando_lift(t1, t2, levels, tol);
    const double eps = tol.residual_tol;
    const ComplexMatrix basis = protected_basis(lift, std::max(lift.protected_degree - 2, 0), tol.rank_tol);

    auto& rep = lift.isometry_report;
    const ComplexMatrix v_basis = lift.V * basis;
    rep.add(residual_condition("V1 = V2^* V", operator_norm(lift.V1 * basis - lift.V2.adjoint() * v_basis), eps,
                               "on the protected range"));
    rep.add(residual_condition("V2 contraction", std::max(0.0, operator_norm(lift.V2 * basis) - 1.0), eps,
                               "on the protected range"));
    rep.add(residual_condition("V isometry",
                               operator_norm(lift.V.adjoint() * v_basis - basis),
                               eps, "on the protected range"));
    rep.add(residual_condition(
        "spectral radii <= 1",
        std::max({0.0, spectral_radius(lift.V1) - 1.0, spectral_radius(lift.V2) - 1.0}), eps,
        "truncated V1, V2"));
    rep.add(unevaluated_condition("characterization (2)",
                                  "needs the full lift; truncation leaves the protected range"));

    auto combined = [&](std::string name, std::initializer_list<std::string_view> parts, std::string note) {
        double r = 0.0;
        bool ok = true;
        for (auto part : parts) {
            r = std::max(r, *rep.at(part).residual);
            ok = ok && rep.at(part).holds();
        }
        Condition c = residual_condition(std::move(name), r, eps, std::move(note));
        c.verdict = ok ? Verdict::holds : Verdict::fails;
        return c;
    };
    rep.add(combined("characterization (3)", {"V1 = V2^* V", "V2 contraction", "V isometry"},
                     "V1 = V2^* V, V2 contraction, V isometry"));
    rep.add(combined("characterization (4)", {"V1 = V2^* V", "spectral radii <= 1", "V isometry"},
                     "V1 = V2^* V, spectral radii <= 1, V isometry"));
    rep.add(combined("tetrablock isometry", {"V1 = V2^* V", "V2 contraction", "V isometry"},
                     "verdict of characterization (3)"));
    return lift;
}

double verify_lift(const CommutingTriple& t, const LiftResult& lift, int degree)
{
    if (degree < 0)
        throw TetraError(ErrorKind::InvalidArgument, "degree must be nonnegative");
    if (degree > lift.protected_degree)
        throw TetraError(ErrorKind::DegreeExceedsProtection,
                         "degree " + std::to_string(degree) + " exceeds protected degree " +
                             std::to_string(lift.protected_degree));
    if (lift.embed.cols() != t.dim())
        throw TetraError(ErrorKind::DimensionMismatch, "lift and triple act on different spaces");

    double worst = 0.0;
    for (const auto& mono : monomials_up_to(degree)) {
        ComplexMatrix x = lift.embed;
        for (int i = 0; i < mono.c; ++i)
            x = lift.V * x;
        for (int i = 0; i < mono.b; ++i)
            x = lift.V2 * x;
        for (int i = 0; i < mono.a; ++i)
            x = lift.V1 * x;
        const ComplexMatrix q = power(t.T1, mono.a) * power(t.T2, mono.b) * power(t.T, mono.c);
        worst = std::max(worst, norm_or_zero(lift.embed.adjoint() * x - q));
    }
    return worst;
}

BlockIdentityReport lift_block_identities(const CommutingTriple& t, const LiftResult& lift, const Tolerances& tol)
{
    return lift_block_identities(t, lift, fundamental_operators(t, tol, false), tol);
}

BlockIdentityReport lift_block_identities(const CommutingTriple& t, const LiftResult& lift,
                                          const FundamentalPair& fp, const Tolerances& tol)
{
    double verified = 0.0;
    try {
        verified = verify_lift(t, lift, 2);
    } catch (const TetraError& e) {
        if (e.kind() != ErrorKind::DegreeExceedsProtection)
            throw;
        throw TetraError(ErrorKind::LiftNotVerified, "lift cannot be checked at degree 2: " + std::string(e.what()));
    }
    if (verified > tol.residual_tol) {
        std::ostringstream msg;
        msg << "lift fails verification at degree 2 (residual " << verified << ")";
        throw TetraError(ErrorKind::LiftNotVerified, msg.str());
    }

    const double eps = tol.residual_tol;
    BlockIdentityReport out;
    auto& blk = out.blocks;
    Subspace h;
    h.ambient_dim = lift.embed.rows();
    h.basis = lift.embed;
    blk.complement = orthogonal_complement(h).basis;
    const ComplexMatrix& q = blk.complement;
    const ComplexMatrix& e = lift.embed;

    blk.C1 = q.adjoint() * lift.V1 * e;
    blk.C2 = q.adjoint() * lift.V2 * e;
    blk.C = q.adjoint() * lift.V * e;
    blk.S1 = q.adjoint() * lift.V1 * q;
    blk.S2 = q.adjoint() * lift.V2 * q;
    blk.S = q.adjoint() * lift.V * q;

    const ComplexMatrix& range = fp.defect.range.basis;
    const Eigen::VectorXcd inv = fp.defect.singular.cwiseInverse().cast<Complex>();
    blk.Lambda = blk.C * range * inv.asDiagonal();
    const Index r = range.cols();

    auto& rep = out.report;
    rep.add(residual_condition("Lambda isometric",
                               norm_or_zero(blk.Lambda.adjoint() * blk.Lambda - ComplexMatrix::Identity(r, r)), eps));
    rep.add(residual_condition("Lambda D_T = C", norm_or_zero(blk.Lambda * fp.defect.coordinates() - blk.C), eps));

    // Identities with domain K - H are tested on the protected part of it.
    const ComplexMatrix protected_range = protected_basis(lift, std::max(lift.protected_degree - 2, 0), tol.rank_tol);
    const ComplexMatrix off_h = q.adjoint() * protected_range;
    const ComplexMatrix r_off = Subspace::span_of(off_h, tol.rank_tol).basis;  // complement coordinates
    const ComplexMatrix s_restricted = blk.S * r_off;

    rep.add(residual_condition("T1 - T2^*T = C2^*C", norm_or_zero(t.T1 - t.T2.adjoint() * t.T - blk.C2.adjoint() * blk.C), eps));
    rep.add(residual_condition("C2^*S = 0", norm_or_zero(blk.C2.adjoint() * s_restricted), eps, "on the protected range"));
    rep.add(residual_condition("T2 - T1^*T = C1^*C", norm_or_zero(t.T2 - t.T1.adjoint() * t.T - blk.C1.adjoint() * blk.C), eps));
    rep.add(residual_condition("C1^*S = 0", norm_or_zero(blk.C1.adjoint() * s_restricted), eps, "on the protected range"));
    rep.add(residual_condition("C1 T2 + S1 C2 = C2 T1 + S2 C1",
                               norm_or_zero(blk.C1 * t.T2 + blk.S1 * blk.C2 - blk.C2 * t.T1 - blk.S2 * blk.C1), eps));
    rep.add(residual_condition("F1 = Lambda^* S1 Lambda", norm_or_zero(fp.F1 - blk.Lambda.adjoint() * blk.S1 * blk.Lambda), eps));
    rep.add(residual_condition("F2 = Lambda^* S2 Lambda", norm_or_zero(fp.F2 - blk.Lambda.adjoint() * blk.S2 * blk.Lambda), eps));
    return out;
}

} // namespace tetra
