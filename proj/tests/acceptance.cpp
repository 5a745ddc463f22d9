// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "tetra/dossier.hpp"
#include "tetra/gallery.hpp"
#include "tetra/geometry.hpp"
#include "tetra/lifting.hpp"
#include "tetra/structure.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace tetra;
using shift::StructuredOperator;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [violated: " << what << "]";
        }
    }
};

int failures = 0;

void run(const char* id, const char* title, double time_limit, const std::function<void(Outcome&)>& body)
{
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail << " [exception: " << e.what() << "]";
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (time_limit > 0.0)
        out.require(seconds < time_limit, "runtime under " + std::to_string(time_limit) + " s");
    std::printf("%s %s %s:%s (%.2f s)\n", out.pass ? "PASS" : "FAIL", id, title, out.detail.str().c_str(), seconds);
    std::fflush(stdout);
    if (!out.pass)
        ++failures;
}

double norm(const ComplexMatrix& a)
{
    return a.size() == 0 ? 0.0 : operator_norm(a);
}

ComplexMatrix scalar(Complex z)
{
    return ComplexMatrix::Constant(1, 1, z);
}

// Dense log grid over a12 = r, zoomed twice around the best point.
double grid_min_norm(const geometry::TetraPoint& p)
{
    auto norm_at = [&](double r) {
        geometry::Matrix2c a;
        a << p.x1, r, (p.x1 * p.x2 - p.x3) / r, p.x2;
        Eigen::JacobiSVD<geometry::Matrix2c> svd(a);
        return svd.singularValues()(0);
    };
    double lo = -4.0, hi = 4.0, best = 1e300, best_log = 0.0;
    for (int zoom = 0; zoom < 3; ++zoom) {
        for (int k = 0; k <= 2000; ++k) {
            const double e = lo + (hi - lo) * k / 2000.0;
            const double v = norm_at(std::pow(10.0, e));
            if (v < best) {
                best = v;
                best_log = e;
            }
        }
        const double step = (hi - lo) / 2000.0;
        lo = best_log - 2.0 * step;
        hi = best_log + 2.0 * step;
    }
    return best;
}

void counterexample(Outcome& out)
{
    const int n = 8;
    const auto ex = gallery::example_counterexample(n);
    const int budget = 4 * n;
    const auto pair = gallery::structured_fundamental_pair(ex.structured, budget);
    const auto f1 = shift::verify_identity(pair.F1, ex.expected_F1, budget);
    const auto f2 = shift::verify_identity(pair.F2, ex.expected_F2, budget);
    out.require(f1.holds && f1.max_residual == 0.0 && shift::compressed_norm(pair.F1, budget) == 0.0,
                "F1 = 0 exactly");
    out.require(f2.holds && f2.max_residual == 0.0, "F2 = 0 + S exactly");
    out.require(pair.defining_residual == 0.0, "defining equations exact");

    const auto& F1 = pair.F1;
    const auto& F2 = pair.F2;
    const double p1 = shift::compressed_norm(F1 * F2 - F2 * F1, budget);
    const auto gap = (F1.adjoint() * F1 - F1 * F1.adjoint()) - (F2.adjoint() * F2 - F2 * F2.adjoint());
    const double p2 = shift::compressed_norm(gap, budget);
    const auto s = StructuredOperator::shift();
    const double defect_of_shift = shift::compressed_norm(StructuredOperator::identity() - s * s.adjoint(), budget);
    out.require(p1 == 0.0, "P1 residual 0");
    out.require(std::abs(p2 - defect_of_shift) < 1e-14 && std::abs(p2 - 1.0) < 1e-14, "P2 residual = ||I - SS*|| = 1");

    const auto lift = tetra_product_lift(ex.triple.T1, ex.triple.T2, 8);
    const double r = verify_lift(ex.triple, lift, 4);
    out.require(r <= 1e-8, "verify_lift degree 4 <= 1e-8");
    out.detail << " F=(0,S) exact, P1=" << p1 << ", P2=" << p2 << ", verify_lift(4)=" << r;
}

void pal(Outcome& out)
{
    const int n = 8;
    const auto ex = gallery::example_pal(n);
    const auto& t = ex.triple;
    const auto fp = fundamental_operators(t, {}, false);
    const ComplexMatrix& p = ex.protected_projector;
    const double f1 = norm(p * (fp.F1_ambient() - ex.expected_F1_ambient) * p);
    const double f2 = norm(p * fp.F2_ambient() * p);
    out.require(f1 <= 1e-10 && f2 <= 1e-10, "(F1, F2) = (J, 0) on the protected range");
    const double j = shift::compressed_norm(ex.J, n);
    out.require(std::abs(j - 0.25) <= 1e-12, "||J|| = 0.25");

    const auto a = analyze_partial_isometry_triple(t, fp);
    const ComplexMatrix k = a.decomposition.ker_T.basis;
    const double d1 = norm(p * (k * a.restriction.D1 * k.adjoint() - ex.expected_D1_ambient) * p);
    const double d2 = norm(a.restriction.D2);
    out.require(d1 <= 1e-10 && d2 <= 1e-10, "(D1, D2) = (J, 0)");

    const ComplexMatrix jj = ex.expected_F1_ambient;
    const double expected_p2 = norm(jj.adjoint() * jj - jj * jj.adjoint());
    const auto suf = sufficient_conditions(fp);
    const double p2 = *suf.at("P2").residual;
    out.require(!suf.holds("P2") && expected_p2 > 0.0 && std::abs(p2 - expected_p2) < 1e-10,
                "P2 fails with residual ||J*J - JJ*||");

    dossier::DossierConfig cfg;
    cfg.falsifier = FalsifierConfig{2, 20, 2000, 0, 0.05, true};
    const auto report = dossier::run_dossier(dossier::load_triple("gallery:pal", n, 0), cfg);
    out.require(report.verdict.find("lift existence undetermined") != std::string::npos,
                "dossier leaves lift existence undetermined");
    out.detail << " |F-(J,0)|=" << std::max(f1, f2) << ", ||J||=" << j << ", P2=" << p2 << ", verdict \""
               << report.verdict << "\"";
}

void fundamental_relations(Outcome& out)
{
    int count = 0;
    double worst21 = 0.0, worst22 = 0.0, worst_derived = 0.0, worst_w = 0.0;
    for (std::uint64_t seed = 0; seed < 55; ++seed) {
        const int dim = 2 + static_cast<int>(seed % 11);
        const auto t = gallery::random_family({gallery::FamilyKind::product_random, 8, dim, seed});
        Tolerances tol;
        tol.grid_points = 360;
        const auto fp = fundamental_operators(t, tol);
        const auto rel = check_fundamental_relations(t, fp, tol);
        worst21 = std::max(worst21, fp.residual_eq21);
        worst22 = std::max({worst22, *rel.at("fundamental relation 1").residual, *rel.at("fundamental relation 2").residual});
        worst_derived = std::max(worst_derived, *rel.at("derived identity").residual);
        worst_w = std::max(worst_w, 1.0 - fp.numerical_radius_margin);
        ++count;
    }
    out.require(count >= 50, "at least 50 triples");
    out.require(worst21 <= 1e-8, "defining equations <= 1e-8");
    out.require(worst22 <= 1e-8, "corrected relations <= 1e-8");
    out.require(worst_derived <= 1e-7, "derived identity <= 1e-7");
    out.require(worst_w <= 1.0 + 1e-6, "max w(F1 + z F2) <= 1 + 1e-6");
    out.detail << " " << count << " triples, defining " << worst21 << ", relations " << worst22 << ", derived "
               << worst_derived << ", max w " << worst_w;
}

void isometry_equivalence(Outcome& out)
{
    int unitary = 0, perturbed = 0, disagreements = 0, isometries = 0;
    double worst_boundary = 0.0;
    auto verdicts_agree = [&](const CommutingTriple& t) {
        const auto r = check_tetrablock_isometry(t);
        const bool c2 = r.holds("characterization (2)");
        const bool c3 = r.holds("characterization (3)");
        const bool c4 = r.holds("characterization (4)");
        if (c2 != c3 || c3 != c4)
            ++disagreements;
        return c3;
    };
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const int dim = 2 + static_cast<int>(seed % 5);
        const auto t = gallery::random_family({gallery::FamilyKind::tetra_unitary_random, 8, dim, seed});
        if (verdicts_agree(t))
            ++isometries;
        ++unitary;
        const std::array<ComplexMatrix, 3> ops{t.T1, t.T2, t.T};
        for (const auto& ev : joint_eigenvalues(ops)) {
            const geometry::TetraPoint p{ev[0], ev[1], ev[2]};
            worst_boundary = std::max({worst_boundary, std::abs(p.x1 - std::conj(p.x2) * p.x3),
                                       std::abs(std::abs(p.x3) - 1.0), std::max(0.0, std::abs(p.x2) - 1.0)});
        }
        // two kinds of perturbation: a uniform contraction and a distorted first coordinate
        const double r = 0.5 + 0.45 * static_cast<double>(seed % 10) / 10.0;
        if (verdicts_agree(make_triple(r * t.T1, r * t.T2, r * t.T)))
            ++isometries;
        if (verdicts_agree(make_triple(0.8 * t.T1, t.T2, t.T)))
            ++isometries;
        perturbed += 2;
    }
    out.require(unitary >= 50 && perturbed >= 50, "at least 50 + 50 triples");
    out.require(disagreements == 0, "characterizations (2), (3), (4) agree");
    out.require(isometries == unitary, "exactly the unitary family is isometric");
    out.require(worst_boundary <= 1e-8, "joint eigenvalues on the distinguished boundary");
    out.detail << " " << unitary << " unitary + " << perturbed << " perturbed, disagreements " << disagreements
               << ", isometric " << isometries << ", boundary residual " << worst_boundary;
}

void necessity(Outcome& out)
{
    std::vector<CommutingTriple> battery;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        battery.push_back(gallery::random_family({gallery::FamilyKind::product_random, 8, 2 + static_cast<int>(seed % 7), seed + 500}));
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        battery.push_back(gallery::random_family({gallery::FamilyKind::partial_isometry_random, 8, 2 + static_cast<int>(seed % 6), seed + 500}));
    for (int n : {4, 6, 8})
        battery.push_back(gallery::example_counterexample(n).triple);

    int lifted = 0, with_kernel = 0;
    double worst_nec = 0.0, worst_blocks = 0.0;
    for (const auto& t : battery) {
        if (norm(t.T - t.T1 * t.T2) > 1e-12)
            continue;
        const auto lift = tetra_product_lift(t.T1, t.T2, 8);
        if (verify_lift(t, lift, 2) > 1e-8)
            continue;
        ++lifted;
        const auto fp = fundamental_operators(t, {}, false);
        if (fp.defect.kernel.dim() > 0)
            ++with_kernel;
        const auto nec = necessary_conditions(t, fp);
        worst_nec = std::max({worst_nec, *nec.at("necessary (2)").residual, *nec.at("necessary (3)").residual});
        const auto blocks = lift_block_identities(t, lift, fp);
        for (const char* name : {"T1 - T2^*T = C2^*C", "C2^*S = 0", "T2 - T1^*T = C1^*C", "C1^*S = 0",
                                 "C1 T2 + S1 C2 = C2 T1 + S2 C1", "F1 = Lambda^* S1 Lambda", "F2 = Lambda^* S2 Lambda"})
            worst_blocks = std::max(worst_blocks, *blocks.report.at(name).residual);
    }
    out.require(lifted >= 30, "at least 30 lifted triples");
    out.require(worst_nec <= 1e-7, "necessary conditions <= 1e-7");
    out.require(worst_blocks <= 1e-7, "block identities <= 1e-7");
    out.detail << " " << lifted << " lifted triples (" << with_kernel << " with nonzero Ker D_T), necessary "
               << worst_nec << ", blocks " << worst_blocks;
}

void corollary(Outcome& out)
{
    int extracted = 0, disagreements = 0, p2_fails = 0;
    double worst_p1 = 0.0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto t = gallery::random_family({gallery::FamilyKind::partial_isometry_random, 8, 2 + static_cast<int>(seed % 7), seed});
        FundamentalPair fp;
        try {
            fp = fundamental_operators(t, {}, false);
        } catch (const TetraError& e) {
            if (e.kind() != ErrorKind::NoFundamentalPair)
                throw;
            continue;
        }
        ++extracted;
        const auto a = analyze_partial_isometry_triple(t, fp);
        worst_p1 = std::max(worst_p1, *a.report.at("P1").residual);
        if (a.report.holds("P2") != a.report.holds("P2 on (D1, D2)"))
            ++disagreements;
        if (!a.report.holds("P2"))
            ++p2_fails;
    }
    out.require(extracted >= 30, "at least 30 triples with a fundamental pair");
    out.require(worst_p1 <= 1e-8, "P1 <= 1e-8");
    out.require(disagreements == 0, "P2 verdicts agree");
    out.detail << " " << extracted << " triples, P1 " << worst_p1 << ", P2 disagreements " << disagreements
               << " (P2 fails on " << p2_fails << ")";
}

void falsifier(Outcome& out)
{
    const FalsifierConfig cfg{3, 200, 20000, 0, 0.05, true};
    const auto far = spectral_set_falsifier(make_triple(scalar(2.0), scalar(0.0), scalar(0.0)), cfg);
    const Complex u = std::polar(1.0, 0.4);
    const auto big_det = spectral_set_falsifier(make_triple(scalar(0.0), scalar(0.0), scalar(1.5 * u)), cfg);
    out.require(far.has_value(), "certificate for (2, 0, 0)");
    out.require(big_det.has_value(), "certificate for (0, 0, 1.5u)");
    int silent = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto t = gallery::random_family({gallery::FamilyKind::product_random, 8, 2 + static_cast<int>(seed % 5), seed + 1000});
        FalsifierConfig c = cfg;
        c.seed = seed;
        if (!spectral_set_falsifier(t, c))
            ++silent;
    }
    out.require(silent == 20, "silent on 20 product triples");
    out.detail << " (2,0,0) ratio " << (far ? far->ratio : 0.0) << ", (0,0,1.5u) ratio "
               << (big_det ? big_det->ratio : 0.0) << ", silent on " << silent << "/20 product triples";
}

void geometry_oracle(Outcome& out)
{
    int interior = 0, boundary = 0;
    for (const auto& p : geometry::sample_tetrablock(1000, 0))
        if (geometry::in_tetrablock(p, false).member)
            ++interior;
    for (const auto& p : geometry::sample_distinguished_boundary(1000, 0))
        if (geometry::in_distinguished_boundary(p, 1e-9) && geometry::in_tetrablock(p, true).member)
            ++boundary;
    const geometry::TetraPoint p{0.5, 0.5, 1.0};
    const double found = geometry::in_tetrablock(p, true).witness_norm;
    const double grid = grid_min_norm(p);
    out.require(interior == 1000, "1000 interior samples are open members");
    out.require(boundary == 1000, "1000 boundary samples pass");
    out.require(std::abs(found - 1.0) <= 1e-4 && std::abs(found - grid) <= 1e-4, "witness minimum 1 at (0.5, 0.5, 1)");
    out.detail << " interior " << interior << "/1000, boundary " << boundary << "/1000, witness " << found
               << " vs grid " << grid;
}

} // namespace

int main()
{
    run("AC1", "counterexample reproduction", 10.0, counterexample);
    run("AC2", "gallery example pal", 10.0, pal);
    run("AC3", "fundamental-relation suite", 60.0, fundamental_relations);
    run("AC4", "isometry-characterization equivalence", 0.0, isometry_equivalence);
    run("AC5", "necessity property", 0.0, necessity);
    run("AC6", "partial-isometry corollary", 0.0, corollary);
    run("AC7", "falsifier soundness", 120.0, falsifier);
    run("AC8", "geometry oracle", 0.0, geometry_oracle);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
