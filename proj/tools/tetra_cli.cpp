// tetra: command-line front end for the tetrablock toolkit.

#include "tetra/dossier.hpp"
#include "tetra/gallery.hpp"
#include "tetra/geometry.hpp"
#include "tetra/lifting.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

using namespace tetra;

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_internal = 3;

struct Options {
    std::string source;
    int n = 8;
    std::uint64_t seed = 0;
    double tol = 1e-8;
    int degree = 4;
    int levels = 8;
    int polys = 200;
    std::size_t samples = 20000;
    int poly_degree = 3;
    std::string json_path;
    bool no_falsifier = false;
    std::vector<double> point;
    bool closed = false;
};

Tolerances tolerances(const Options& o)
{
    Tolerances tol;
    tol.residual_tol = o.tol;
    tol.validate();
    return tol;
}

FalsifierConfig falsifier_config(const Options& o)
{
    FalsifierConfig c;
    c.degree = o.poly_degree;
    c.n_polys = o.polys;
    c.n_samples = o.samples;
    c.seed = o.seed;
    return c;
}

int run_dossier_command(const Options& o)
{
    dossier::DossierConfig config;
    config.tol = tolerances(o);
    config.levels = o.levels;
    config.degree = o.degree;
    config.falsifier = falsifier_config(o);
    config.run_falsifier = !o.no_falsifier;

    const auto input = dossier::load_triple(o.source, o.n, o.seed, config.tol);
    const auto report = dossier::run_dossier(input, config);
    std::cout << dossier::render_text(report);
    if (!o.json_path.empty()) {
        const std::string text = dossier::to_json(report);
        if (o.json_path == "-") {
            std::cout << text << "\n";
        } else {
            std::ofstream out(o.json_path);
            if (!out)
                throw TetraError(ErrorKind::InvalidArgument, "cannot write \"" + o.json_path + "\"");
            out << text << "\n";
        }
    }
    return report.has_internal_error() ? exit_internal : exit_ok;
}

int run_falsify_command(const Options& o)
{
    const Tolerances tol = tolerances(o);
    const auto input = dossier::load_triple(o.source, o.n, o.seed, tol);
    const CommutingTriple t = make_triple(input.T1, input.T2, input.T, tol);
    const auto cert = spectral_set_falsifier(t, falsifier_config(o));
    if (!cert) {
        std::cout << "no violation found (degree " << o.poly_degree << ", " << o.polys << " polynomials, " << o.samples
                  << " samples); this certifies nothing\n";
        return exit_ok;
    }
    std::cout << "violation: " << cert->label << "\n"
              << "  ||p(T)|| / sup estimate = " << cert->ratio << "\n";
    for (std::size_t i = 0; i < cert->monomials.size(); ++i) {
        const auto& m = cert->monomials[i];
        std::cout << "  " << cert->coefficients[i] << " * x1^" << m.a << " x2^" << m.b << " x3^" << m.c << "\n";
    }
    return exit_ok;
}

int run_lift_command(const Options& o)
{
    const Tolerances tol = tolerances(o);
    const auto input = dossier::load_triple(o.source, o.n, o.seed, tol);
    const CommutingTriple t = make_triple(input.T1, input.T2, input.T, tol);
    const double gap = operator_norm(t.T - t.T1 * t.T2);
    if (gap > tol.residual_tol)
        throw TetraError(ErrorKind::InvalidArgument, "lift needs T = T1 T2 (gap " + std::to_string(gap) + ")");

    const LiftResult lift = tetra_product_lift(t.T1, t.T2, o.levels, tol);
    std::cout << "lift space dimension " << lift.V.rows() << " (" << o.levels << " levels of dimension "
              << lift.level_dim << "), protected degree " << lift.protected_degree << "\n";
    const int top = std::min(o.degree, lift.protected_degree);
    bool ok = true;
    for (int d = 0; d <= top; ++d) {
        const double r = verify_lift(t, lift, d);
        ok = ok && r <= tol.residual_tol;
        std::cout << "  verify_lift degree " << d << ": " << r << "\n";
    }
    for (const auto& d : lift.diagnostics)
        std::cout << "  " << d.name << " = " << d.value << "\n";
    for (const auto& c : lift.isometry_report.conditions())
        std::cout << "  " << to_string(c.verdict) << "  " << c.name << (c.residual ? "  residual " + std::to_string(*c.residual) : "")
                  << "\n";
    return ok ? exit_ok : exit_internal;
}

int run_geometry_command(const Options& o)
{
    if (o.point.size() != 6)
        throw TetraError(ErrorKind::InvalidArgument, "geometry point needs six numbers");
    const geometry::TetraPoint p{{o.point[0], o.point[1]}, {o.point[2], o.point[3]}, {o.point[4], o.point[5]}};
    const auto m = geometry::in_tetrablock(p, o.closed, 1e-9);
    std::cout << (o.closed ? "closed" : "open") << " tetrablock: " << (m.member ? "member" : "not a member") << "\n"
              << "  minimal witness norm " << m.witness_norm << "\n"
              << "  witness [[" << m.witness(0, 0) << ", " << m.witness(0, 1) << "], [" << m.witness(1, 0) << ", "
              << m.witness(1, 1) << "]]\n"
              << "  distinguished boundary: " << (geometry::in_distinguished_boundary(p, 1e-9) ? "yes" : "no") << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Tetrablock contraction toolkit"};
    app.require_subcommand(1);
    Options o;

    auto add_source = [&](CLI::App* cmd) {
        cmd->add_option("source", o.source, "JSON triple file or gallery:NAME")->required();
        cmd->add_option("--n", o.n, "truncation (named examples) or dimension (random families)");
        cmd->add_option("--seed", o.seed, "random seed");
        cmd->add_option("--tol", o.tol, "residual tolerance");
    };
    auto add_falsifier = [&](CLI::App* cmd) {
        cmd->add_option("--polys", o.polys, "random polynomials");
        cmd->add_option("--samples", o.samples, "Monte Carlo samples per region");
        cmd->add_option("--poly-degree", o.poly_degree, "total degree of the test polynomials");
    };

    auto* dossier_cmd = app.add_subcommand("dossier", "run the full analysis pipeline");
    add_source(dossier_cmd);
    add_falsifier(dossier_cmd);
    dossier_cmd->add_option("--degree", o.degree, "lift verification degree");
    dossier_cmd->add_option("--levels", o.levels, "defect levels of the lift");
    dossier_cmd->add_option("--json", o.json_path, "also write the dossier as JSON ('-' for stdout)");
    dossier_cmd->add_flag("--no-falsifier", o.no_falsifier, "skip the spectral-set falsifier");

    auto* falsify_cmd = app.add_subcommand("falsify", "search for a spectral-set violation");
    add_source(falsify_cmd);
    add_falsifier(falsify_cmd);
    falsify_cmd->add_option("--degree", o.poly_degree, "total degree of the test polynomials");

    auto* lift_cmd = app.add_subcommand("lift", "build and verify a tetrablock-isometric lift of (T1, T2, T1 T2)");
    add_source(lift_cmd);
    lift_cmd->add_option("--levels", o.levels, "defect levels");
    lift_cmd->add_option("--degree", o.degree, "verification degree");

    auto* geometry_cmd = app.add_subcommand("geometry", "scalar tetrablock tests");
    auto* point_cmd = geometry_cmd->add_subcommand("point", "membership of (x1, x2, x3)");
    geometry_cmd->require_subcommand(1);
    point_cmd->add_option("coords", o.point, "x1r x1i x2r x2i x3r x3i")->required()->expected(6);
    point_cmd->add_flag("--closed", o.closed, "test the closed tetrablock");

    auto* gallery_cmd = app.add_subcommand("gallery", "named examples and random families");
    auto* list_cmd = gallery_cmd->add_subcommand("list", "list gallery names");
    gallery_cmd->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }

    try {
        if (*dossier_cmd)
            return run_dossier_command(o);
        if (*falsify_cmd)
            return run_falsify_command(o);
        if (*lift_cmd)
            return run_lift_command(o);
        if (*point_cmd)
            return run_geometry_command(o);
        if (*list_cmd) {
            for (const auto& name : gallery::gallery_names())
                std::cout << name << "\n";
            return exit_ok;
        }
    } catch (const TetraError& e) {
        std::cerr << "tetra: " << e.what() << "\n";
        switch (e.kind()) {
        case ErrorKind::ParseError:
        case ErrorKind::InvalidArgument:
        case ErrorKind::DimensionMismatch:
        case ErrorKind::NotCommuting:
        case ErrorKind::NotAContraction:
        case ErrorKind::GenerationFailed:
            return exit_input;
        default:
            return exit_internal;
        }
    } catch (const std::exception& e) {
        std::cerr << "tetra: " << e.what() << "\n";
        return exit_internal;
    }
    return exit_ok;
}
