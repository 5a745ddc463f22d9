#include "tetra/dossier.hpp"

#include "tetra/gallery.hpp"
#include "tetra/geometry.hpp"
#include "tetra/lifting.hpp"
#include "tetra/structure.hpp"

#include "json.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace tetra::dossier {

using nlohmann::json;

std::string_view to_string(StageStatus s) noexcept
{
    switch (s) {
    case StageStatus::completed: return "completed";
    case StageStatus::skipped: return "skipped";
    case StageStatus::failed: return "failed";
    case StageStatus::error: return "error";
    }
    return "unknown";
}

const Section* DossierReport::find(std::string_view stage) const
{
    for (const auto& s : sections)
        if (s.stage == stage)
            return &s;
    return nullptr;
}

bool DossierReport::has_internal_error() const
{
    return std::any_of(sections.begin(), sections.end(), [](const Section& s) { return s.status == StageStatus::error; });
}

void DossierConfig::validate() const
{
    tol.validate();
    if (levels < 1)
        throw TetraError(ErrorKind::InvalidArgument, "levels must be at least 1");
    if (degree < 0)
        throw TetraError(ErrorKind::InvalidArgument, "degree must be nonnegative");
    if (falsifier.degree < 0 || falsifier.n_polys < 0 || falsifier.margin < 0.0)
        throw TetraError(ErrorKind::InvalidArgument, "falsifier settings must be nonnegative");
}

// Input ---------------------------------------------------------------------------

namespace {

[[noreturn]] void parse_fail(const std::string& what)
{
    throw TetraError(ErrorKind::ParseError, what);
}

std::string locate(std::string_view text, std::size_t offset)
{
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    std::ostringstream out;
    out << "line " << line << ", column " << column << " (offset " << offset << ")";
    return out.str();
}

json parse_json(std::string_view text)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // byte is 1-based and points just past the offending character.
        const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
        std::string detail = e.what();
        if (const auto pos = detail.find("parse error"); pos != std::string::npos)
            detail = detail.substr(pos);
        parse_fail(locate(text, offset) + ": " + detail);
    }
}

ComplexMatrix read_matrix(const json& doc, const char* key, Index n)
{
    if (!doc.contains(key))
        parse_fail(std::string("missing field \"") + key + "\"");
    const json& rows = doc.at(key);
    if (!rows.is_array() || static_cast<Index>(rows.size()) != n)
        parse_fail(std::string("field \"") + key + "\" must be an array of " + std::to_string(n) + " rows");
    ComplexMatrix m(n, n);
    for (Index i = 0; i < n; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != n)
            parse_fail(std::string(key) + "[" + std::to_string(i) + "] must have " + std::to_string(n) + " entries");
        for (Index j = 0; j < n; ++j) {
            const json& entry = row[static_cast<std::size_t>(j)];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
                parse_fail(std::string(key) + "[" + std::to_string(i) + "][" + std::to_string(j) +
                           "] must be [re, im]");
            m(i, j) = Complex(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    return m;
}

json matrix_json(const ComplexMatrix& m)
{
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

TripleInput parse_triple_json(std::string_view text, std::string provenance)
{
    const json doc = parse_json(text);
    if (!doc.is_object())
        parse_fail("top level must be an object");
    if (!doc.contains("dim") || !doc.at("dim").is_number_integer() || doc.at("dim").get<long long>() < 1)
        parse_fail("field \"dim\" must be a positive integer");
    const Index n = doc.at("dim").get<Index>();

    TripleInput input;
    input.T1 = read_matrix(doc, "T1", n);
    input.T2 = read_matrix(doc, "T2", n);
    input.T = read_matrix(doc, "T", n);
    input.provenance = std::move(provenance);
    if (doc.contains("structured")) {
        const json& tag = doc.at("structured");
        if (!tag.is_object() || !tag.contains("name") || !tag.at("name").is_string() || !tag.contains("N") ||
            !tag.at("N").is_number_integer())
            parse_fail("field \"structured\" must be {\"name\": string, \"N\": integer}");
        input.structured = StructuredTag{tag.at("name").get<std::string>(), tag.at("N").get<int>()};
        if (input.structured->name != "counterexample" && input.structured->name != "pal")
            parse_fail("unknown structured example \"" + input.structured->name + "\"");
    }
    return input;
}

std::string triple_to_json(const ComplexMatrix& t1, const ComplexMatrix& t2, const ComplexMatrix& t,
                           const std::optional<StructuredTag>& structured)
{
    json doc;
    doc["dim"] = t.rows();
    doc["T1"] = matrix_json(t1);
    doc["T2"] = matrix_json(t2);
    doc["T"] = matrix_json(t);
    if (structured)
        doc["structured"] = {{"name", structured->name}, {"N", structured->truncation}};
    return doc.dump();
}

TripleInput load_triple(const std::string& source, int n, std::uint64_t seed, const Tolerances& tol)
{
    constexpr std::string_view prefix = "gallery:";
    if (source.rfind(prefix, 0) == 0) {
        const std::string name = source.substr(prefix.size());
        const auto kind = gallery::parse_family(name);
        if (!kind)
            throw TetraError(ErrorKind::InvalidArgument, "unknown gallery entry \"" + name + "\"");
        gallery::GallerySpec spec;
        spec.kind = *kind;
        spec.truncation = n;
        spec.dim = n;
        spec.seed = seed;
        const CommutingTriple t = gallery::random_family(spec, tol);

        TripleInput input{t.T1, t.T2, t.T, {}, std::nullopt};
        std::ostringstream prov;
        prov << source;
        if (*kind == gallery::FamilyKind::counterexample || *kind == gallery::FamilyKind::pal) {
            prov << " N=" << n;
            input.structured = StructuredTag{name, n};
        } else {
            prov << " dim=" << n << " seed=" << seed;
        }
        input.provenance = prov.str();
        return input;
    }

    std::ifstream file(source);
    if (!file)
        throw TetraError(ErrorKind::ParseError, "cannot open \"" + source + "\"");
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_triple_json(buffer.str(), "file:" + source);
}

// Pipeline ------------------------------------------------------------------------------

namespace {

Check to_check(const Condition& c)
{
    return {c.name, c.verdict, c.residual, c.tolerance, c.note};
}

void add_report(Section& s, const ConditionReport& report)
{
    for (const auto& c : report.conditions())
        s.checks.push_back(to_check(c));
}

bool internal_kind(ErrorKind k)
{
    return k == ErrorKind::PairingNotIsometric || k == ErrorKind::LiftNotVerified ||
           k == ErrorKind::EigenSolverFailed || k == ErrorKind::NotIsometric;
}

Section failed_section(std::string stage, const TetraError& e)
{
    Section s;
    s.stage = std::move(stage);
    s.status = internal_kind(e.kind()) ? StageStatus::error : StageStatus::failed;
    s.message = e.what();
    return s;
}

Section skipped_section(std::string stage, std::string why)
{
    Section s;
    s.stage = std::move(stage);
    s.status = StageStatus::skipped;
    s.message = std::move(why);
    return s;
}

Check residual_check(std::string name, double residual, double tolerance, std::string note = {})
{
    return to_check(residual_condition(std::move(name), residual, tolerance, std::move(note)));
}

Section structured_section(const StructuredTag& tag, const ComplexMatrix& t1, const ComplexMatrix& t2,
                           const ComplexMatrix& t, const Tolerances& tol)
{
    using shift::StructuredOperator;
    Section s;
    s.stage = "structured form";
    const int n = tag.truncation;
    gallery::NamedExample ex = tag.name == "pal" ? static_cast<gallery::NamedExample>(gallery::example_pal(n))
                                                 : gallery::example_counterexample(n);
    const int fiber = ex.structured.T.in_fiber();
    const int budget = 2 * n;
    s.message = "exact operators on H^2(C^" + std::to_string(fiber) + "), checked on degrees <= " +
                std::to_string(budget);

    const bool same_shape = t1.rows() == ex.triple.dim();
    const double input_gap =
        same_shape ? std::max({operator_norm(t1 - ex.triple.T1), operator_norm(t2 - ex.triple.T2),
                               operator_norm(t - ex.triple.T)})
                   : std::numeric_limits<double>::infinity();
    if (!same_shape) {
        s.status = StageStatus::failed;
        s.message = "input does not have the shape of the tagged example";
        return s;
    }
    s.checks.push_back(residual_check("input matches tagged compression", input_gap, tol.residual_tol));

    const auto& st = ex.structured;
    auto exact = [&](std::string name, const StructuredOperator& lhs, const StructuredOperator& rhs) {
        const auto check = shift::verify_identity(lhs, rhs, budget);
        s.checks.push_back(residual_check(std::move(name), check.max_residual, 0.0, "exact"));
    };
    exact("T1 T2 = T", st.T1 * st.T2, st.T);
    exact("T2 T1 = T", st.T2 * st.T1, st.T);

    const gallery::StructuredPair pair = gallery::structured_fundamental_pair(st, budget);
    s.checks.push_back(residual_check("D_T idempotent", pair.idempotence_residual, 0.0, "exact"));
    s.checks.push_back(residual_check("defining equations", pair.defining_residual, 0.0, "exact"));
    exact("F1 = expected", pair.F1, ex.expected_F1);
    exact("F2 = expected", pair.F2, ex.expected_F2);
    exact("P1", pair.F1 * pair.F2, pair.F2 * pair.F1);

    const StructuredOperator gap = (pair.F1.adjoint() * pair.F1 - pair.F1 * pair.F1.adjoint()) -
                                   (pair.F2.adjoint() * pair.F2 - pair.F2 * pair.F2.adjoint());
    const auto p2 = shift::verify_identity(gap, StructuredOperator::zero(fiber, fiber), budget);
    Check p2_check = residual_check("P2", shift::compressed_norm(gap, n), 0.0, "norm of the compressed gap");
    p2_check.verdict = p2.holds ? Verdict::holds : Verdict::fails;
    s.checks.push_back(p2_check);
    s.values["P2 residual"] = *p2_check.residual;
    if (tag.name == "pal")
        s.values["norm of J"] = operator_norm(ex.expected_F1_ambient);
    return s;
}

} // namespace

DossierReport run_dossier(const TripleInput& input, const DossierConfig& config)
{
    config.validate();
    const Tolerances& tol = config.tol;
    const double eps = tol.residual_tol;

    DossierReport report;
    report.provenance = input.provenance;
    report.dim = input.T.rows();

    // commutation
    std::optional<CommutingTriple> triple;
    {
        Section s;
        s.stage = "commutation";
        try {
            triple = make_triple(input.T1, input.T2, input.T, tol);
            const char* names[] = {"[T1, T2] = 0", "[T1, T] = 0", "[T2, T] = 0"};
            for (int i = 0; i < 3; ++i)
                s.checks.push_back(residual_check(names[i], triple->commutator_residuals[i], eps));
        } catch (const TetraError& e) {
            s = failed_section("commutation", e);
            if (input.T1.rows() == input.T.rows() && input.T2.rows() == input.T.rows() && input.T.rows() == input.T.cols()) {
                s.checks.push_back(residual_check("[T1, T2] = 0", operator_norm(commutator(input.T1, input.T2)), eps));
                s.checks.push_back(residual_check("[T1, T] = 0", operator_norm(commutator(input.T1, input.T)), eps));
                s.checks.push_back(residual_check("[T2, T] = 0", operator_norm(commutator(input.T2, input.T)), eps));
            }
        }
        report.sections.push_back(std::move(s));
    }

    const std::vector<std::string> later = {"classification", "joint spectrum", "fundamental operators",
                                            "fundamental relations", "numerical radius", "necessary conditions",
                                            "sufficient conditions", "partial-isometry structure", "falsifier",
                                            "lift", "block identities"};
    if (!triple) {
        for (const auto& stage : later)
            report.sections.push_back(skipped_section(stage, "input is not a commuting triple"));
        report.verdict = "not a commuting triple";
        return report;
    }
    const CommutingTriple& t = *triple;

    // classification, including the tetrablock-isometry characterizations
    const OperatorClass cls = classify(t.T, tol);
    {
        Section s;
        s.stage = "classification";
        s.checks.push_back(residual_check("T contraction", std::max(0.0, cls.norm - 1.0), eps, "excess of ||T|| over 1"));
        s.checks.push_back(residual_check("T isometry", cls.isometry_residual, eps));
        s.checks.push_back(residual_check("T co-isometry", cls.coisometry_residual, eps));
        s.checks.push_back(residual_check("T partial isometry", cls.partial_isometry_residual, eps));
        s.checks.push_back(residual_check("T projection", cls.projection_residual, eps));
        s.values["norm T"] = cls.norm;
        s.values["norm T1"] = operator_norm(t.T1);
        s.values["norm T2"] = operator_norm(t.T2);
        IsometryCheckOptions opts;
        opts.falsifier.seed = config.falsifier.seed;
        add_report(s, check_tetrablock_isometry(t, tol, opts));
        report.sections.push_back(std::move(s));
    }

    // joint spectrum geometry
    {
        Section s;
        s.stage = "joint spectrum";
        try {
            const std::array<ComplexMatrix, 3> ops{t.T1, t.T2, t.T};
            const auto eigs = joint_eigenvalues(ops, tol, config.falsifier.seed);
            double worst = 0.0;
            int on_boundary = 0;
            for (const auto& e : eigs) {
                const geometry::TetraPoint p{e[0], e[1], e[2]};
                worst = std::max(worst, geometry::in_tetrablock(p, true, eps).witness_norm);
                on_boundary += geometry::in_distinguished_boundary(p, eps) ? 1 : 0;
            }
            s.checks.push_back(residual_check("joint spectrum in closed tetrablock", std::max(0.0, worst - 1.0), eps,
                                              "excess of the largest minimal witness norm over 1"));
            s.values["eigenvalues"] = static_cast<double>(eigs.size());
            s.values["max witness norm"] = worst;
            s.values["on distinguished boundary"] = on_boundary;
        } catch (const TetraError& e) {
            s = failed_section("joint spectrum", e);
        }
        report.sections.push_back(std::move(s));
    }

    // fundamental operators
    std::optional<FundamentalPair> fp;
    {
        Section s;
        s.stage = "fundamental operators";
        try {
            fp = fundamental_operators(t, tol, false);
            s.checks.push_back(residual_check("extraction off the defect space", fp->off_defect_residual, eps,
                                              "T_i - T_j^* T on and into Ker D_T"));
            s.values["defect dimension"] = static_cast<double>(fp->defect.range.dim());
            s.values["residual of defining equations"] = fp->residual_eq21;
            s.values["residual of fundamental relations"] = fp->residual_fundrel;
            s.values["norm F1"] = fp->F1.size() > 0 ? operator_norm(fp->F1) : 0.0;
            s.values["norm F2"] = fp->F2.size() > 0 ? operator_norm(fp->F2) : 0.0;
        } catch (const TetraError& e) {
            s = failed_section("fundamental operators", e);
        }
        report.sections.push_back(std::move(s));
    }

    const std::string no_pair = "no fundamental pair";
    if (fp) {
        Section rel;
        rel.stage = "fundamental relations";
        add_report(rel, check_fundamental_relations(t, *fp, tol));
        report.sections.push_back(std::move(rel));

        Section rad;
        rad.stage = "numerical radius";
        const RadiusCondition rc = numerical_radius_condition(*fp, tol.grid_points, eps);
        fp->numerical_radius_margin = rc.margin;
        rad.checks.push_back(residual_check("w(F1 + z F2) <= 1 on |z| = 1", std::max(0.0, rc.max_radius - 1.0), eps,
                                            "boundary grid of " + std::to_string(tol.grid_points) + " points"));
        rad.values["max numerical radius"] = rc.max_radius;
        rad.values["margin"] = rc.margin;
        rad.values["argmax phase"] = rc.argmax_phase;
        report.sections.push_back(std::move(rad));

        Section nec;
        nec.stage = "necessary conditions";
        add_report(nec, necessary_conditions(t, *fp, tol));
        report.sections.push_back(std::move(nec));

        Section suf;
        suf.stage = "sufficient conditions";
        add_report(suf, sufficient_conditions(*fp, tol));
        report.sections.push_back(std::move(suf));
    } else {
        for (const char* stage : {"fundamental relations", "numerical radius", "necessary conditions", "sufficient conditions"})
            report.sections.push_back(skipped_section(stage, no_pair));
    }

    // partial-isometry structure
    if (!cls.partial_isometry) {
        report.sections.push_back(skipped_section("partial-isometry structure", "T is not a partial isometry"));
    } else if (!fp) {
        report.sections.push_back(skipped_section("partial-isometry structure", no_pair));
    } else {
        Section s;
        s.stage = "partial-isometry structure";
        try {
            const PartialIsometryAnalysis pa = analyze_partial_isometry_triple(t, *fp, tol);
            add_report(s, pa.report);
            s.values["dim Ker T"] = static_cast<double>(pa.decomposition.ker_T.dim());
            s.values["dim Ran T*"] = static_cast<double>(pa.decomposition.ran_Tstar.dim());
            s.values["isometry residual of [Y; X]"] = pa.decomposition.Z_isometry_residual;
        } catch (const TetraError& e) {
            s = failed_section("partial-isometry structure", e);
        }
        report.sections.push_back(std::move(s));
    }

    // falsifier
    std::optional<ViolationCertificate> certificate;
    if (config.run_falsifier) {
        Section s;
        s.stage = "falsifier";
        certificate = spectral_set_falsifier(t, config.falsifier);
        Check c;
        c.name = "no spectral-set violation found";
        c.tolerance = config.falsifier.margin;
        c.residual = certificate ? certificate->ratio - 1.0 : 0.0;
        c.verdict = certificate ? Verdict::fails : Verdict::holds;
        c.note = certificate ? certificate->label : "silence is not a proof";
        s.checks.push_back(c);
        s.values["degree"] = config.falsifier.degree;
        s.values["polynomials"] = config.falsifier.n_polys;
        s.values["samples"] = static_cast<double>(config.falsifier.n_samples);
        if (certificate) {
            s.values["norm ratio"] = certificate->ratio;
            s.message = "certificate: " + certificate->label;
        }
        report.sections.push_back(std::move(s));
    } else {
        report.sections.push_back(skipped_section("falsifier", "disabled"));
    }

    // lift
    std::optional<LiftResult> lift;
    int verified_degree = -1;
    const double product_gap = operator_norm(t.T - t.T1 * t.T2);
    if (product_gap > eps) {
        Section s = skipped_section("lift", "T != T1 T2");
        s.values["norm of T - T1 T2"] = product_gap;
        report.sections.push_back(std::move(s));
    } else {
        Section s;
        s.stage = "lift";
        try {
            lift = tetra_product_lift(t.T1, t.T2, config.levels, tol);
            const int top = std::min(config.degree, lift->protected_degree);
            for (int d = 0; d <= top; ++d) {
                const double r = verify_lift(t, *lift, d);
                s.checks.push_back(residual_check("verify_lift degree " + std::to_string(d), r, eps));
                if (r <= eps && verified_degree == d - 1)
                    verified_degree = d;
            }
            add_report(s, lift->isometry_report);
            for (const auto& d : lift->diagnostics)
                s.values[d.name] = d.value;
            s.values["levels"] = lift->levels;
            s.values["protected degree"] = lift->protected_degree;
            if (config.degree > lift->protected_degree)
                s.message = "degree clipped to the protected degree " + std::to_string(lift->protected_degree);
        } catch (const TetraError& e) {
            s = failed_section("lift", e);
            lift.reset();
        }
        report.sections.push_back(std::move(s));
    }

    // block identities
    if (!lift) {
        report.sections.push_back(skipped_section("block identities", "no lift"));
    } else if (!fp) {
        report.sections.push_back(skipped_section("block identities", no_pair));
    } else {
        Section s;
        s.stage = "block identities";
        try {
            add_report(s, lift_block_identities(t, *lift, *fp, tol).report);
        } catch (const TetraError& e) {
            s = failed_section("block identities", e);
        }
        report.sections.push_back(std::move(s));
    }

    if (input.structured)
        report.sections.push_back(structured_section(*input.structured, t.T1, t.T2, t.T, tol));

    // narrative
    std::vector<std::string> parts;
    if (certificate)
        parts.push_back("not a tetrablock contraction (falsifier: " + certificate->label + ")");
    if (!fp) {
        parts.push_back("no fundamental pair");
    }
    const Section* suf = report.find("sufficient conditions");
    const bool p1 = fp && suf->checks.at(0).verdict == Verdict::holds;
    const bool p2 = fp && suf->checks.at(1).verdict == Verdict::holds;
    auto conditions_phrase = [&](bool lifted) {
        if (!fp)
            return std::string();
        if (p1 && p2)
            return std::string(lifted ? "(P1), (P2) hold" : "P1, P2 hold");
        if (lifted)
            return std::string(!p1 && !p2 ? "(P1), (P2) violated" : (!p1 ? "(P1) violated" : "(P2) violated"));
        return std::string(!p1 && !p2 ? "P1, P2 fail" : (!p1 ? "P1 fails" : "P2 fails"));
    };
    if (lift && verified_degree >= 0) {
        std::string s = "lift verified at degree " + std::to_string(verified_degree);
        if (fp)
            s += "; " + conditions_phrase(true);
        parts.push_back(s);
    } else if (lift) {
        parts.push_back("lift constructed but not verified");
    } else if (product_gap > eps) {
        std::string s = conditions_phrase(false);
        s += (s.empty() ? "" : "; ") + std::string("no lift constructed (T ≠ T₁T₂); lift existence undetermined");
        parts.push_back(s);
    } else {
        parts.push_back("lift construction failed");
    }
    std::string verdict;
    for (std::size_t i = 0; i < parts.size(); ++i)
        verdict += (i ? "; " : "") + parts[i];
    report.verdict = verdict;
    return report;
}

// Serialization -----------------------------------------------------------------------------

namespace {

Verdict verdict_from(const std::string& s)
{
    if (s == "holds")
        return Verdict::holds;
    if (s == "fails")
        return Verdict::fails;
    if (s == "not evaluated")
        return Verdict::not_evaluated;
    parse_fail("unknown verdict \"" + s + "\"");
}

StageStatus status_from(const std::string& s)
{
    for (auto st : {StageStatus::completed, StageStatus::skipped, StageStatus::failed, StageStatus::error})
        if (to_string(st) == s)
            return st;
    parse_fail("unknown stage status \"" + s + "\"");
}

} // namespace

std::string to_json(const DossierReport& report)
{
    json doc;
    doc["provenance"] = report.provenance;
    doc["dim"] = report.dim;
    doc["verdict"] = report.verdict;
    json sections = json::array();
    for (const auto& s : report.sections) {
        json js;
        js["stage"] = s.stage;
        js["status"] = std::string(to_string(s.status));
        js["message"] = s.message;
        json checks = json::array();
        for (const auto& c : s.checks) {
            json jc;
            jc["name"] = c.name;
            jc["verdict"] = std::string(to_string(c.verdict));
            jc["residual"] = c.residual ? json(*c.residual) : json(nullptr);
            jc["tolerance"] = c.tolerance;
            jc["note"] = c.note;
            checks.push_back(std::move(jc));
        }
        js["checks"] = std::move(checks);
        js["values"] = s.values;
        sections.push_back(std::move(js));
    }
    doc["sections"] = std::move(sections);
    return doc.dump(2);
}

DossierReport report_from_json(std::string_view text)
{
    const json doc = parse_json(text);
    try {
        DossierReport report;
        report.provenance = doc.at("provenance").get<std::string>();
        report.dim = doc.at("dim").get<Index>();
        report.verdict = doc.at("verdict").get<std::string>();
        for (const auto& js : doc.at("sections")) {
            Section s;
            s.stage = js.at("stage").get<std::string>();
            s.status = status_from(js.at("status").get<std::string>());
            s.message = js.at("message").get<std::string>();
            for (const auto& jc : js.at("checks")) {
                Check c;
                c.name = jc.at("name").get<std::string>();
                c.verdict = verdict_from(jc.at("verdict").get<std::string>());
                if (!jc.at("residual").is_null())
                    c.residual = jc.at("residual").get<double>();
                c.tolerance = jc.at("tolerance").get<double>();
                c.note = jc.at("note").get<std::string>();
                s.checks.push_back(std::move(c));
            }
            s.values = js.at("values").get<std::map<std::string, double>>();
            report.sections.push_back(std::move(s));
        }
        return report;
    } catch (const json::exception& e) {
        parse_fail(std::string("malformed dossier: ") + e.what());
    }
}

std::string render_text(const DossierReport& report)
{
    std::ostringstream out;
    out << "dossier  " << report.provenance << "  (dim " << report.dim << ")\n";
    out << "verdict  " << report.verdict << "\n";
    for (const auto& s : report.sections) {
        out << "\n[" << s.stage << "] " << to_string(s.status);
        if (!s.message.empty())
            out << ": " << s.message;
        out << "\n";
        for (const auto& c : s.checks) {
            out << "  " << std::left << std::setw(14) << to_string(c.verdict) << c.name;
            if (c.residual)
                out << "  residual " << std::setprecision(3) << std::scientific << *c.residual << " (tol "
                    << c.tolerance << ")" << std::defaultfloat;
            if (!c.note.empty())
                out << "  -- " << c.note;
            out << "\n";
        }
        for (const auto& [name, value] : s.values)
            out << "  " << name << " = " << std::setprecision(6) << value << "\n";
    }
    return out.str();
}

} // namespace tetra::dossier
