#include "doctest.h"
#include "test_support.hpp"

#include "tetra/dossier.hpp"
#include "tetra/gallery.hpp"

using namespace tetra;
using namespace tetra::dossier;

namespace {

DossierConfig quick_config()
{
    DossierConfig c;
    c.falsifier = FalsifierConfig{2, 10, 1000, 0, 0.05, true};
    return c;
}

const std::vector<std::string> pipeline_order{
    "commutation",         "classification",         "joint spectrum", "fundamental operators",
    "fundamental relations", "numerical radius",     "necessary conditions", "sufficient conditions",
    "partial-isometry structure", "falsifier",       "lift",           "block identities"};

} // namespace

TEST_CASE("counterexample dossier concludes lift verified with P2 violated")
{
    const auto input = load_triple("gallery:counterexample", 8, 0);
    REQUIRE(input.structured.has_value());
    const auto report = run_dossier(input, quick_config());
    CHECK(report.verdict == "lift verified at degree 4; (P2) violated");
    CHECK_FALSE(report.has_internal_error());
    REQUIRE(report.sections.size() >= pipeline_order.size());
    for (std::size_t i = 0; i < pipeline_order.size(); ++i)
        CHECK(report.sections[i].stage == pipeline_order[i]);
    const Section* structured = report.find("structured form");
    REQUIRE(structured != nullptr);
    CHECK(structured->status == StageStatus::completed);
}

TEST_CASE("pal dossier leaves lift existence undetermined")
{
    const auto report = run_dossier(load_triple("gallery:pal", 4, 0), quick_config());
    CHECK(report.verdict == "P2 fails; no lift constructed (T ≠ T₁T₂); lift existence undetermined");
    const Section* lift = report.find("lift");
    REQUIRE(lift != nullptr);
    CHECK(lift->status == StageStatus::skipped);
    const Section* blocks = report.find("block identities");
    REQUIRE(blocks != nullptr);
    CHECK(blocks->status == StageStatus::skipped);
}

TEST_CASE("non-partial-isometry input skips the structure stage")
{
    const auto text = triple_to_json(ComplexMatrix::Constant(1, 1, 0.5), ComplexMatrix::Constant(1, 1, 0.5),
                                     ComplexMatrix::Constant(1, 1, 0.25));
    const auto report = run_dossier(parse_triple_json(text), quick_config());
    const Section* s = report.find("partial-isometry structure");
    REQUIRE(s != nullptr);
    CHECK(s->status == StageStatus::skipped);
    CHECK(report.find("structured form") == nullptr);
    CHECK(report.verdict == "lift verified at degree 4; (P1), (P2) hold");
}

TEST_CASE("a triple without a fundamental pair records the failure and continues")
{
    ComplexMatrix t1 = ComplexMatrix::Zero(2, 2);
    t1(0, 0) = 0.5;
    t1(1, 1) = 0.2;
    TripleInput input{t1, ComplexMatrix::Zero(2, 2), ComplexMatrix::Identity(2, 2), "inline", std::nullopt};
    const auto report = run_dossier(input, quick_config());
    const Section* f = report.find("fundamental operators");
    REQUIRE(f != nullptr);
    CHECK(f->status == StageStatus::failed);
    CHECK(report.find("falsifier")->status == StageStatus::completed);
    CHECK(report.verdict.find("no fundamental pair") != std::string::npos);
}

TEST_CASE("JSON round trip of a dossier")
{
    const auto report = run_dossier(load_triple("gallery:counterexample", 4, 0), quick_config());
    const auto back = report_from_json(to_json(report));
    CHECK(back == report);
    CHECK_THROWS_WITH_AS(report_from_json("{\"verdict\": 3}"), doctest::Contains("ParseError"), TetraError);
}

TEST_CASE("triple JSON round trip")
{
    const auto t = gallery::random_family({gallery::FamilyKind::product_random, 8, 3, 4});
    const auto input = parse_triple_json(triple_to_json(t.T1, t.T2, t.T, StructuredTag{"counterexample", 3}));
    CHECK(input.T1 == t.T1);
    CHECK(input.T2 == t.T2);
    CHECK(input.T == t.T);
    REQUIRE(input.structured.has_value());
    CHECK(input.structured->name == "counterexample");
    CHECK(input.structured->truncation == 3);
}

TEST_CASE("parse errors report line and column")
{
    const std::string text = "{\n  \"dim\": 1,\n  \"T1\": [[[0.5, 0]],\n  \"T2\": [[[0, 0]]],\n  \"T\": [[[0, 0]]]\n}\n";
    try {
        parse_triple_json(text);
        FAIL("expected a parse error");
    } catch (const TetraError& e) {
        CHECK(e.kind() == ErrorKind::ParseError);
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    CHECK_THROWS_WITH_AS(parse_triple_json("{\"dim\": 2, \"T1\": [[[1, 0]]], \"T2\": [[[1, 0]]], \"T\": [[[1, 0]]]}"),
                         doctest::Contains("ParseError"), TetraError);
    CHECK_THROWS_WITH_AS(parse_triple_json("{\"dim\": 1, \"T1\": [[[1]]], \"T2\": [[[1, 0]]], \"T\": [[[1, 0]]]}"),
                         doctest::Contains("ParseError"), TetraError);
    CHECK_THROWS_WITH_AS(load_triple("gallery:unknown", 4, 0), doctest::Contains("InvalidArgument"), TetraError);
}

TEST_CASE("config validation")
{
    DossierConfig c;
    CHECK_NOTHROW(c.validate());
    c.levels = 0;
    CHECK_THROWS_AS(c.validate(), TetraError);
}

TEST_CASE("text rendering lists every stage")
{
    const auto report = run_dossier(load_triple("gallery:counterexample", 4, 0), quick_config());
    const std::string text = render_text(report);
    CHECK(text.find("verdict  lift verified") != std::string::npos);
    for (const auto& stage : pipeline_order)
        CHECK(text.find("[" + stage + "]") != std::string::npos);
}
