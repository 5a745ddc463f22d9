#pragma once
//
// The batch pipeline behind the command-line tool: load a triple from a
// JSON file or a gallery name, run every analysis stage in a fixed order,
// and report the outcome as text or JSON.
//

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tetra/analysis.hpp"

namespace tetra::dossier {

struct Check {
    std::string name;
    Verdict verdict = Verdict::not_evaluated;
    std::optional<double> residual;
    double tolerance = 0.0;
    std::string note;

    bool operator==(const Check&) const = default;
};

enum class StageStatus {
    completed,
    skipped,  // preconditions not met (e.g. T is not a partial isometry)
    failed,   // the input does not admit the stage (e.g. no fundamental pair)
    error     // an internal consistency check failed
};

std::string_view to_string(StageStatus s) noexcept;

struct Section {
    std::string stage;
    StageStatus status = StageStatus::completed;
    std::string message;
    std::vector<Check> checks;
    std::map<std::string, double> values;

    bool operator==(const Section&) const = default;
};

struct DossierReport {
    std::string provenance;
    Index dim = 0;
    std::vector<Section> sections;
    std::string verdict;

    bool operator==(const DossierReport&) const = default;

    /// nullptr when the stage is absent.
    const Section* find(std::string_view stage) const;
    bool has_internal_error() const;
};

struct DossierConfig {
    Tolerances tol;
    int levels = 8;   // defect levels of the lift
    int degree = 4;   // verify_lift degree, clipped to the protected degree
    FalsifierConfig falsifier;
    bool run_falsifier = true;

    /// Throws InvalidArgument on nonsensical settings.
    void validate() const;
};

struct StructuredTag {
    std::string name;  // "counterexample" or "pal"
    int truncation = 0;
};

struct TripleInput {
    ComplexMatrix T1;
    ComplexMatrix T2;
    ComplexMatrix T;
    std::string provenance;
    std::optional<StructuredTag> structured;
};

/// Input schema:
///   {"dim": n, "T1": [[[re, im], ...], ...], "T2": ..., "T": ...,
///    "structured": {"name": "counterexample", "N": 8}}   (optional)
/// Matrices are row-major. Throws ParseError with line and column.
TripleInput parse_triple_json(std::string_view text, std::string provenance = "inline");

/// Inverse of parse_triple_json.
std::string triple_to_json(const ComplexMatrix& t1, const ComplexMatrix& t2, const ComplexMatrix& t,
                           const std::optional<StructuredTag>& structured = std::nullopt);

/// "gallery:NAME" or a file path. For gallery names `n` is the truncation
/// of the named examples and the dimension of the random families.
TripleInput load_triple(const std::string& source, int n, std::uint64_t seed, const Tolerances& tol = {});

/// Runs commutation, classification, joint-spectrum geometry, fundamental
/// operators, relations, numerical radius, necessary conditions, sufficient
/// conditions, partial-isometry structure, falsifier, lift, block
/// identities and (for tagged inputs) exact structured checks, in that order.
/// Stage failures are recorded; later stages run when their inputs exist.
DossierReport run_dossier(const TripleInput& input, const DossierConfig& config = {});

std::string to_json(const DossierReport& report);
/// Throws ParseError.
DossierReport report_from_json(std::string_view text);
std::string render_text(const DossierReport& report);

} // namespace tetra::dossier
