#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sarceval/label.hpp"

namespace sarceval {

/// Counts indexed (gold, predicted) in Label order [NonSarcastic, Sarcastic].
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    /// Row-major: {NN, NS, SN, SS} where the first letter is the gold label.
    ConfusionMatrix(std::uint64_t nn, std::uint64_t ns, std::uint64_t sn, std::uint64_t ss) noexcept
        : counts_{{{nn, ns}, {sn, ss}}} {}

    std::uint64_t at(Label gold, Label pred) const noexcept { return counts_[index_of(gold)][index_of(pred)]; }
    void add(Label gold, Label pred, std::uint64_t n = 1) noexcept { counts_[index_of(gold)][index_of(pred)] += n; }

    std::uint64_t support(Label gold) const noexcept;   // row sum
    std::uint64_t predicted(Label pred) const noexcept; // column sum
    std::uint64_t trace() const noexcept;
    std::uint64_t total() const noexcept;

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    std::array<std::array<std::uint64_t, kNumLabels>, kNumLabels> counts_{};
};

/// Throws DataError on length mismatch or empty input.
ConfusionMatrix confusion(std::span<const Label> gold, std::span<const Label> pred);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;
    // Zero-division markers: the metric was set to 0 because its denominator was 0.
    bool precision_undefined = false;
    bool recall_undefined = false;
};

struct AverageMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct ClassificationReport {
    std::array<ClassMetrics, kNumLabels> per_class{};
    AverageMetrics micro;
    AverageMetrics macro;
    AverageMetrics weighted;
    std::uint64_t total_support = 0;

    const ClassMetrics& of(Label l) const noexcept { return per_class[index_of(l)]; }
    bool has_zero_division() const noexcept;
};

/// Per-class P/R/F1, micro (pooled), macro (arithmetic mean of per-class
/// values) and support-weighted averages. Throws DataError for an empty matrix.
ClassificationReport report(const ConfusionMatrix& m);

/// Decimal rounding with ties away from zero, applied to the shortest
/// round-trip decimal form of x, so round_half_up(0.495, 2) == 0.50.
double round_half_up(double x, int places);

nlohmann::ordered_json to_json(const ConfusionMatrix& m);
nlohmann::ordered_json to_json(const ClassificationReport& r);

/// Fixed-width table: per-class rows, then Micro avg, Macro avg, Weighted avg.
std::string format_report_table(const ClassificationReport& r, int places = 2);

// ---------------------------------------------------------------------------
// Reconstruction of integer confusion matrices from a rounded report.

struct RoundedTriple {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

/// Published (rounded) report values. Supports are exact; any metric may be absent.
struct RoundedReport {
    std::array<std::uint64_t, kNumLabels> support{};
    std::array<RoundedTriple, kNumLabels> per_class{};
    RoundedTriple micro;
    RoundedTriple macro;
    RoundedTriple weighted;
};

/// Rounds every value of `r` to `places` decimals (half-up).
RoundedReport round_report(const ClassificationReport& r, int places = 2);

struct ReconstructOptions {
    /// Maximum allowed |recomputed - published| per given value.
    double tolerance = 0.005;
    /// 0 keeps every candidate.
    std::size_t max_results = 0;
};

struct Candidate {
    ConfusionMatrix matrix;
    /// L2 distance between unrounded recomputed values and the published ones.
    double residual = 0.0;
};

class InconsistentReport : public DataError {
public:
    InconsistentReport() : DataError("inconsistent report: no integer confusion matrix matches within tolerance") {}
};

/// Exhaustive search over matrices with the given row sums. Results are
/// ordered by residual, then ascending NN, then ascending SS.
/// Throws InconsistentReport when nothing matches.
std::vector<Candidate> reconstruct(const RoundedReport& r, const ReconstructOptions& opts = {});

}  // namespace sarceval
