#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sarceval/label.hpp"

namespace sarceval {

struct LabeledComment {
    std::string id;
    std::string text;
    std::optional<Label> gold;

    friend bool operator==(const LabeledComment&, const LabeledComment&) = default;
};

/// An ordered, immutable-after-load comment collection. `labeled` is true iff
/// every comment carries a gold label; mixed states are rejected on load.
struct Dataset {
    LanguagePair language_pair = LanguagePair::TamilEnglish;
    std::vector<LabeledComment> comments;
    std::string source_path;
    bool labeled = false;

    std::size_t size() const noexcept { return comments.size(); }
    bool empty() const noexcept { return comments.empty(); }

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

// TSV field escaping: tab, newline, carriage return and backslash.
std::string escape_field(std::string_view raw);
/// Throws DataError on a dangling or unknown escape.
std::string unescape_field(std::string_view escaped);

bool is_valid_utf8(std::string_view s) noexcept;

/// Parses the `id<TAB>text[<TAB>label]` format. Errors name the 1-based line number.
Dataset parse_dataset(std::istream& in, LanguagePair lp, std::string source_path = {});
Dataset load_dataset(const std::filesystem::path& path, LanguagePair lp);

/// Inverse of parse_dataset. Writes the label column iff the dataset is labeled.
void write_dataset(std::ostream& out, const Dataset& d);
void save_dataset(const std::filesystem::path& path, const Dataset& d);

struct ValidationSummary {
    std::size_t total = 0;
    std::map<Label, std::size_t> per_label;  // always holds both labels
    bool labeled = false;
    /// minority / majority; 0 when unlabeled or a class is absent.
    double imbalance_ratio = 0.0;
    std::vector<std::string> duplicate_ids;
    std::vector<std::string> empty_text_ids;
    std::optional<std::size_t> expected_count;
    bool count_mismatch = false;

    /// True when any problem was detected (duplicates, empty text, count mismatch).
    bool flagged() const noexcept {
        return count_mismatch || !duplicate_ids.empty() || !empty_text_ids.empty();
    }

    friend bool operator==(const ValidationSummary&, const ValidationSummary&) = default;
};

ValidationSummary validate_dataset(const Dataset& d, std::optional<std::size_t> expected_count = {});

void print_summary(std::ostream& out, const ValidationSummary& s);

/// Deterministic order-preserving subset of n comments. Labeled datasets are
/// stratified: each label receives its largest-remainder share of n.
Dataset sample(const Dataset& d, std::size_t n, std::uint64_t seed);

}  // namespace sarceval
