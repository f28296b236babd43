#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "sarceval/label.hpp"

namespace sarceval {

struct Unparseable {
    std::string raw;
    friend bool operator==(const Unparseable&, const Unparseable&) = default;
};

using ParseOutcome = std::variant<Label, Unparseable>;

enum class FallbackPolicy { Strict, DefaultMajority, Exclude };

std::string_view to_string(FallbackPolicy p) noexcept;
/// Accepts `strict`, `default-majority`, `exclude`.
std::optional<FallbackPolicy> fallback_policy_from_string(std::string_view s) noexcept;

/// Lowercases (ASCII only) and trims whitespace plus `.,:;!"'` at both ends.
std::string normalize_completion(std::string_view raw);

/// Negative forms (`non-sarcastic`, `non sarcastic`, `not sarcastic`) are
/// matched before `sarcastic`; anything else is Unparseable. Never throws.
ParseOutcome parse_label(std::string_view raw);

/// Marker for a prediction dropped from scoring under FallbackPolicy::Exclude.
struct Excluded {
    friend bool operator==(const Excluded&, const Excluded&) = default;
};

using FinalPrediction = std::variant<Label, Excluded>;

/// Raised under FallbackPolicy::Strict for an unparseable completion.
class StrictParseError : public Error {
public:
    StrictParseError(std::string comment_id, std::string raw);
    const std::string& comment_id() const noexcept { return comment_id_; }
    const std::string& raw() const noexcept { return raw_; }

private:
    std::string comment_id_;
    std::string raw_;
};

FinalPrediction apply_fallback(const ParseOutcome& o, FallbackPolicy p, std::string_view comment_id = {});

}  // namespace sarceval
