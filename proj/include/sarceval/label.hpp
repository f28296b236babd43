#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sarceval {

/// Gold or predicted class. Enumerator order is the fixed matrix index order.
enum class Label : int { NonSarcastic = 0, Sarcastic = 1 };

inline constexpr std::size_t kNumLabels = 2;
inline constexpr std::array<Label, kNumLabels> kAllLabels{Label::NonSarcastic, Label::Sarcastic};

constexpr std::size_t index_of(Label l) noexcept { return static_cast<std::size_t>(l); }

/// Canonical spelling used in corpus files and reports: `Sarcastic` / `Non-sarcastic`.
std::string_view to_string(Label l) noexcept;

/// Strict inverse of to_string (case-sensitive). Lenient parsing of model output lives in parse.hpp.
std::optional<Label> label_from_string(std::string_view s) noexcept;

enum class LanguagePair { TamilEnglish, MalayalamEnglish };

std::string_view to_string(LanguagePair lp) noexcept;

/// Accepts `tamil-english`, `malayalam-english` and the short forms `ta`, `ml`.
std::optional<LanguagePair> language_pair_from_string(std::string_view s) noexcept;

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input data or user-supplied configuration.
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace sarceval
