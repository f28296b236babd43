#pragma once

#include <string>
#include <string_view>

#include "sarceval/label.hpp"

namespace sarceval {

inline constexpr std::string_view kTextPlaceholder = "<Text>";

/// Zero-shot instruction with exactly one `<Text>` slot.
class PromptTemplate {
public:
    /// Throws DataError unless `instruction` contains `<Text>` exactly once.
    PromptTemplate(std::string name, std::string instruction, LanguagePair lp);

    const std::string& name() const noexcept { return name_; }
    const std::string& instruction() const noexcept { return instruction_; }
    LanguagePair language_pair() const noexcept { return language_pair_; }

    /// Substitutes the comment into the slot in one pass; text that itself
    /// contains `<Text>` is inserted verbatim. Empty text is a DataError.
    std::string render(std::string_view comment_text) const;

    friend bool operator==(const PromptTemplate&, const PromptTemplate&) = default;

private:
    std::string name_;
    std::string instruction_;
    LanguagePair language_pair_;
    std::size_t slot_;
};

/// The classification instruction used for both language pairs.
inline constexpr std::string_view kDefaultInstruction =
    "Please Check whether the comment-<Text> is Sarcastic or Non-sarcastic. Only state Sarcastic or Non-sarcastic";

PromptTemplate default_template(LanguagePair lp);

}  // namespace sarceval
