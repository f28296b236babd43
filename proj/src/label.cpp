#include "sarceval/label.hpp"

namespace sarceval {

std::string_view to_string(Label l) noexcept {
    return l == Label::Sarcastic ? "Sarcastic" : "Non-sarcastic";
}

std::optional<Label> label_from_string(std::string_view s) noexcept {
    if (s == "Sarcastic") return Label::Sarcastic;
    if (s == "Non-sarcastic") return Label::NonSarcastic;
    return std::nullopt;
}

std::string_view to_string(LanguagePair lp) noexcept {
    return lp == LanguagePair::TamilEnglish ? "tamil-english" : "malayalam-english";
}

std::optional<LanguagePair> language_pair_from_string(std::string_view s) noexcept {
    if (s == "tamil-english" || s == "ta") return LanguagePair::TamilEnglish;
    if (s == "malayalam-english" || s == "ml") return LanguagePair::MalayalamEnglish;
    return std::nullopt;
}

}  // namespace sarceval
