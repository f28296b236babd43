#include "sarceval/prompt.hpp"

namespace sarceval {

PromptTemplate::PromptTemplate(std::string name, std::string instruction, LanguagePair lp)
    : name_(std::move(name)), instruction_(std::move(instruction)), language_pair_(lp) {
    slot_ = instruction_.find(kTextPlaceholder);
    if (slot_ == std::string::npos) throw DataError("prompt instruction has no <Text> placeholder");
    if (instruction_.find(kTextPlaceholder, slot_ + 1) != std::string::npos) {
        throw DataError("prompt instruction has more than one <Text> placeholder");
    }
}

std::string PromptTemplate::render(std::string_view comment_text) const {
    if (comment_text.empty()) throw DataError("cannot render prompt for empty comment text");
    std::string out;
    out.reserve(instruction_.size() - kTextPlaceholder.size() + comment_text.size());
    out.append(instruction_, 0, slot_);
    out.append(comment_text);
    out.append(instruction_, slot_ + kTextPlaceholder.size());
    return out;
}

PromptTemplate default_template(LanguagePair lp) {
    const std::string name = lp == LanguagePair::TamilEnglish ? "zero-shot-tamil" : "zero-shot-malayalam";
    return PromptTemplate(name, std::string(kDefaultInstruction), lp);
}

}  // namespace sarceval
