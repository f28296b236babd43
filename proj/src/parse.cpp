#include "sarceval/parse.hpp"

#include <algorithm>

namespace sarceval {

namespace {

bool is_trim_char(char c) {
    switch (c) {
        case ' ': case '\t': case '\n': case '\r': case '\f': case '\v':
        case '.': case ',': case ':': case ';': case '!': case '"': case '\'':
            return true;
        default:
            return false;
    }
}

}  // namespace

std::string_view to_string(FallbackPolicy p) noexcept {
    switch (p) {
        case FallbackPolicy::Strict: return "strict";
        case FallbackPolicy::DefaultMajority: return "default-majority";
        case FallbackPolicy::Exclude: return "exclude";
    }
    return "default-majority";
}

std::optional<FallbackPolicy> fallback_policy_from_string(std::string_view s) noexcept {
    if (s == "strict") return FallbackPolicy::Strict;
    if (s == "default-majority") return FallbackPolicy::DefaultMajority;
    if (s == "exclude") return FallbackPolicy::Exclude;
    return std::nullopt;
}

std::string normalize_completion(std::string_view raw) {
    std::size_t b = 0, e = raw.size();
    while (b < e && is_trim_char(raw[b])) ++b;
    while (e > b && is_trim_char(raw[e - 1])) --e;
    std::string out(raw.substr(b, e - b));
    std::transform(out.begin(), out.end(), out.begin(), [](char c) {
        return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    });
    return out;
}

ParseOutcome parse_label(std::string_view raw) {
    const std::string norm = normalize_completion(raw);
    for (std::string_view neg : {"non-sarcastic", "non sarcastic", "not sarcastic"}) {
        if (norm.find(neg) != std::string::npos) return Label::NonSarcastic;
    }
    if (norm.find("sarcastic") != std::string::npos) return Label::Sarcastic;
    return Unparseable{std::string(raw)};
}

StrictParseError::StrictParseError(std::string comment_id, std::string raw)
    : Error("unparseable completion for comment '" + comment_id + "': \"" + raw + "\""),
      comment_id_(std::move(comment_id)),
      raw_(std::move(raw)) {}

FinalPrediction apply_fallback(const ParseOutcome& o, FallbackPolicy p, std::string_view comment_id) {
    if (const auto* l = std::get_if<Label>(&o)) return *l;
    switch (p) {
        case FallbackPolicy::Strict:
            throw StrictParseError(std::string(comment_id), std::get<Unparseable>(o).raw);
        case FallbackPolicy::DefaultMajority:
            return Label::NonSarcastic;
        case FallbackPolicy::Exclude:
            return Excluded{};
    }
    return Label::NonSarcastic;
}

}  // namespace sarceval
