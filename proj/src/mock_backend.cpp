#include <algorithm>
#include <cctype>

#include "sarceval/backend.hpp"
#include "sarceval/detail/random.hpp"

namespace sarceval {

namespace {

bool is_token_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

bool has_lexicon_token(std::string_view text, const std::vector<std::string>& lexicon) {
    if (lexicon.empty()) return false;
    std::string token;
    auto matches = [&] {
        return !token.empty() && std::find(lexicon.begin(), lexicon.end(), token) != lexicon.end();
    };
    for (unsigned char c : text) {
        if (is_token_char(c)) {
            token += static_cast<char>(std::tolower(c));
        } else {
            if (matches()) return true;
            token.clear();
        }
    }
    return matches();
}

std::string substitute(std::string_view pattern, std::string_view label) {
    std::string out(pattern);
    if (const auto pos = out.find("{}"); pos != std::string::npos) out.replace(pos, 2, label);
    return out;
}

}  // namespace

std::vector<std::string> MockOptions::default_lexicon() {
    return {"super", "semma", "wow", "adipoli", "pwoli"};
}

const std::vector<std::string_view>& mock_decorations() {
    static const std::vector<std::string_view> decorations{
        "It is {}.",
        "Answer: {}",
        "{}!",
        "The comment is {}.",
        "I am not sure about this one.",
        "Cannot determine from the given text.",
    };
    return decorations;
}

double mock_noise_draw(std::string_view text, std::uint64_t seed) noexcept {
    return detail::unit_interval(detail::splitmix64(detail::fnv1a64(text) ^ detail::splitmix64(seed)));
}

ChatResponse mock_complete(const ChatRequest& req, const MockOptions& opts) {
    const std::string_view text = req.user_content();
    ChatResponse resp;
    resp.finish_reason = "stop";
    resp.attempt_count = 1;

    const bool punct = text.find("??") != std::string_view::npos || text.find("...") != std::string_view::npos ||
                       text.find("!!") != std::string_view::npos;
    if (punct || has_lexicon_token(text, opts.lexicon)) {
        resp.content = "Sarcastic";
        return resp;
    }
    if (opts.noise_rate > 0.0 && mock_noise_draw(text, opts.seed) < opts.noise_rate) {
        // second independent draw picks the label and the decoration
        const std::uint64_t h = detail::splitmix64(detail::fnv1a64(text, opts.seed ^ 0x5a5a5a5a5a5a5a5aULL));
        const std::string_view label = (h & 1U) ? "Sarcastic" : "Non-sarcastic";
        const auto& deco = mock_decorations();
        resp.content = substitute(deco[(h >> 1) % deco.size()], label);
        return resp;
    }
    resp.content = "Non-sarcastic";
    return resp;
}

ChatResponse MockBackend::complete(const ChatRequest& req) {
    calls_.fetch_add(1);
    return mock_complete(req, opts_);
}

}  // namespace sarceval
