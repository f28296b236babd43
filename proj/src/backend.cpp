#include "sarceval/backend.hpp"

namespace sarceval {

std::string_view to_string(Role r) noexcept {
    switch (r) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
    }
    return "user";
}

std::optional<Role> role_from_string(std::string_view s) noexcept {
    if (s == "system") return Role::System;
    if (s == "user") return Role::User;
    if (s == "assistant") return Role::Assistant;
    return std::nullopt;
}

ChatRequest ChatRequest::single_user(std::string model_id, double temperature, int max_tokens, std::string prompt) {
    ChatRequest r;
    r.model_id = std::move(model_id);
    r.temperature = temperature;
    r.max_tokens = max_tokens;
    r.messages.push_back({Role::User, std::move(prompt)});
    return r;
}

void ChatRequest::validate() const {
    if (messages.empty()) throw DataError("chat request has no messages");
    if (!(temperature >= 0.0 && temperature <= 2.0)) {
        throw DataError("temperature " + std::to_string(temperature) + " outside [0, 2]");
    }
    if (max_tokens < 1) throw DataError("max_tokens must be positive");
    if (model_id.empty()) throw DataError("chat request has no model id");
}

std::string_view ChatRequest::user_content() const noexcept {
    for (const auto& m : messages) {
        if (m.role == Role::User) return m.content;
    }
    return {};
}

nlohmann::ordered_json to_json(const ChatRequest& req) {
    nlohmann::ordered_json j;
    j["model"] = req.model_id;
    j["messages"] = nlohmann::ordered_json::array();
    for (const auto& m : req.messages) {
        nlohmann::ordered_json msg;
        msg["role"] = to_string(m.role);
        msg["content"] = m.content;
        j["messages"].push_back(std::move(msg));
    }
    j["temperature"] = req.temperature;
    j["max_tokens"] = req.max_tokens;
    return j;
}

ChatRequest request_from_json(const nlohmann::json& j) {
    ChatRequest r;
    r.model_id = j.at("model").get<std::string>();
    r.temperature = j.at("temperature").get<double>();
    r.max_tokens = j.at("max_tokens").get<int>();
    for (const auto& m : j.at("messages")) {
        const auto role = role_from_string(m.at("role").get<std::string>());
        if (!role) throw DataError("unknown message role");
        r.messages.push_back({*role, m.at("content").get<std::string>()});
    }
    return r;
}

nlohmann::ordered_json to_json(const ChatResponse& resp) {
    nlohmann::ordered_json j;
    j["content"] = resp.content;
    j["finish_reason"] = resp.finish_reason;
    j["latency_ms"] = resp.latency_ms;
    j["attempt_count"] = resp.attempt_count;
    return j;
}

ChatResponse response_from_json(const nlohmann::json& j) {
    ChatResponse r;
    r.content = j.at("content").get<std::string>();
    r.finish_reason = j.at("finish_reason").get<std::string>();
    r.latency_ms = j.at("latency_ms").get<std::uint64_t>();
    r.attempt_count = j.at("attempt_count").get<int>();
    if (r.attempt_count < 1) throw DataError("attempt_count must be >= 1");
    return r;
}

ChatExchange cached_complete(ResponseCache& cache, ChatBackend& backend, const ChatRequest& req) {
    req.validate();
    ChatExchange ex;
    ex.request = req;
    ex.request_digest = request_digest(req);
    if (auto hit = cache.lookup(ex.request_digest)) {
        ex.response = std::move(*hit);
        ex.cache_hit = true;
        return ex;
    }
    ex.response = backend.complete(req);
    cache.store(ex.request_digest, req, ex.response);
    return ex;
}

}  // namespace sarceval
