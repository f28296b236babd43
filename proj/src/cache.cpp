
#include "sarceval/backend.hpp"
#include "sarceval/detail/io.hpp"

namespace sarceval {

namespace fs = std::filesystem;

ResponseCache::ResponseCache(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

fs::path ResponseCache::entry_path(const std::string& digest) const { return dir_ / (digest + ".json"); }

std::optional<ChatResponse> ResponseCache::lookup(const std::string& digest) {
    const auto path = entry_path(digest);
    std::error_code ec;
    if (!fs::exists(path, ec)) return std::nullopt;
    try {
        const auto j = nlohmann::json::parse(detail::read_file(path));
        if (j.at("digest").get<std::string>() != digest) throw DataError("digest field does not match file name");
        return response_from_json(j.at("response"));
    } catch (const std::exception& e) {
        std::lock_guard lock(mu_);
        warnings_.push_back("cache entry " + path.string() + " unreadable, treated as miss: " + e.what());
        return std::nullopt;
    }
}

void ResponseCache::store(const std::string& digest, const ChatRequest& req, const ChatResponse& resp) {
    nlohmann::ordered_json j;
    j["digest"] = digest;
    j["request"] = to_json(req);
    j["response"] = to_json(resp);
    detail::write_file_atomic(entry_path(digest), j.dump(2) + "\n");
}

std::size_t ResponseCache::entry_count() const {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir_)) {
        if (e.is_regular_file() && e.path().extension() == ".json") ++n;
    }
    return n;
}

std::vector<std::string> ResponseCache::warnings() const {
    std::lock_guard lock(mu_);
    return warnings_;
}

}  // namespace sarceval
