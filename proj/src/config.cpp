#include "sarceval/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>

namespace sarceval {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        const auto pos = v.find(',', start);
        auto item = trim(std::string_view(v).substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (!item.empty()) out.push_back(std::move(item));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
    T out{};
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end) throw DataError("config: '" + key + "' is not a valid number: '" + v + "'");
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (dataset_path.empty()) throw DataError("config: dataset_path is required");
    if (temperatures.empty()) throw DataError("config: temperatures must be non-empty");
    for (double t : temperatures) {
        if (!(t >= 0.0 && t <= 2.0)) throw DataError("config: temperature " + std::to_string(t) + " outside [0, 2]");
    }
    if (max_tokens < 1) throw DataError("config: max_tokens must be positive");
    if (concurrency_bound < 1) throw DataError("config: concurrency_bound must be >= 1");
    if (rate_limit < 0.0) throw DataError("config: rate_limit must be >= 0");
    if (max_attempts < 1) throw DataError("config: retry.max_attempts must be >= 1");
    if (backoff_base_ms < 0 || timeout_ms < 1) throw DataError("config: invalid retry timing");
    if (!(mock_noise_rate >= 0.0 && mock_noise_rate <= 1.0)) throw DataError("config: mock.noise_rate outside [0, 1]");
    if (model_id.empty()) throw DataError("config: model_id is empty");
    (void)prompt_template();
}

PromptTemplate ExperimentConfig::prompt_template() const {
    if (!prompt_instruction) {
        auto t = default_template(language_pair);
        if (prompt_name) return PromptTemplate(*prompt_name, t.instruction(), language_pair);
        return t;
    }
    return PromptTemplate(prompt_name.value_or("custom"), *prompt_instruction, language_pair);
}

MockOptions ExperimentConfig::mock_options() const {
    MockOptions m;
    m.seed = seed;
    m.noise_rate = mock_noise_rate;
    m.lexicon = mock_lexicon;
    return m;
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    ExperimentConfig cfg;
    auto path_of = [&](const std::string& v) {
        std::filesystem::path p(v);
        return (p.is_relative() && !base_dir.empty() ? base_dir / p : p).lexically_normal();
    };

    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter, std::less<>> setters{
        {"dataset_path", [&](auto&, auto& v) { cfg.dataset_path = path_of(v); }},
        {"language_pair",
         [&](auto& k, auto& v) {
             auto lp = language_pair_from_string(v);
             if (!lp) throw DataError("config: '" + k + "' must be tamil-english or malayalam-english");
             cfg.language_pair = *lp;
         }},
        {"prompt.instruction", [&](auto&, auto& v) { cfg.prompt_instruction = v; }},
        {"prompt.name", [&](auto&, auto& v) { cfg.prompt_name = v; }},
        {"model_id", [&](auto&, auto& v) { cfg.model_id = v; }},
        {"temperatures",
         [&](auto& k, auto& v) {
             cfg.temperatures.clear();
             for (const auto& t : split_list(v)) cfg.temperatures.push_back(parse_number<double>(k, t));
         }},
        {"max_tokens", [&](auto& k, auto& v) { cfg.max_tokens = parse_number<int>(k, v); }},
        {"parse.fallback",
         [&](auto& k, auto& v) {
             auto p = fallback_policy_from_string(v);
             if (!p) throw DataError("config: '" + k + "' must be strict, default-majority or exclude");
             cfg.fallback = *p;
         }},
        {"concurrency_bound", [&](auto& k, auto& v) { cfg.concurrency_bound = parse_number<int>(k, v); }},
        {"rate_limit", [&](auto& k, auto& v) { cfg.rate_limit = parse_number<double>(k, v); }},
        {"cache_dir", [&](auto&, auto& v) { cfg.cache_dir = path_of(v); }},
        {"seed", [&](auto& k, auto& v) { cfg.seed = parse_number<std::uint64_t>(k, v); }},
        {"output_dir", [&](auto&, auto& v) { cfg.output_dir = path_of(v); }},
        {"sample_size", [&](auto& k, auto& v) { cfg.sample_size = parse_number<std::size_t>(k, v); }},
        {"expected_count", [&](auto& k, auto& v) { cfg.expected_count = parse_number<std::size_t>(k, v); }},
        {"endpoint_url", [&](auto&, auto& v) { cfg.endpoint_url = v; }},
        {"api_key_env", [&](auto&, auto& v) { cfg.api_key_env = v; }},
        {"retry.max_attempts", [&](auto& k, auto& v) { cfg.max_attempts = parse_number<int>(k, v); }},
        {"retry.backoff_base_ms", [&](auto& k, auto& v) { cfg.backoff_base_ms = parse_number<int>(k, v); }},
        {"timeout_ms", [&](auto& k, auto& v) { cfg.timeout_ms = parse_number<int>(k, v); }},
        {"mock.noise_rate", [&](auto& k, auto& v) { cfg.mock_noise_rate = parse_number<double>(k, v); }},
        {"mock.lexicon", [&](auto&, auto& v) { cfg.mock_lexicon = split_list(v); }},
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw DataError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(std::string_view(t).substr(0, eq));
        const auto value = trim(std::string_view(t).substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) throw DataError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        it->second(key, value);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config " + path.string());
    return parse_config(in, path.parent_path());
}

nlohmann::ordered_json to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["dataset_path"] = cfg.dataset_path.generic_string();
    j["language_pair"] = to_string(cfg.language_pair);
    const auto tmpl = cfg.prompt_template();
    j["prompt"] = {{"name", tmpl.name()}, {"instruction", tmpl.instruction()}};
    j["model_id"] = cfg.model_id;
    j["temperatures"] = cfg.temperatures;
    j["max_tokens"] = cfg.max_tokens;
    j["parse_fallback"] = to_string(cfg.fallback);
    j["concurrency_bound"] = cfg.concurrency_bound;
    j["rate_limit"] = cfg.rate_limit;
    j["cache_dir"] = cfg.cache_dir.generic_string();
    j["seed"] = cfg.seed;
    j["output_dir"] = cfg.output_dir.generic_string();
    j["sample_size"] = cfg.sample_size;
    j["expected_count"] = cfg.expected_count ? nlohmann::ordered_json(*cfg.expected_count) : nullptr;
    j["endpoint_url"] = cfg.endpoint_url;
    j["api_key_env"] = cfg.api_key_env;
    j["retry"] = {{"max_attempts", cfg.max_attempts}, {"backoff_base_ms", cfg.backoff_base_ms}};
    j["timeout_ms"] = cfg.timeout_ms;
    j["mock"] = {{"noise_rate", cfg.mock_noise_rate}, {"lexicon", cfg.mock_lexicon}};
    return j;
}

}  // namespace sarceval
