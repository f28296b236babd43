#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sarceval/backend.hpp"
#include "sarceval/label.hpp"
#include "sarceval/parse.hpp"
#include "sarceval/prompt.hpp"

namespace sarceval {

/// Everything needed to reproduce one experiment. Loaded from a flat
/// `key = value` file; see README for the key list.
struct ExperimentConfig {
    std::filesystem::path dataset_path;
    LanguagePair language_pair = LanguagePair::TamilEnglish;
    /// Empty means default_template(language_pair).
    std::optional<std::string> prompt_instruction;
    std::optional<std::string> prompt_name;
    std::string model_id = "gpt-3.5-turbo";
    std::vector<double> temperatures{0.7, 0.8, 0.9};
    int max_tokens = kDefaultMaxTokens;
    FallbackPolicy fallback = FallbackPolicy::DefaultMajority;
    int concurrency_bound = 4;
    /// Requests per second for the remote backend; 0 disables the limit.
    double rate_limit = 0.0;
    std::filesystem::path cache_dir = "cache";
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "out";
    /// 0 runs the whole dataset; otherwise a stratified sample of this size.
    std::size_t sample_size = 0;
    std::optional<std::size_t> expected_count;

    // remote backend
    std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
    std::string api_key_env = "OPENAI_API_KEY";
    int max_attempts = 5;
    int backoff_base_ms = 1000;
    int timeout_ms = 60000;

    // mock backend
    double mock_noise_rate = 0.0;
    std::vector<std::string> mock_lexicon = MockOptions::default_lexicon();

    /// Throws DataError on violated invariants (empty temperatures, out-of-range values, bad template).
    void validate() const;
    PromptTemplate prompt_template() const;
    MockOptions mock_options() const;
};

/// Relative paths are resolved against `base_dir`. Unknown keys are errors.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Full snapshot of the config, embedded in every result.
nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

}  // namespace sarceval
