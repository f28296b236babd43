#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sarceval/backend.hpp"
#include "sarceval/config.hpp"
#include "sarceval/corpus.hpp"
#include "sarceval/metrics.hpp"
#include "sarceval/parse.hpp"

namespace sarceval {

struct CommentRecord {
    std::size_t index = 0;
    std::string id;
    std::optional<Label> gold;
    std::string prompt_digest;
    std::string request_digest;
    std::string raw;
    ParseOutcome parsed;
    FinalPrediction final_prediction;
    bool cache_hit = false;
};

struct RunCounts {
    std::size_t parsed = 0;
    std::size_t unparseable = 0;
    std::size_t excluded = 0;
    std::size_t cache_hits = 0;
};

struct ExperimentResult {
    ExperimentConfig config;
    double temperature = 0.0;
    std::string backend_name;
    std::vector<CommentRecord> records;  // dataset order
    std::optional<ConfusionMatrix> matrix;
    std::optional<ClassificationReport> report;
    RunCounts counts;
    std::uint64_t backend_calls = 0;
    std::vector<std::string> warnings;
    std::string started_at;
    std::chrono::milliseconds duration{0};
};

/// Processes every comment once at `temperature`, joins in dataset order,
/// scores against gold when present, and writes result.json,
/// predictions.tsv and report.txt to cfg.output_dir before returning.
/// Backend failures abort the run; completed calls stay in the cache.
ExperimentResult run_experiment(const ExperimentConfig& cfg, double temperature, ChatBackend& backend);

/// One run per configured temperature, in order, each written to
/// `<output_dir>/temperature-<t>/`.
std::vector<ExperimentResult> sweep(const ExperimentConfig& cfg, ChatBackend& backend);

/// Directory name used by sweep for a temperature, e.g. `temperature-0.7`.
std::string temperature_dir_name(double t);

/// Everything except timing and cache provenance.
nlohmann::ordered_json content_json(const ExperimentResult& r);
/// SHA-256 of content_json; equal for repeated runs under a warm cache.
std::string content_digest(const ExperimentResult& r);
/// content_json plus `content_digest` and a `run` section (timestamps, cache hits, backend calls).
nlohmann::ordered_json to_json(const ExperimentResult& r);

std::string predictions_tsv(const ExperimentResult& r);
std::string report_text(const ExperimentResult& r);
void write_outputs(const ExperimentResult& r, const std::filesystem::path& dir);

enum class BackendKind { Mock, Remote };

/// Builds the backend named by `kind`. For Remote, `api_key` must be set or a
/// BackendError(Configuration) is thrown before any request is made.
std::unique_ptr<ChatBackend> make_backend(const ExperimentConfig& cfg, BackendKind kind,
                                          std::optional<std::string> api_key = {});

}  // namespace sarceval
