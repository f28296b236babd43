#include "sarceval/runner.hpp"

#include <atomic>
#include <charconv>
#include <ctime>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "sarceval/detail/io.hpp"

namespace sarceval {

namespace {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string_view parsed_name(const ParseOutcome& o) {
    return std::holds_alternative<Label>(o) ? to_string(std::get<Label>(o)) : std::string_view("unparseable");
}

std::string_view final_name(const FinalPrediction& f) {
    return std::holds_alternative<Label>(f) ? to_string(std::get<Label>(f)) : std::string_view("excluded");
}

Dataset prepare_dataset(const ExperimentConfig& cfg) {
    Dataset d = load_dataset(cfg.dataset_path, cfg.language_pair);
    if (cfg.sample_size != 0) d = sample(d, cfg.sample_size, cfg.seed);
    const auto summary = validate_dataset(d, cfg.expected_count);
    if (summary.count_mismatch) {
        throw DataError("dataset has " + std::to_string(summary.total) + " comments, expected " +
                        std::to_string(*summary.expected_count));
    }
    if (summary.flagged()) throw DataError("dataset failed validation: " + cfg.dataset_path.string());
    return d;
}

}  // namespace

std::string temperature_dir_name(double t) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, t);
    return "temperature-" + std::string(buf, res.ptr);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, double temperature, ChatBackend& backend) {
    cfg.validate();
    if (!(temperature >= 0.0 && temperature <= 2.0)) throw DataError("temperature outside [0, 2]");

    const auto t0 = std::chrono::steady_clock::now();
    ExperimentResult result;
    result.config = cfg;
    result.temperature = temperature;
    result.backend_name = backend.name();
    result.started_at = utc_timestamp();

    const Dataset dataset = prepare_dataset(cfg);
    const PromptTemplate tmpl = cfg.prompt_template();
    ResponseCache cache(cfg.cache_dir);
    const auto calls_before = backend.call_count();

    const std::size_t n = dataset.size();
    std::vector<std::optional<ChatExchange>> exchanges(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};

    auto worker = [&] {
        while (!stop.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                auto req = ChatRequest::single_user(cfg.model_id, temperature, cfg.max_tokens,
                                                    tmpl.render(dataset.comments[i].text));
                exchanges[i] = cached_complete(cache, backend, req);
            } catch (...) {
                errors[i] = std::current_exception();
                stop.store(true);
            }
        }
    };
    {
        const auto workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.concurrency_bound), std::max<std::size_t>(n, 1));
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    // Ordered join: everything below is single-threaded and index-driven.
    std::vector<Label> gold, pred;
    result.records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = dataset.comments[i];
        const auto& ex = *exchanges[i];
        CommentRecord rec;
        rec.index = i;
        rec.id = c.id;
        rec.gold = c.gold;
        rec.prompt_digest = sha256_hex(ex.request.user_content());
        rec.request_digest = ex.request_digest;
        rec.raw = ex.response.content;
        rec.parsed = parse_label(rec.raw);
        rec.final_prediction = apply_fallback(rec.parsed, cfg.fallback, c.id);
        rec.cache_hit = ex.cache_hit;

        if (std::holds_alternative<Label>(rec.parsed)) {
            ++result.counts.parsed;
        } else {
            ++result.counts.unparseable;
        }
        if (std::holds_alternative<Excluded>(rec.final_prediction)) ++result.counts.excluded;
        if (rec.cache_hit) ++result.counts.cache_hits;
        if (c.gold && std::holds_alternative<Label>(rec.final_prediction)) {
            gold.push_back(*c.gold);
            pred.push_back(std::get<Label>(rec.final_prediction));
        }
        result.records.push_back(std::move(rec));
    }
    if (dataset.labeled && !gold.empty()) {
        result.matrix = confusion(gold, pred);
        result.report = report(*result.matrix);
    }
    result.backend_calls = backend.call_count() - calls_before;
    result.warnings = cache.warnings();
    result.duration =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);

    write_outputs(result, cfg.output_dir);
    return result;
}

std::vector<ExperimentResult> sweep(const ExperimentConfig& cfg, ChatBackend& backend) {
    cfg.validate();
    std::vector<ExperimentResult> results;
    results.reserve(cfg.temperatures.size());
    for (double t : cfg.temperatures) {
        ExperimentConfig per_run = cfg;
        per_run.output_dir = cfg.output_dir / temperature_dir_name(t);
        results.push_back(run_experiment(per_run, t, backend));
    }
    return results;
}

nlohmann::ordered_json content_json(const ExperimentResult& r) {
    nlohmann::ordered_json j;
    j["config"] = to_json(r.config);
    j["temperature"] = r.temperature;
    j["backend"] = r.backend_name;
    j["counts"] = {{"total", r.records.size()},
                   {"parsed", r.counts.parsed},
                   {"unparseable", r.counts.unparseable},
                   {"excluded", r.counts.excluded}};
    j["confusion_matrix"] = r.matrix ? to_json(*r.matrix) : nlohmann::ordered_json(nullptr);
    j["report"] = r.report ? to_json(*r.report) : nlohmann::ordered_json(nullptr);
    auto& records = j["records"] = nlohmann::ordered_json::array();
    for (const auto& rec : r.records) {
        nlohmann::ordered_json e;
        e["index"] = rec.index;
        e["id"] = rec.id;
        e["gold"] = rec.gold ? nlohmann::ordered_json(to_string(*rec.gold)) : nlohmann::ordered_json(nullptr);
        e["prompt_digest"] = rec.prompt_digest;
        e["request_digest"] = rec.request_digest;
        e["raw"] = rec.raw;
        e["parsed"] = parsed_name(rec.parsed);
        e["final"] = final_name(rec.final_prediction);
        records.push_back(std::move(e));
    }
    return j;
}

std::string content_digest(const ExperimentResult& r) { return sha256_hex(content_json(r).dump()); }

nlohmann::ordered_json to_json(const ExperimentResult& r) {
    nlohmann::ordered_json j;
    const auto content = content_json(r);
    j["content_digest"] = sha256_hex(content.dump());
    for (const auto& [k, v] : content.items()) j[k] = v;
    j["run"] = {{"started_at", r.started_at},
                {"duration_ms", r.duration.count()},
                {"cache_hits", r.counts.cache_hits},
                {"backend_calls", r.backend_calls},
                {"warnings", r.warnings}};
    return j;
}

std::string predictions_tsv(const ExperimentResult& r) {
    const bool with_gold = r.matrix.has_value() ||
                           (!r.records.empty() && r.records.front().gold.has_value());
    std::string out = with_gold ? "id\tgold\traw\tparsed\tfinal\n" : "id\traw\tparsed\tfinal\n";
    for (const auto& rec : r.records) {
        out += escape_field(rec.id);
        if (with_gold) {
            out += '\t';
            out += rec.gold ? to_string(*rec.gold) : "";
        }
        out += '\t' + escape_field(rec.raw) + '\t';
        out += parsed_name(rec.parsed);
        out += '\t';
        out += final_name(rec.final_prediction);
        out += '\n';
    }
    return out;
}

std::string report_text(const ExperimentResult& r) {
    std::ostringstream out;
    out << "dataset: " << r.config.dataset_path.generic_string() << " (" << to_string(r.config.language_pair) << ")\n"
        << "model: " << r.config.model_id << " via " << r.backend_name << ", temperature " << r.temperature << '\n'
        << "fallback: " << to_string(r.config.fallback) << '\n'
        << "comments: " << r.records.size() << ", parsed " << r.counts.parsed << ", unparseable "
        << r.counts.unparseable << ", excluded " << r.counts.excluded << "\n\n";
    if (r.report) {
        out << format_report_table(*r.report);
    } else {
        out << "no gold labels; predictions only\n";
    }
    return out.str();
}

void write_outputs(const ExperimentResult& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    detail::write_file_atomic(dir / "predictions.tsv", predictions_tsv(r));
    detail::write_file_atomic(dir / "report.txt", report_text(r));
    detail::write_file_atomic(dir / "result.json", to_json(r).dump(2) + "\n");
}

std::unique_ptr<ChatBackend> make_backend(const ExperimentConfig& cfg, BackendKind kind,
                                          std::optional<std::string> api_key) {
    if (kind == BackendKind::Mock) return std::make_unique<MockBackend>(cfg.mock_options());
    RemoteOptions opts;
    opts.endpoint_url = cfg.endpoint_url;
    opts.api_key = api_key.value_or("");
    opts.retry.max_attempts = cfg.max_attempts;
    opts.retry.backoff_base = std::chrono::milliseconds(cfg.backoff_base_ms);
    opts.timeout = std::chrono::milliseconds(cfg.timeout_ms);
    opts.max_in_flight = cfg.concurrency_bound;
    opts.rate_limit = cfg.rate_limit;
    opts.jitter_seed = cfg.seed;
    return std::make_unique<RemoteBackend>(std::move(opts));
}

}  // namespace sarceval
