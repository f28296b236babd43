#include "sarceval/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "sarceval/corpus.hpp"
#include "sarceval/detail/io.hpp"
#include "sarceval/metrics.hpp"
#include "sarceval/runner.hpp"

namespace sarceval::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::vector<double> parse_doubles(const std::string& flag, const std::string& v, std::size_t expected) {
    std::vector<double> out;
    for (const auto& item : split(v, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw DataError(flag + ": not a number: '" + item + "'");
        }
    }
    if (out.size() != expected) {
        throw DataError(flag + ": expected " + std::to_string(expected) + " comma-separated values");
    }
    return out;
}

RoundedTriple triple_from(const std::string& flag, const std::string& v) {
    const auto parts = split(v, ',');
    if (parts.size() == 1) {
        const double x = parse_doubles(flag, v, 1)[0];
        return {x, x, x};
    }
    const auto d = parse_doubles(flag, v, 3);
    return {d[0], d[1], d[2]};
}

LanguagePair lang_or_default(const std::string& s) {
    if (s.empty()) return LanguagePair::TamilEnglish;
    const auto lp = language_pair_from_string(s);
    if (!lp) throw DataError("unknown language pair '" + s + "'");
    return *lp;
}

std::string fmt2(double v) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(2) << round_half_up(v, 2);
    return ss.str();
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& path, const std::string& lang, std::optional<std::size_t> expect,
                 std::ostream& out) {
    const Dataset d = load_dataset(path, lang_or_default(lang));
    const auto s = validate_dataset(d, expect);
    print_summary(out, s);
    if (s.count_mismatch) {
        out << "count mismatch: found " << s.total << ", expected " << *s.expected_count << '\n';
    }
    return s.flagged() ? kExitUserError : kExitOk;
}

int cmd_score(const std::string& gold_path, const std::string& pred_path, const std::string& lang,
              const std::string& json_path, std::ostream& out) {
    const Dataset gold = load_dataset(gold_path, lang_or_default(lang));
    if (!gold.labeled) throw DataError("gold file " + gold_path + " has no label column");
    const auto preds = load_predictions(pred_path);

    std::map<std::string, const PredictionRow*> by_id;
    for (const auto& p : preds) {
        if (!by_id.emplace(p.id, &p).second) throw DataError("duplicate prediction id '" + p.id + "'");
    }
    std::vector<Label> g, pr;
    std::size_t excluded = 0;
    for (const auto& c : gold.comments) {
        const auto it = by_id.find(c.id);
        if (it == by_id.end()) throw DataError("id mismatch: no prediction for gold id '" + c.id + "'");
        if (const auto* l = std::get_if<Label>(&it->second->prediction)) {
            g.push_back(*c.gold);
            pr.push_back(*l);
        } else {
            ++excluded;
        }
        by_id.erase(it);
    }
    if (!by_id.empty()) {
        // report the first extra id in file order
        for (const auto& p : preds) {
            if (by_id.count(p.id)) throw DataError("id mismatch: prediction for unknown id '" + p.id + "'");
        }
    }
    if (g.empty()) throw DataError("every prediction is excluded; nothing to score");

    const auto m = confusion(g, pr);
    const auto r = report(m);
    out << format_report_table(r);
    if (excluded) out << "excluded predictions: " << excluded << '\n';

    nlohmann::ordered_json j;
    j["gold"] = gold_path;
    j["predictions"] = pred_path;
    j["excluded"] = excluded;
    j["confusion_matrix"] = to_json(m);
    j["report"] = to_json(r);
    if (json_path.empty()) {
        out << j.dump(2) << '\n';
    } else {
        detail::write_file_atomic(json_path, j.dump(2) + "\n");
    }
    return kExitOk;
}

struct ReconstructArgs {
    std::string support;
    std::string precision;
    std::string recall;
    std::string f1;
    std::string micro;
    std::string macro;
    std::string weighted;
    double tolerance = 0.005;
    std::size_t limit = 10;
    bool json = false;
};

int cmd_reconstruct(const ReconstructArgs& a, std::ostream& out) {
    RoundedReport rr;
    const auto sup = split(a.support, ',');
    if (sup.size() != 2) throw DataError("--support: expected 'NON,SARC' counts");
    try {
        for (std::size_t k = 0; k < 2; ++k) rr.support[k] = std::stoull(sup[k]);
    } catch (const std::exception&) {
        throw DataError("--support: counts must be non-negative integers");
    }
    auto per_class = [&](const std::string& flag, const std::string& v, std::optional<double> RoundedTriple::*field) {
        if (v.empty()) return;
        const auto d = parse_doubles(flag, v, 2);
        for (std::size_t k = 0; k < 2; ++k) rr.per_class[k].*field = d[k];
    };
    per_class("--precision", a.precision, &RoundedTriple::precision);
    per_class("--recall", a.recall, &RoundedTriple::recall);
    per_class("--f1", a.f1, &RoundedTriple::f1);
    if (!a.micro.empty()) rr.micro = triple_from("--micro", a.micro);
    if (!a.macro.empty()) rr.macro = triple_from("--macro", a.macro);
    if (!a.weighted.empty()) rr.weighted = triple_from("--weighted", a.weighted);

    const auto all = reconstruct(rr, {a.tolerance, 0});
    const std::size_t shown = a.limit == 0 ? all.size() : std::min(a.limit, all.size());

    if (a.json) {
        nlohmann::ordered_json j;
        j["solutions"] = all.size();
        j["candidates"] = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < shown; ++i) {
            auto e = to_json(all[i].matrix);
            e["residual"] = all[i].residual;
            e["report"] = to_json(report(all[i].matrix));
            j["candidates"].push_back(std::move(e));
        }
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    out << all.size() << " matrices within tolerance " << a.tolerance << "; best first\n";
    for (std::size_t i = 0; i < shown; ++i) {
        const auto& m = all[i].matrix;
        const auto r = report(m);
        out << "NN=" << m.at(Label::NonSarcastic, Label::NonSarcastic)
            << " NS=" << m.at(Label::NonSarcastic, Label::Sarcastic)
            << " SN=" << m.at(Label::Sarcastic, Label::NonSarcastic)
            << " SS=" << m.at(Label::Sarcastic, Label::Sarcastic) << "  residual=" << std::setprecision(6)
            << all[i].residual << "  macro-F1=" << fmt2(r.macro.f1) << "  weighted-F1=" << fmt2(r.weighted.f1)
            << "  micro=" << fmt2(r.micro.f1) << '\n';
    }
    if (shown > 0) {
        out << "\nbest candidate:\n" << format_report_table(report(all[0].matrix));
    }
    return kExitOk;
}

int cmd_report(const std::string& matrix, const std::string& result_path, bool json, std::ostream& out) {
    ConfusionMatrix m;
    if (!matrix.empty()) {
        const auto parts = split(matrix, ',');
        if (parts.size() != 4) throw DataError("--matrix: expected NN,NS,SN,SS");
        std::uint64_t v[4];
        try {
            for (int k = 0; k < 4; ++k) v[k] = std::stoull(parts[static_cast<std::size_t>(k)]);
        } catch (const std::exception&) {
            throw DataError("--matrix: counts must be non-negative integers");
        }
        m = ConfusionMatrix(v[0], v[1], v[2], v[3]);
    } else if (!result_path.empty()) {
        const auto j = nlohmann::json::parse(detail::read_file(result_path), nullptr, false);
        if (j.is_discarded()) throw DataError(result_path + " is not valid JSON");
        if (!j.contains("confusion_matrix") || j["confusion_matrix"].is_null()) {
            throw DataError(result_path + " has no confusion matrix (unlabeled run?)");
        }
        const auto& c = j["confusion_matrix"]["counts"];
        m = ConfusionMatrix(c[0][0].get<std::uint64_t>(), c[0][1].get<std::uint64_t>(), c[1][0].get<std::uint64_t>(),
                            c[1][1].get<std::uint64_t>());
    } else {
        throw DataError("report: pass --matrix or --result");
    }
    const auto r = report(m);
    if (json) {
        nlohmann::ordered_json j;
        j["confusion_matrix"] = to_json(m);
        j["report"] = to_json(r);
        out << j.dump(2) << '\n';
    } else {
        out << format_report_table(r);
    }
    return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& backend_name, bool is_sweep,
            std::optional<double> temperature, const std::string& output_override, std::ostream& out,
            const EnvLookup& env) {
    ExperimentConfig cfg = load_config(config_path);
    if (!output_override.empty()) cfg.output_dir = output_override;
    const BackendKind kind = backend_name == "remote" ? BackendKind::Remote : BackendKind::Mock;
    std::optional<std::string> key;
    if (kind == BackendKind::Remote) {
        key = env(cfg.api_key_env);
        if (!key || key->empty()) {
            throw DataError("environment variable " + cfg.api_key_env + " is not set; refusing to start a remote run");
        }
    }
    auto backend = make_backend(cfg, kind, key);

    auto summarize = [&out](const ExperimentResult& r, const std::filesystem::path& dir) {
        out << "temperature " << r.temperature << ": " << r.records.size() << " comments, " << r.counts.cache_hits
            << " cache hits, " << r.backend_calls << " backend calls";
        if (r.report) out << ", macro-F1 " << fmt2(r.report->macro.f1);
        out << " -> " << dir.generic_string() << '\n';
    };
    if (is_sweep) {
        for (const auto& r : sweep(cfg, *backend)) summarize(r, r.config.output_dir);
    } else {
        const double t = temperature.value_or(cfg.temperatures.front());
        summarize(run_experiment(cfg, t, *backend), cfg.output_dir);
    }
    return kExitOk;
}

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
}

std::vector<PredictionRow> load_predictions(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open predictions " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": missing header line");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split(line, '\t');
    std::optional<std::size_t> id_col, pred_col;
    bool final_col = false;
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k] == "id") id_col = k;
        if (header[k] == "final") {
            pred_col = k;
            final_col = true;
        }
    }
    if (!pred_col) {
        for (std::size_t k = 0; k < header.size(); ++k) {
            if (header[k] == "label") pred_col = k;
        }
    }
    if (!id_col || !pred_col) throw DataError(path + ": header needs an 'id' column and a 'final' or 'label' column");

    std::vector<PredictionRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto fields = split(line, '\t');
        if (fields.size() != header.size()) {
            throw DataError(path + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                            " columns, found " + std::to_string(fields.size()));
        }
        PredictionRow row;
        row.id = unescape_field(fields[*id_col]);
        const auto& v = fields[*pred_col];
        if (auto l = label_from_string(v)) {
            row.prediction = *l;
        } else if (final_col && v == "excluded") {
            row.prediction = Excluded{};
        } else {
            throw DataError(path + ":" + std::to_string(line_no) + ": invalid prediction '" + v + "'");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
    CLI::App app{"Zero-shot sarcasm classification harness and exact classification-report tools", "sarceval"};
    app.require_subcommand(1);

    std::string dataset, lang, gold, preds, json_path, config, backend = "mock", output, matrix, result_path;
    std::optional<std::size_t> expect;
    std::optional<double> temperature;
    ReconstructArgs ra;
    bool report_json = false;

    auto* validate = app.add_subcommand("validate", "Load a corpus TSV and print label counts");
    validate->add_option("dataset", dataset, "Corpus file (id<TAB>text[<TAB>label])")->required();
    validate->add_option("--lang", lang, "tamil-english | malayalam-english (ta | ml)");
    validate->add_option("--expect", expect, "Expected number of comments");

    auto* run_cmd = app.add_subcommand("run", "Run one experiment at one temperature");
    auto* sweep_cmd = app.add_subcommand("sweep", "Run one experiment per configured temperature");
    for (auto* c : {run_cmd, sweep_cmd}) {
        c->add_option("--config", config, "Experiment config file")->required();
        c->add_option("--backend", backend, "mock | remote")->check(CLI::IsMember({"mock", "remote"}));
        c->add_option("--output", output, "Override output_dir");
    }
    run_cmd->add_option("--temperature", temperature, "Defaults to the first configured temperature");

    auto* score = app.add_subcommand("score", "Score a predictions file against a gold corpus");
    score->add_option("gold", gold, "Labeled corpus TSV")->required();
    score->add_option("predictions", preds, "predictions.tsv or labeled corpus TSV")->required();
    score->add_option("--lang", lang, "Language pair of the gold file");
    score->add_option("--json", json_path, "Write the JSON report here instead of stdout");

    auto* recon = app.add_subcommand("reconstruct", "Find integer confusion matrices consistent with a rounded report");
    recon->add_option("--support", ra.support, "NON,SARC gold counts")->required();
    recon->add_option("--precision", ra.precision, "NON,SARC");
    recon->add_option("--recall", ra.recall, "NON,SARC");
    recon->add_option("--f1", ra.f1, "NON,SARC");
    recon->add_option("--micro", ra.micro, "V or P,R,F1");
    recon->add_option("--macro", ra.macro, "V or P,R,F1");
    recon->add_option("--weighted", ra.weighted, "V or P,R,F1");
    recon->add_option("--tolerance", ra.tolerance, "Max |recomputed - published| per value")->check(CLI::NonNegativeNumber);
    recon->add_option("--limit", ra.limit, "Candidates to print (0 = all)");
    recon->add_flag("--json", ra.json, "Print JSON");

    auto* rep = app.add_subcommand("report", "Print a classification report for a confusion matrix");
    auto* mopt = rep->add_option("--matrix", matrix, "NN,NS,SN,SS (gold first)");
    rep->add_option("--result", result_path, "result.json from a run")->excludes(mopt);
    rep->add_flag("--json", report_json, "Print JSON");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kExitUserError;
    }

    try {
        if (validate->parsed()) return cmd_validate(dataset, lang, expect, out);
        if (run_cmd->parsed()) return cmd_run(config, backend, false, temperature, output, out, env);
        if (sweep_cmd->parsed()) return cmd_run(config, backend, true, std::nullopt, output, out, env);
        if (score->parsed()) return cmd_score(gold, preds, lang, json_path, out);
        if (recon->parsed()) return cmd_reconstruct(ra, out);
        if (rep->parsed()) return cmd_report(matrix, result_path, report_json, out);
    } catch (const BackendError& e) {
        err << "backend error after " << e.attempt_count() << " attempt(s): " << e.what() << '\n';
        return e.kind() == BackendError::Kind::Configuration ? kExitUserError : kExitBackendError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUserError;
    }
    return kExitUserError;
}

}  // namespace sarceval::cli
