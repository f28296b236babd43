// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/helpers.hpp"
#include "../unit/oracle.hpp"
#include "sarceval/metrics.hpp"
#include "sarceval/parse.hpp"
#include "sarceval/prompt.hpp"
#include "sarceval/runner.hpp"

using namespace sarceval;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr Label N = Label::NonSarcastic;
constexpr Label S = Label::Sarcastic;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && pass) {
            pass = false;
            detail = what;
        }
    }
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// The 13 printed cells of a classification table, in row order.
using Cells = std::array<double, 13>;

Cells cells_of(const ClassificationReport& r) {
    return {r.of(N).precision, r.of(N).recall,    r.of(N).f1,        r.of(S).precision, r.of(S).recall,
            r.of(S).f1,        r.micro.f1,        r.macro.precision, r.macro.recall,    r.macro.f1,
            r.weighted.precision, r.weighted.recall, r.weighted.f1};
}

RoundedReport published(std::uint64_t sup_n, std::uint64_t sup_s, const Cells& c) {
    RoundedReport r;
    r.support = {sup_n, sup_s};
    r.per_class[0] = {c[0], c[1], c[2]};
    r.per_class[1] = {c[3], c[4], c[5]};
    r.micro = {c[6], c[6], c[6]};
    r.macro = {c[7], c[8], c[9]};
    r.weighted = {c[10], c[11], c[12]};
    return r;
}

// Malayalam and Tamil classification tables as printed.
constexpr Cells kTable1{0.82, 0.73, 0.77, 0.18, 0.27, 0.22, 0.65, 0.50, 0.50, 0.50, 0.70, 0.65, 0.67};
constexpr Cells kTable2{0.79, 0.79, 0.79, 0.43, 0.43, 0.43, 0.69, 0.61, 0.61, 0.61, 0.69, 0.69, 0.69};

bool rounds_within(const ClassificationReport& r, const Cells& target, double margin) {
    const auto c = cells_of(r);
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (std::abs(round_half_up(c[i], 2) - target[i]) > margin + 1e-9) return false;
    }
    return true;
}

Outcome table1_parity() {
    Outcome o;
    const auto t0 = Clock::now();
    // every printed cell within 0.01 after rounding: |unrounded - printed| <= 0.01 + 0.005
    const auto sols = reconstruct(published(2314, 512, kTable1), {0.015, 0});
    const double secs = seconds_since(t0);
    o.require(!sols.empty(), "no candidate matrix");
    if (!o.pass) return o;
    std::size_t ok = 0;
    for (const auto& c : sols) ok += rounds_within(report(c.matrix), kTable1, 0.01);
    o.require(ok > 0, "no candidate rounds within 0.01 of every cell");
    const auto best = report(sols.front().matrix);
    o.require(rounds_within(best, kTable1, 0.01), "best candidate misses a cell by more than 0.01");
    o.require(round_half_up(best.macro.f1, 2) == 0.50, "best macro-F1 does not round to 0.50");
    o.require(round_half_up(best.weighted.f1, 2) == 0.67, "best weighted F1 does not round to 0.67");
    o.require(secs < 10.0, "runtime " + std::to_string(secs) + " s");
    const auto& m = sols.front().matrix;
    std::ostringstream d;
    d << sols.size() << " candidates, best NN=" << m.at(N, N) << " NS=" << m.at(N, S) << " SN=" << m.at(S, N)
      << " SS=" << m.at(S, S) << ", " << secs << " s";
    if (o.pass) o.detail = d.str();
    return o;
}

Outcome table2_parity() {
    Outcome o;
    // The derived matrix, checked first against the brute-force oracle.
    std::vector<int> g, p;
    testing::expand(3651, 970, 977, 740, g, p);
    const auto oracle = testing::oracle_report(g, p);
    const Cells oracle_cells{oracle.precision[0], oracle.recall[0], oracle.f1[0], oracle.precision[1],
                             oracle.recall[1],    oracle.f1[1],     oracle.accuracy, oracle.macro_precision,
                             oracle.macro_recall, oracle.macro_f1,  oracle.weighted_precision,
                             oracle.weighted_recall, oracle.weighted_f1};
    for (std::size_t i = 0; i < oracle_cells.size(); ++i) {
        o.require(std::abs(oracle_cells[i] - kTable2[i]) <= 0.005, "oracle: derived matrix misses cell " + std::to_string(i));
    }

    const auto t0 = Clock::now();
    const auto sols = reconstruct(published(4621, 1717, kTable2), {0.005, 0});
    const double secs = seconds_since(t0);
    o.require(!sols.empty(), "no candidate matrix");
    if (!o.pass) return o;
    const auto best = report(sols.front().matrix);
    for (const auto& c : sols) {
        const auto cells = cells_of(report(c.matrix));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            o.require(std::abs(cells[i] - kTable2[i]) <= 0.005 + 1e-9, "a returned candidate violates 0.005");
        }
    }
    o.require(round_half_up(best.macro.f1, 2) == 0.61, "best macro-F1 does not round to 0.61");
    o.require(round_half_up(best.micro.f1, 2) == 0.69, "best micro does not round to 0.69");
    const ConfusionMatrix derived(3651, 970, 977, 740);
    o.require(std::any_of(sols.begin(), sols.end(), [&](const Candidate& c) { return c.matrix == derived; }),
              "derived matrix (3651, 970, 977, 740) not in the solution set");
    o.require(secs < 10.0, "runtime " + std::to_string(secs) + " s");
    if (o.pass) o.detail = std::to_string(sols.size()) + " candidates incl. derived matrix, " + std::to_string(secs) + " s";
    return o;
}

Outcome micro_identity() {
    Outcome o;
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 1000 && o.pass; ++trial) {
        const std::size_t len = 1 + rng() % 200;
        std::vector<Label> g(len), p(len);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < len; ++i) {
            g[i] = rng() % 2 ? S : N;
            p[i] = rng() % 2 ? S : N;
            correct += g[i] == p[i];
        }
        const double accuracy = static_cast<double>(correct) / static_cast<double>(len);
        const auto r = report(confusion(g, p));
        o.require(r.micro.precision == accuracy && r.micro.recall == accuracy && r.micro.f1 == accuracy,
                  "micro P/R/F1 differ from accuracy at trial " + std::to_string(trial));
        o.require(std::abs(r.weighted.recall - accuracy) <= 1e-12,
                  "weighted recall differs from accuracy at trial " + std::to_string(trial));
    }
    if (o.pass) o.detail = "1000 random pairs";
    return o;
}

Outcome reconstruction_soundness() {
    Outcome o;
    std::mt19937_64 rng(4242);
    const auto t0 = Clock::now();
    for (int trial = 0; trial < 200 && o.pass; ++trial) {
        std::uint64_t sup_n = rng() % 501, sup_s = rng() % 501;
        if (sup_n + sup_s == 0) sup_s = 1;
        const std::uint64_t nn = rng() % (sup_n + 1), ss = rng() % (sup_s + 1);
        const ConfusionMatrix m(nn, sup_n - nn, sup_s - ss, ss);
        std::vector<Candidate> sols;
        try {
            sols = reconstruct(round_report(report(m)), {0.005, 0});
        } catch (const InconsistentReport&) {
        }
        o.require(std::any_of(sols.begin(), sols.end(), [&](const Candidate& c) { return c.matrix == m; }),
                  "true matrix missing at trial " + std::to_string(trial));
    }
    if (o.pass) o.detail = "200 random matrices, " + std::to_string(seconds_since(t0)) + " s";
    return o;
}

Outcome parser_suite() {
    Outcome o;
    auto is = [](const ParseOutcome& out, Label l) {
        const auto* p = std::get_if<Label>(&out);
        return p && *p == l;
    };
    for (Label l : kAllLabels) o.require(is(parse_label(to_string(l)), l), "canonical label does not round-trip");

    // 50 decorated variants: 5 case forms x 5 wrappers x 2 labels
    const std::vector<std::pair<std::string, Label>> bases{{"Sarcastic", S}, {"Non-sarcastic", N}};
    const std::vector<std::function<std::string(std::string)>> cases{
        [](std::string s) { return s; },
        [](std::string s) {
            for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            return s;
        },
        [](std::string s) {
            for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            return s;
        },
        [](std::string s) {
            for (std::size_t i = 0; i < s.size(); i += 2) s[i] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[i])));
            return s;
        },
        [](std::string s) { return s == "Non-sarcastic" ? std::string("Non Sarcastic") : s; },
    };
    const std::vector<std::function<std::string(std::string)>> wraps{
        [](std::string s) { return "  " + s + ".  "; },
        [](std::string s) { return "\"" + s + "!\""; },
        [](std::string s) { return "The comment is " + s + "."; },
        [](std::string s) { return "Answer: " + s; },
        [](std::string s) { return "'" + s + "';\n"; },
    };
    std::size_t variants = 0;
    for (const auto& [text, label] : bases) {
        for (const auto& c : cases) {
            for (const auto& w : wraps) {
                const auto v = w(c(text));
                ++variants;
                o.require(is(parse_label(v), label), "decorated variant misparsed: " + v);
            }
        }
    }
    o.require(variants == 50, "expected 50 variants");

    std::mt19937_64 rng(8);
    const std::vector<std::string> fillers{"", " ", "the comment is ", ". ", "maybe ", "!", "\n"};
    for (int i = 0; i < 500; ++i) {
        std::string s = fillers[rng() % fillers.size()];
        const bool neg_first = rng() % 2;
        const std::string neg = rng() % 2 ? "non-sarcastic" : "Non-Sarcastic";
        const std::string pos = rng() % 2 ? "sarcastic" : "SARCASTIC";
        s += neg_first ? neg + fillers[rng() % fillers.size()] + pos : pos + fillers[rng() % fillers.size()] + neg;
        o.require(is(parse_label(s), N), "string with both keywords not NonSarcastic: " + s);
    }

    for (int i = 0; i < 5000; ++i) {
        std::string s(rng() % 30, '\0');
        for (auto& c : s) c = static_cast<char>(rng() % 256);
        const auto out = parse_label(s);
        o.require(std::holds_alternative<Label>(out) || std::holds_alternative<Unparseable>(out), "non-total parse");
    }
    if (o.pass) o.detail = "canonical + 50 decorated + 500 mixed + 5000 random strings";
    return o;
}

Outcome end_to_end_determinism() {
    Outcome o;
    testing::TempDir dir;
    ExperimentConfig cfg;
    cfg.dataset_path = fs::path(SARCEVAL_DATA_DIR) / "synthetic_tamil_100.tsv";
    cfg.temperatures = {0.7};
    cfg.cache_dir = dir / "cache";
    cfg.output_dir = dir / "out";
    cfg.seed = 7;
    cfg.mock_noise_rate = 0.1;

    auto without_run_section = [](const std::string& text) {
        auto j = nlohmann::ordered_json::parse(text);
        j.erase("run");
        return j.dump(2);
    };

    const auto t0 = Clock::now();
    MockBackend first_backend(cfg.mock_options());
    const auto first = run_experiment(cfg, 0.7, first_backend);
    const double first_secs = seconds_since(t0);
    const auto first_json = testing::read_text(cfg.output_dir / "result.json");

    MockBackend second_backend(cfg.mock_options());
    const auto second = run_experiment(cfg, 0.7, second_backend);
    const auto second_json = testing::read_text(cfg.output_dir / "result.json");

    o.require(first_secs < 5.0, "cold run took " + std::to_string(first_secs) + " s");
    o.require(first.records.size() == 100, "expected 100 records");
    o.require(without_run_section(first_json) == without_run_section(second_json),
              "result.json differs between runs outside the run section");
    o.require(content_digest(first) == content_digest(second), "content digests differ");
    o.require(nlohmann::json::parse(first_json)["content_digest"] == nlohmann::json::parse(second_json)["content_digest"],
              "stored content digests differ");
    o.require(second_backend.call_count() == 0, "warm-cache run made backend calls");
    o.require(second.counts.cache_hits == 100, "warm-cache run missed the cache");
    if (o.pass) o.detail = "cold run " + std::to_string(first_secs) + " s; warm re-run: 0 backend calls";
    return o;
}

Outcome prompt_fidelity() {
    Outcome o;
    static const std::string golden =
        "Please Check whether the comment-<Text> is Sarcastic or Non-sarcastic. Only state Sarcastic or Non-sarcastic";
    for (auto lp : {LanguagePair::TamilEnglish, LanguagePair::MalayalamEnglish}) {
        o.require(default_template(lp).instruction() == golden, "default instruction differs from the golden string");
    }
    o.require(default_template(LanguagePair::TamilEnglish).render("great movie...") ==
                  "Please Check whether the comment-great movie... is Sarcastic or Non-sarcastic. Only state "
                  "Sarcastic or Non-sarcastic",
              "rendered prompt differs");
    return o;
}

Outcome rounding() {
    Outcome o;
    o.require(round_half_up(0.495, 2) == 0.50, "round_half_up(0.495, 2) != 0.50");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 table-1 parity (Malayalam, +/-0.01, macro 0.50, weighted 0.67, <10 s)", table1_parity},
        {"2 table-2 parity (Tamil, +/-0.005, macro 0.61, micro 0.69, derived matrix, <10 s)", table2_parity},
        {"3 micro identity over 1000 random pairs", micro_identity},
        {"4 reconstruction soundness over 200 random matrices", reconstruction_soundness},
        {"5 parser suite", parser_suite},
        {"6 end-to-end determinism with mock backend (<5 s, warm cache)", end_to_end_determinism},
        {"7 prompt fidelity", prompt_fidelity},
        {"8 rounding 0.495 -> 0.50", rounding},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] %s%s%s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.empty() ? "" : " :: ",
                    o.detail.c_str());
        failures += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
