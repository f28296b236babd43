#include "sarceval/metrics.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sarceval {

std::uint64_t ConfusionMatrix::support(Label gold) const noexcept {
    const auto& row = counts_[index_of(gold)];
    return row[0] + row[1];
}

std::uint64_t ConfusionMatrix::predicted(Label pred) const noexcept {
    return counts_[0][index_of(pred)] + counts_[1][index_of(pred)];
}

std::uint64_t ConfusionMatrix::trace() const noexcept { return counts_[0][0] + counts_[1][1]; }

std::uint64_t ConfusionMatrix::total() const noexcept {
    return counts_[0][0] + counts_[0][1] + counts_[1][0] + counts_[1][1];
}

ConfusionMatrix confusion(std::span<const Label> gold, std::span<const Label> pred) {
    if (gold.size() != pred.size()) {
        throw DataError("gold/pred length mismatch: " + std::to_string(gold.size()) + " vs " +
                        std::to_string(pred.size()));
    }
    if (gold.empty()) throw DataError("cannot tabulate an empty label sequence");
    ConfusionMatrix m;
    for (std::size_t i = 0; i < gold.size(); ++i) m.add(gold[i], pred[i]);
    return m;
}

bool ClassificationReport::has_zero_division() const noexcept {
    for (const auto& c : per_class) {
        if (c.precision_undefined || c.recall_undefined) return true;
    }
    return false;
}

ClassificationReport report(const ConfusionMatrix& m) {
    const std::uint64_t total = m.total();
    if (total == 0) throw DataError("cannot score an empty confusion matrix");

    ClassificationReport r;
    r.total_support = total;
    const auto n = static_cast<double>(total);
    for (Label l : kAllLabels) {
        auto& c = r.per_class[index_of(l)];
        const auto tp = static_cast<double>(m.at(l, l));
        const auto col = m.predicted(l);
        c.support = m.support(l);
        c.precision_undefined = col == 0;
        c.recall_undefined = c.support == 0;
        c.precision = col == 0 ? 0.0 : tp / static_cast<double>(col);
        c.recall = c.support == 0 ? 0.0 : tp / static_cast<double>(c.support);
        const double pr = c.precision + c.recall;
        c.f1 = pr > 0.0 ? 2.0 * c.precision * c.recall / pr : 0.0;

        r.macro.precision += c.precision;
        r.macro.recall += c.recall;
        r.macro.f1 += c.f1;
        const auto w = static_cast<double>(c.support);
        r.weighted.precision += w * c.precision;
        r.weighted.recall += w * c.recall;
        r.weighted.f1 += w * c.f1;
    }
    constexpr auto k = static_cast<double>(kNumLabels);
    r.macro.precision /= k;
    r.macro.recall /= k;
    r.macro.f1 /= k;
    r.weighted.precision /= n;
    r.weighted.recall /= n;
    r.weighted.f1 /= n;

    // Single-label pooling: every error is one FP and one FN, so P = R = F1 = accuracy.
    const double accuracy = static_cast<double>(m.trace()) / n;
    r.micro = {accuracy, accuracy, accuracy};
    return r;
}

double round_half_up(double x, int places) {
    if (places < 0) throw DataError("round_half_up: negative number of places");
    if (!std::isfinite(x)) return x;

    // Shortest decimal that round-trips to x, in scientific form d.ddddde±X.
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
    std::string_view s(buf, static_cast<std::size_t>(res.ptr - buf));
    const bool negative = !s.empty() && s.front() == '-';
    if (negative) s.remove_prefix(1);
    const auto epos = s.find('e');
    int exponent = 0;
    std::from_chars(s.data() + epos + 1 + (s[epos + 1] == '+' ? 1 : 0), s.data() + s.size(), exponent);
    std::string digits;
    for (char c : s.substr(0, epos)) {
        if (c != '.') digits += c;
    }
    // value = 0.digits * 10^(exponent + 1); keep digits up to position `places` after the point.
    const int point = exponent + 1;
    const int keep = point + places;
    if (keep < 0) return negative ? -0.0 : 0.0;
    if (static_cast<std::size_t>(keep) >= digits.size()) return x;

    std::string kept = digits.substr(0, static_cast<std::size_t>(keep));
    const bool round_up = digits[static_cast<std::size_t>(keep)] >= '5';
    if (round_up) {
        int i = static_cast<int>(kept.size()) - 1;
        while (i >= 0 && kept[static_cast<std::size_t>(i)] == '9') kept[static_cast<std::size_t>(i--)] = '0';
        if (i >= 0) {
            ++kept[static_cast<std::size_t>(i)];
        } else {
            kept.insert(kept.begin(), '1');
            // one more leading digit: the implied point moves right by one
            return (negative ? -1.0 : 1.0) * std::stod("0." + kept + "e" + std::to_string(point + 1));
        }
    }
    if (kept.empty()) return negative ? -0.0 : 0.0;
    return (negative ? -1.0 : 1.0) * std::stod("0." + kept + "e" + std::to_string(point));
}

nlohmann::ordered_json to_json(const ConfusionMatrix& m) {
    nlohmann::ordered_json j;
    j["labels"] = {to_string(Label::NonSarcastic), to_string(Label::Sarcastic)};
    j["counts"] = nlohmann::ordered_json::array();
    for (Label g : kAllLabels) {
        j["counts"].push_back({m.at(g, Label::NonSarcastic), m.at(g, Label::Sarcastic)});
    }
    j["total"] = m.total();
    return j;
}

nlohmann::ordered_json to_json(const ClassificationReport& r) {
    auto triple = [](const AverageMetrics& a) {
        nlohmann::ordered_json t;
        t["precision"] = a.precision;
        t["recall"] = a.recall;
        t["f1"] = a.f1;
        return t;
    };
    nlohmann::ordered_json j;
    j["per_class"] = nlohmann::ordered_json::object();
    for (Label l : kAllLabels) {
        const auto& c = r.of(l);
        nlohmann::ordered_json e;
        e["precision"] = c.precision;
        e["recall"] = c.recall;
        e["f1"] = c.f1;
        e["support"] = c.support;
        if (c.precision_undefined) e["precision_undefined"] = true;
        if (c.recall_undefined) e["recall_undefined"] = true;
        j["per_class"][std::string(to_string(l))] = std::move(e);
    }
    j["micro"] = triple(r.micro);
    j["macro"] = triple(r.macro);
    j["weighted"] = triple(r.weighted);
    j["total_support"] = r.total_support;
    return j;
}

std::string format_report_table(const ClassificationReport& r, int places) {
    auto cell = [places](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%10.*f", places, round_half_up(v, places));
        return std::string(buf);
    };
    auto row = [&](const char* name, double p, double rc, double f, std::uint64_t support) {
        char head[32];
        std::snprintf(head, sizeof head, "%-14s", name);
        char tail[32];
        std::snprintf(tail, sizeof tail, "%10llu", static_cast<unsigned long long>(support));
        return std::string(head) + cell(p) + cell(rc) + cell(f) + tail + "\n";
    };

    std::string out;
    char header[96];
    std::snprintf(header, sizeof header, "%-14s%10s%10s%10s%10s\n", "", "Precision", "Recall", "F1-Score", "Support");
    out += header;
    for (Label l : kAllLabels) {
        const auto& c = r.of(l);
        out += row(std::string(to_string(l)).c_str(), c.precision, c.recall, c.f1, c.support);
    }
    out += row("Micro avg", r.micro.precision, r.micro.recall, r.micro.f1, r.total_support);
    out += row("Macro avg", r.macro.precision, r.macro.recall, r.macro.f1, r.total_support);
    out += row("Weighted avg", r.weighted.precision, r.weighted.recall, r.weighted.f1, r.total_support);
    for (Label l : kAllLabels) {
        const auto& c = r.of(l);
        if (c.precision_undefined) out += "note: " + std::string(to_string(l)) + " was never predicted; precision set to 0\n";
        if (c.recall_undefined) out += "note: " + std::string(to_string(l)) + " has no gold instances; recall set to 0\n";
    }
    return out;
}

}  // namespace sarceval
