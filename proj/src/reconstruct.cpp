#include <algorithm>
#include <cmath>

#include "sarceval/metrics.hpp"

namespace sarceval {

namespace {

// Absorbs binary floating-point error at exact tolerance boundaries.
constexpr double kSlack = 1e-9;

struct Residual {
    double tolerance;
    double sum_sq = 0.0;
    bool ok = true;

    void check(const std::optional<double>& published, double value) {
        if (!published || !ok) return;
        const double d = value - *published;
        if (std::abs(d) > tolerance + kSlack) {
            ok = false;
            return;
        }
        sum_sq += d * d;
    }

    void check(const RoundedTriple& published, const AverageMetrics& value) {
        check(published.precision, value.precision);
        check(published.recall, value.recall);
        check(published.f1, value.f1);
    }
};

bool matches_within(const std::optional<double>& published, double value, double tol) {
    return !published || std::abs(value - *published) <= tol + kSlack;
}

}  // namespace

RoundedReport round_report(const ClassificationReport& r, int places) {
    auto round3 = [places](const AverageMetrics& a) {
        return RoundedTriple{round_half_up(a.precision, places), round_half_up(a.recall, places),
                             round_half_up(a.f1, places)};
    };
    RoundedReport out;
    for (Label l : kAllLabels) {
        const auto& c = r.of(l);
        out.support[index_of(l)] = c.support;
        out.per_class[index_of(l)] = RoundedTriple{round_half_up(c.precision, places),
                                                   round_half_up(c.recall, places), round_half_up(c.f1, places)};
    }
    out.micro = round3(r.micro);
    out.macro = round3(r.macro);
    out.weighted = round3(r.weighted);
    return out;
}

std::vector<Candidate> reconstruct(const RoundedReport& r, const ReconstructOptions& opts) {
    if (opts.tolerance < 0.0) throw DataError("reconstruct: negative tolerance");
    const std::uint64_t sup_n = r.support[index_of(Label::NonSarcastic)];
    const std::uint64_t sup_s = r.support[index_of(Label::Sarcastic)];
    if (sup_n + sup_s == 0) throw DataError("reconstruct: total support is zero");

    const auto& pub_n = r.per_class[index_of(Label::NonSarcastic)];
    const auto& pub_s = r.per_class[index_of(Label::Sarcastic)];

    // Per-class recall depends on one diagonal cell only; prune both axes first.
    auto recall_of = [](std::uint64_t tp, std::uint64_t support) {
        return support == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(support);
    };
    std::vector<std::uint64_t> nn_values;
    for (std::uint64_t nn = 0; nn <= sup_n; ++nn) {
        if (matches_within(pub_n.recall, recall_of(nn, sup_n), opts.tolerance)) nn_values.push_back(nn);
    }
    std::vector<std::uint64_t> ss_values;
    for (std::uint64_t ss = 0; ss <= sup_s; ++ss) {
        if (matches_within(pub_s.recall, recall_of(ss, sup_s), opts.tolerance)) ss_values.push_back(ss);
    }

    std::vector<Candidate> out;
    for (auto nn : nn_values) {
        for (auto ss : ss_values) {
            const ConfusionMatrix m(nn, sup_n - nn, sup_s - ss, ss);
            const auto rep = report(m);
            Residual res{opts.tolerance};
            for (Label l : kAllLabels) {
                const auto& c = rep.of(l);
                res.check(r.per_class[index_of(l)], AverageMetrics{c.precision, c.recall, c.f1});
            }
            res.check(r.micro, rep.micro);
            res.check(r.macro, rep.macro);
            res.check(r.weighted, rep.weighted);
            if (res.ok) out.push_back({m, std::sqrt(res.sum_sq)});
        }
    }
    if (out.empty()) throw InconsistentReport();

    std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        if (a.residual != b.residual) return a.residual < b.residual;
        const auto an = a.matrix.at(Label::NonSarcastic, Label::NonSarcastic);
        const auto bn = b.matrix.at(Label::NonSarcastic, Label::NonSarcastic);
        if (an != bn) return an < bn;
        return a.matrix.at(Label::Sarcastic, Label::Sarcastic) < b.matrix.at(Label::Sarcastic, Label::Sarcastic);
    });
    if (opts.max_results != 0 && out.size() > opts.max_results) out.resize(opts.max_results);
    return out;
}

}  // namespace sarceval
