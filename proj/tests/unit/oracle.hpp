#pragma once

// Brute-force metric definitions used as an independent check on the library.
// Works directly on label sequences; shares no code with metrics.cpp.

#include <array>
#include <cstddef>
#include <vector>

namespace sarceval::testing {

struct OracleReport {
    std::array<double, 2> precision{}, recall{}, f1{};
    std::array<std::size_t, 2> support{};
    double accuracy = 0;
    double micro_precision = 0, micro_recall = 0;
    double macro_precision = 0, macro_recall = 0, macro_f1 = 0;
    double weighted_precision = 0, weighted_recall = 0, weighted_f1 = 0;
};

inline OracleReport oracle_report(const std::vector<int>& gold, const std::vector<int>& pred) {
    OracleReport r;
    const std::size_t n = gold.size();
    std::size_t correct = 0;
    std::size_t tp_sum = 0, fp_sum = 0, fn_sum = 0;
    for (std::size_t i = 0; i < n; ++i) correct += gold[i] == pred[i];
    r.accuracy = static_cast<double>(correct) / static_cast<double>(n);
    for (int c = 0; c < 2; ++c) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (pred[i] == c && gold[i] == c) ++tp;
            if (pred[i] == c && gold[i] != c) ++fp;
            if (pred[i] != c && gold[i] == c) ++fn;
        }
        tp_sum += tp;
        fp_sum += fp;
        fn_sum += fn;
        const double p = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        const double rc = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        r.precision[c] = p;
        r.recall[c] = rc;
        r.f1[c] = p + rc > 0 ? 2 * p * rc / (p + rc) : 0.0;
        r.support[c] = tp + fn;
    }
    r.micro_precision = static_cast<double>(tp_sum) / static_cast<double>(tp_sum + fp_sum);
    r.micro_recall = static_cast<double>(tp_sum) / static_cast<double>(tp_sum + fn_sum);
    for (int c = 0; c < 2; ++c) {
        r.macro_precision += r.precision[c] / 2;
        r.macro_recall += r.recall[c] / 2;
        r.macro_f1 += r.f1[c] / 2;
        const double w = static_cast<double>(r.support[c]) / static_cast<double>(n);
        r.weighted_precision += w * r.precision[c];
        r.weighted_recall += w * r.recall[c];
        r.weighted_f1 += w * r.f1[c];
    }
    return r;
}

/// Expands a (gold, predicted) count matrix into label sequences.
inline void expand(std::size_t nn, std::size_t ns, std::size_t sn, std::size_t ss, std::vector<int>& gold,
                   std::vector<int>& pred) {
    auto push = [&](int g, int p, std::size_t k) {
        for (std::size_t i = 0; i < k; ++i) {
            gold.push_back(g);
            pred.push_back(p);
        }
    };
    push(0, 0, nn);
    push(0, 1, ns);
    push(1, 0, sn);
    push(1, 1, ss);
}

}  // namespace sarceval::testing
