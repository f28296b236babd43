#include <doctest.h>

#include <algorithm>
#include <random>

#include "printers.hpp"
#include "sarceval/metrics.hpp"

using namespace sarceval;

namespace {

constexpr Label N = Label::NonSarcastic;
constexpr Label S = Label::Sarcastic;

RoundedReport table(std::uint64_t sup_n, std::uint64_t sup_s, std::array<double, 3> non, std::array<double, 3> sarc,
                    double micro, std::array<double, 3> macro, std::array<double, 3> weighted) {
    RoundedReport r;
    r.support = {sup_n, sup_s};
    r.per_class[0] = {non[0], non[1], non[2]};
    r.per_class[1] = {sarc[0], sarc[1], sarc[2]};
    r.micro = {micro, micro, micro};
    r.macro = {macro[0], macro[1], macro[2]};
    r.weighted = {weighted[0], weighted[1], weighted[2]};
    return r;
}

bool contains(const std::vector<Candidate>& cs, const ConfusionMatrix& m) {
    return std::any_of(cs.begin(), cs.end(), [&](const Candidate& c) { return c.matrix == m; });
}

}  // namespace

TEST_SUITE("reconstruct") {

TEST_CASE("perfect report has the diagonal as its unique solution") {
    RoundedReport r;
    r.support = {10, 10};
    r.per_class[0] = {1.0, 1.0, 1.0};
    r.per_class[1] = {1.0, 1.0, 1.0};
    const auto sols = reconstruct(r);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].matrix == ConfusionMatrix(10, 0, 0, 10));
    CHECK(sols[0].residual == 0.0);
}

TEST_CASE("contradictory values are inconsistent") {
    RoundedReport r;
    r.support = {5, 5};
    r.per_class[0] = {1.0, 1.0, std::nullopt};
    r.per_class[1] = {1.0, 1.0, std::nullopt};
    r.micro.precision = 0.5;
    CHECK_THROWS_AS(reconstruct(r), InconsistentReport);
}

TEST_CASE("Tamil table: derived matrix is a solution and the best one scores macro-F1 0.61") {
    const auto r = table(4621, 1717, {0.79, 0.79, 0.79}, {0.43, 0.43, 0.43}, 0.69, {0.61, 0.61, 0.61},
                         {0.69, 0.69, 0.69});
    const auto sols = reconstruct(r);
    REQUIRE_FALSE(sols.empty());
    CHECK(contains(sols, ConfusionMatrix(3651, 970, 977, 740)));
    const auto best = report(sols.front().matrix);
    CHECK(round_half_up(best.macro.f1, 2) == 0.61);
    CHECK(round_half_up(best.micro.f1, 2) == 0.69);
    for (std::size_t i = 1; i < sols.size(); ++i) CHECK(sols[i - 1].residual <= sols[i].residual);
}

TEST_CASE("Malayalam table has exact solutions") {
    const auto r = table(2314, 512, {0.82, 0.73, 0.77}, {0.18, 0.27, 0.22}, 0.65, {0.50, 0.50, 0.50},
                         {0.70, 0.65, 0.67});
    const auto sols = reconstruct(r);
    REQUIRE_FALSE(sols.empty());
    CHECK(sols.front().matrix == ConfusionMatrix(1694, 620, 374, 138));
    CHECK(contains(sols, ConfusionMatrix(1691, 623, 373, 139)));
    const auto best = report(sols.front().matrix);
    CHECK(round_half_up(best.macro.f1, 2) == 0.50);
    CHECK(round_half_up(best.weighted.f1, 2) == 0.67);
    // the nearby (1689, 625, 371, 141) needs the looser 0.01 margin on Sarcastic recall
    CHECK_FALSE(contains(sols, ConfusionMatrix(1689, 625, 371, 141)));
    CHECK(contains(reconstruct(r, {0.015, 0}), ConfusionMatrix(1689, 625, 371, 141)));
}

TEST_CASE("max_results truncates after ordering") {
    const auto r = table(4621, 1717, {0.79, 0.79, 0.79}, {0.43, 0.43, 0.43}, 0.69, {0.61, 0.61, 0.61},
                         {0.69, 0.69, 0.69});
    const auto all = reconstruct(r);
    const auto top = reconstruct(r, {0.005, 3});
    REQUIRE(top.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(top[i].matrix == all[i].matrix);
}

TEST_CASE("ties break on ascending NN") {
    // Only supports given: every matrix has residual 0, so order is by NN then SS.
    RoundedReport r;
    r.support = {2, 1};
    const auto sols = reconstruct(r);
    REQUIRE(sols.size() == 6);
    CHECK(sols[0].matrix == ConfusionMatrix(0, 2, 1, 0));
    CHECK(sols[1].matrix == ConfusionMatrix(0, 2, 0, 1));
    CHECK(sols[5].matrix == ConfusionMatrix(2, 0, 0, 1));
}

TEST_CASE("argument errors") {
    RoundedReport r;
    CHECK_THROWS_AS(reconstruct(r), DataError);
    r.support = {1, 1};
    CHECK_THROWS_AS(reconstruct(r, {-0.1, 0}), DataError);
}

TEST_CASE("property: a matrix is recovered from its own rounded report") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const std::uint64_t sn = rng() % 120, ss = 1 + rng() % 120;
        const std::uint64_t nn = sn ? rng() % (sn + 1) : 0, s_ok = rng() % (ss + 1);
        const ConfusionMatrix m(nn, sn - nn, ss - s_ok, s_ok);
        const auto sols = reconstruct(round_report(report(m)), {0.005, 0});
        CHECK(contains(sols, m));
    }
}

}
