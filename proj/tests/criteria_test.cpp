#include "ric/criteria.hpp"

#include "ric/arithcode.hpp"

#include "experiment_models.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace ric;
using ric::oracle::make_seq;

TEST_CASE("mv")
{
    CHECK(mv(make_seq(2, {0, 0, 1}), 0) == doctest::Approx(2.7548875021634687).epsilon(1e-12));
    CHECK(mv(make_seq(2, {0, 0, 0, 0}), 1) == doctest::Approx(1.0));
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = rng() % 4;
        CHECK(mv(oracle::random_seq(rng, 2 + rng() % 3, k + rng() % 50), k) >= 0.0);
    }
    CHECK_THROWS_AS(mv(make_seq(2, {0}), 3), std::invalid_argument);
}

TEST_CASE("penalty")
{
    CHECK(penalty(2, 0, 3) == doctest::Approx(0.792481250360578).epsilon(1e-12));
    CHECK(penalty(2, 1, 4) == 2.0);
    CHECK(penalty(3, 2, 1) == 0.0);
    CHECK(free_parameters(3, 2) == 18.0);
    CHECK_THROWS_AS(penalty(2, 0, 0), std::invalid_argument);
}

TEST_CASE("ric is mv plus the penalty")
{
    CHECK(ric_score(make_seq(2, {0, 0, 1}), 0) == doctest::Approx(3.5473687525240467).epsilon(1e-12));
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 2 + rng() % 3;
        const std::size_t k = rng() % 4;
        const auto seq = oracle::random_seq(rng, m, std::max<std::size_t>(k, 2) + rng() % 100);
        const double r = ric_score(seq, k);
        const double v = mv(seq, k);
        CHECK(r - v == doctest::Approx(penalty(m, k, seq.size())).epsilon(1e-12));
        CHECK(r > v);
    }
}

TEST_CASE("conditional likelihood term does not increase with the order")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 2 + rng() % 3;
        const auto seq = oracle::random_seq(rng, m, 20 + rng() % 200);
        double previous = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k <= 5; ++k) {
            const double conditional = mv(seq, k) - static_cast<double>(k) * std::log2(static_cast<double>(m));
            CHECK(conditional <= previous + 1e-9);
            previous = conditional;
        }
    }
}

TEST_CASE("select_order")
{
    const auto model = testing::noisy_parity_model(5, testing::kOrder5Flip);
    const MarkovModel fair(Alphabet(2), 0, {0.5, 0.5});
    int ric_hits = 0;
    int ric_null = 0;
    int mv_not_below = 0;
    constexpr int kTrials = 20;
    for (int seed = 0; seed < kTrials; ++seed) {
        const auto seq = simulate(model, 2000, 1000 + static_cast<std::uint64_t>(seed));
        const auto k_ric = select_order(seq, 7, Criterion::Ric);
        ric_hits += k_ric == 5;
        mv_not_below += select_order(seq, 7, Criterion::Mv) >= k_ric;
        ric_null += select_order(simulate(fair, 2000, 5000 + static_cast<std::uint64_t>(seed)), 7, Criterion::Ric) == 0;
        CHECK(select_order(seq, 7, Criterion::Ric) == k_ric);
    }
    CHECK(ric_hits >= 18);
    CHECK(ric_null >= 18);
    CHECK(mv_not_below >= 18);

    // All conditional terms vanish for a constant sequence, so MV = k bits.
    CHECK(select_order(make_seq(2, std::vector<Symbol>(30, 0)), 4, Criterion::Mv) == 0);
    CHECK_THROWS_AS(select_order(make_seq(2, {0, 1}), 2, Criterion::Ric), std::invalid_argument);
}

TEST_CASE("criterion_curve")
{
    std::mt19937_64 rng(4);

    SUBCASE("single row")
    {
        const auto seq = oracle::random_seq(rng, 2, 50);
        const auto curve = criterion_curve(seq, 0);
        REQUIRE(curve.rows.size() == 1);
        CHECK(curve.rows[0].adaptive_bps >= curve.rows[0].mv_bps);
    }

    SUBCASE("simple column tracks MV within a bit, both paths")
    {
        const auto model = testing::noisy_parity_model(3, 0.1);
        const auto seq = simulate(model, 300, 9);
        for (bool exact : {false, true}) {
            const auto curve = criterion_curve(seq, 5, exact);
            REQUIRE(curve.rows.size() == 6);
            for (const auto& row : curve.rows) {
                const double n = static_cast<double>(curve.n);
                CHECK(std::abs(row.simple_bps * n - row.mv_bps * n) <= 1.0 + 1e-9);
                CHECK(row.ric_bps * n - row.mv_bps * n == doctest::Approx(penalty(2, row.k, 300)));
                CHECK(row.adaptive_bps >= 0.0);
            }
        }
        const auto exact = criterion_curve(seq, 3, true);
        for (const auto& row : exact.rows) {
            const auto bits = encode_adaptive(seq, row.k, false).message.payload.size();
            CHECK(row.adaptive_bps * 300.0 == doctest::Approx(static_cast<double>(bits)));
        }
    }

    SUBCASE("csv export")
    {
        CriterionCurve curve;
        curve.n = 10;
        curve.rows.push_back(CurveRow{0, 1.0, 0.5, 0.25, 1.0 / 3.0});
        curve.rows.push_back(CurveRow{1, 2.0, 1.5, 1.25, 2.0 / 3.0});
        std::ostringstream os;
        write_curve_csv(os, curve);
        CHECK(os.str()
              == "k,adaptive_bps,simple_bps,mv_bps,ric_bps\n"
                 "0,1.000000,0.500000,0.250000,0.333333\n"
                 "1,2.000000,1.500000,1.250000,0.666667\n");
        CHECK(curve.argmin(&CurveRow::ric_bps) == 0);
        CHECK(curve.argmin(&CurveRow::mv_bps) == 0);
    }
}
