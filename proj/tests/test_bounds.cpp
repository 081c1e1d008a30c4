#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qsr/bounds.hpp"
#include "qsr/forward.hpp"
#include "qsr/labeling.hpp"
#include "qsr/recovery.hpp"
#include "qsr/regime.hpp"
#include "qsr/signal.hpp"

using qsr::Anchor;
using qsr::BlurMixture;
using qsr::BreakSide;
using qsr::Counts;
using qsr::LocationInterval;
using qsr::PiecewiseSignal;
using qsr::SamplingGrid;
using qsr::Token;
using qsr::TokenSeq;

namespace {

PiecewiseSignal alternating() {
    return {{0.0, 1.51, 3.02, 4.53, 6.04}, {256, -256, 256, -256}};
}

TokenSeq truth_labels(const PiecewiseSignal& s, double sigma, const SamplingGrid& g) {
    const auto obs = qsr::sample(s, BlurMixture::single(sigma), g).observation;
    const auto m = qsr::measurement_matrix(s, BlurMixture::single(sigma), g, obs);
    return qsr::label_from_truth(qsr::difference_matrix(m), qsr::segmentation(s, g));
}

}  // namespace

TEST_CASE("anchor sides of the tokens") {
    CHECK(qsr::break_side(Token::A) == BreakSide::kBetween);
    CHECK(qsr::break_side(Token::F1) == BreakSide::kBefore);
    CHECK(qsr::break_side(Token::P1) == BreakSide::kBefore);
    CHECK(qsr::break_side(Token::S2) == BreakSide::kAfter);
    CHECK(qsr::break_side(Token::P3) == BreakSide::kAfter);
    CHECK_THROWS_AS(qsr::break_side(Token::F2), std::invalid_argument);
    CHECK_THROWS_AS(qsr::break_side(Token::S1), std::invalid_argument);
    CHECK_THROWS_AS(qsr::break_side(Token::P2), std::invalid_argument);
    CHECK_THROWS_AS(qsr::break_side(Token::Z), std::invalid_argument);
}

TEST_CASE("anchors extracted from a labeled sequence") {
    const TokenSeq labels{Token::Z,  Token::S1, Token::S2, Token::P1, Token::P2, Token::P3,
                          Token::A,  Token::F1, Token::F2, Token::Z};
    const std::vector<Anchor> a = qsr::anchors(labels);
    REQUIRE(a.size() == 5);
    CHECK(a[0].row == 2);
    CHECK(a[0].side == BreakSide::kAfter);
    CHECK(a[1].row == 3);
    CHECK(a[1].side == BreakSide::kBefore);
    CHECK(a[2].row == 5);
    CHECK(a[2].side == BreakSide::kAfter);
    CHECK(a[3].row == 6);
    CHECK(a[3].side == BreakSide::kBetween);
    CHECK(a[4].row == 7);
    CHECK(a[4].side == BreakSide::kBefore);

    CHECK_THROWS_AS(qsr::anchors({Token::F1, Token::Z}), std::invalid_argument);
    CHECK_THROWS_AS(qsr::anchors({Token::P1, Token::P2, Token::Z}), std::invalid_argument);
    CHECK_THROWS_AS(qsr::anchors({Token::F2}), std::invalid_argument);
}

TEST_CASE("single-break brackets at the anchor row") {
    const double nu = qsr::nu(256);
    SUBCASE("break just before its first full sample") {
        const LocationInterval i = qsr::locate(BreakSide::kBefore, 2, -1.8, nu, 0.125);
        CHECK(i.hi == doctest::Approx(0.2));
        CHECK(i.lo == doctest::Approx(0.2 - nu * 0.125));
        CHECK(i.contains(0.0));
    }
    SUBCASE("break just after the sample preceding the anchor") {
        const LocationInterval i = qsr::locate(BreakSide::kAfter, 5, -1.3, nu, 0.125);
        CHECK(i.lo == doctest::Approx(2.7));
        CHECK(i.hi == doctest::Approx(2.7 + nu * 0.125));
    }
    SUBCASE("vanishing blur widens the clear bracket to the whole cell") {
        const LocationInterval wide = qsr::locate(BreakSide::kBetween, 4, 0.0, nu, 1e-9);
        CHECK(wide.lo == doctest::Approx(3.0));
        CHECK(wide.hi == doctest::Approx(4.0));
        const LocationInterval thin = qsr::locate(BreakSide::kBefore, 4, 0.0, nu, 1e-9);
        CHECK(thin.width() == doctest::Approx(0.0));
    }
}

TEST_CASE("both observations of the alternating signal bracket every break") {
    const auto d0 = qsr::difference_sequence(
        qsr::sample(alternating(), BlurMixture::single(0.125), {-1.8, 1.0, 11}).observation);
    const auto d1 = qsr::difference_sequence(
        qsr::sample(alternating(), BlurMixture::single(1.0 / 7.0), {-1.3, 1.0, 11}).observation);
    const auto r = qsr::recover(d0, d1);
    REQUIRE(r.complete);

    const std::vector<double> breaks = alternating().breaks;
    const struct {
        const TokenSeq& labels;
        double t_first;
        double sigma_max;
    } obs[2] = {{r.labels0, -1.8, 0.125}, {r.labels1, -1.3, 1.0 / 7.0}};

    for (const auto& o : obs) {
        CAPTURE(o.t_first);
        const std::vector<Anchor> a = qsr::anchors(o.labels);
        REQUIRE(a.size() == breaks.size());
        std::vector<double> nus;
        for (const auto& g : r.gd) nus.push_back(qsr::nu(g.lo));

        for (std::size_t j = 0; j < a.size(); ++j) {
            const LocationInterval i =
                qsr::locate(a[j].side, a[j].row, o.t_first, nus[j], o.sigma_max);
            CAPTURE(j);
            CHECK(i.contains(breaks[j]));
            CHECK(i.width() <= 1.0 + 1e-12);
        }
        for (std::size_t j = 0; j < a.size(); ++j) {
            for (std::size_t k = j + 1; k < a.size(); ++k) {
                const LocationInterval i =
                    qsr::distance_bounds(a[j].side, a[k].side, a[j].row, a[k].row, nus[j],
                                         nus[k], o.sigma_max);
                CAPTURE(j);
                CAPTURE(k);
                CHECK(i.contains(breaks[k] - breaks[j]));
            }
        }
    }
}

TEST_CASE("distance brackets for fixed anchor patterns") {
    const double nj = qsr::nu(512), nk = qsr::nu(2048), sm = 0.1;
    SUBCASE("both breaks just before their samples, three rows apart") {
        const LocationInterval i =
            qsr::distance_bounds(BreakSide::kBefore, BreakSide::kBefore, 2, 5, nj, nk, sm);
        CHECK(i.lo == doctest::Approx(3.0 - nk * sm));
        CHECK(i.hi == doctest::Approx(3.0 + nj * sm));
    }
    SUBCASE("before-after pair two rows apart") {
        const LocationInterval i =
            qsr::distance_bounds(BreakSide::kBefore, BreakSide::kAfter, 3, 5, nj, nk, sm);
        CHECK(i.lo == doctest::Approx(1.0));
        CHECK(i.hi == doctest::Approx(1.0 + (nj + nk) * sm));
    }
    SUBCASE("anchors out of order") {
        CHECK_THROWS_AS(
            qsr::distance_bounds(BreakSide::kBefore, BreakSide::kBefore, 5, 5, nj, nk, sm),
            std::invalid_argument);
    }
}

TEST_CASE("clear-to-after bracket needs the radius difference, not zero") {
    // One clear break, then one 3.01T later sitting deep inside its window:
    // the true distance exceeds a whole number of rows, so dropping the
    // radius correction from the upper bound loses it.
    const PiecewiseSignal s{{0.0, 3.01, 6.2}, {256, 2304}};
    const SamplingGrid g{-2.4, 1.0, 12};
    const double sm = 0.12;
    const TokenSeq labels = truth_labels(s, sm, g);
    const std::vector<Anchor> a = qsr::anchors(labels);
    REQUIRE(a.size() == 3);
    REQUIRE(a[0].side == BreakSide::kBetween);
    REQUIRE(a[0].row == 3);
    REQUIRE(a[1].side == BreakSide::kAfter);
    REQUIRE(a[1].row == 6);

    const double dist = 3.01;
    const LocationInterval good = qsr::distance_bounds(a[0].side, a[1].side, a[0].row, a[1].row,
                                                       qsr::nu(256), qsr::nu(2048), sm);
    const LocationInterval alt = qsr::distance_bounds(a[0].side, a[1].side, a[0].row, a[1].row,
                                                      qsr::nu(256), qsr::nu(2048), sm, true);
    CHECK(good.contains(dist));
    CHECK_FALSE(alt.contains(dist));
}

TEST_CASE("after-to-clear bracket needs the radius difference, not the sum") {
    const PiecewiseSignal s{{0.0, 3.1, 6.2}, {2048, 1792}};
    const SamplingGrid g{-2.4, 1.0, 12};
    const double sm = 0.12;
    const TokenSeq labels = truth_labels(s, sm, g);
    const std::vector<Anchor> a = qsr::anchors(labels);
    REQUIRE(a.size() == 3);
    REQUIRE(a[0].side == BreakSide::kAfter);
    REQUIRE(a[0].row == 3);
    REQUIRE(a[1].side == BreakSide::kBetween);
    REQUIRE(a[1].row == 6);

    const double dist = 3.1;
    const LocationInterval good = qsr::distance_bounds(a[0].side, a[1].side, a[0].row, a[1].row,
                                                       qsr::nu(2048), qsr::nu(256), sm);
    const LocationInterval alt = qsr::distance_bounds(a[0].side, a[1].side, a[0].row, a[1].row,
                                                      qsr::nu(2048), qsr::nu(256), sm, true);
    CHECK(good.contains(dist));
    CHECK_FALSE(alt.contains(dist));
}

TEST_CASE("split-anchored brackets tighten as the blur bound drops") {
    const double nj = qsr::nu(512), nk = qsr::nu(256);
    const BreakSide splits[] = {BreakSide::kBefore, BreakSide::kAfter};
    for (BreakSide x : splits) {
        for (BreakSide y : splits) {
            LocationInterval prev = qsr::distance_bounds(x, y, 2, 5, nj, nk, 0.16);
            for (double sm : {0.12, 0.08, 0.04}) {
                const LocationInterval cur = qsr::distance_bounds(x, y, 2, 5, nj, nk, sm);
                CHECK(cur.lo >= prev.lo - 1e-12);
                CHECK(cur.hi <= prev.hi + 1e-12);
                prev = cur;
            }
        }
        LocationInterval prev = qsr::locate(x, 4, 0.0, nj, 0.16);
        for (double sm : {0.12, 0.08, 0.04}) {
            const LocationInterval cur = qsr::locate(x, 4, 0.0, nj, sm);
            CHECK(cur.lo >= prev.lo - 1e-12);
            CHECK(cur.hi <= prev.hi + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("minimum-gap floor on distance lower bounds") {
    CHECK(qsr::tighten_with_min_gap({1.2, 2.4}, 1).lo == doctest::Approx(1.5));
    CHECK(qsr::tighten_with_min_gap({1.8, 2.4}, 1).lo == doctest::Approx(1.8));
    CHECK(qsr::tighten_with_min_gap({2.0, 3.4}, 2).lo == doctest::Approx(3.0));
    CHECK(qsr::tighten_with_min_gap({1.0, 2.0}, 1, 1.75).lo == doctest::Approx(1.75));
    CHECK_THROWS_AS(qsr::tighten_with_min_gap({1.0, 1.4}, 1), std::domain_error);
}
