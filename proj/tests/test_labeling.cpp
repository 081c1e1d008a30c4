#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "qsr/forward.hpp"
#include "qsr/labeling.hpp"
#include "qsr/regime.hpp"
#include "qsr/signal.hpp"

using qsr::BlurMixture;
using qsr::CategoryId;
using qsr::Counts;
using qsr::GapGeometry;
using qsr::Observation;
using qsr::PiecewiseSignal;
using qsr::SamplingGrid;
using qsr::Token;
using qsr::TokenSeq;
using qsr::TokenSet;

namespace {

PiecewiseSignal alternating() {
    return {{0.0, 1.51, 3.02, 4.53, 6.04}, {256, -256, 256, -256}};
}

SamplingGrid grid0() { return {-1.8, 1.0, 11}; }
SamplingGrid grid1() { return {-1.3, 1.0, 11}; }

const std::vector<Counts> kGamma0 = {0, 0, 242, 253, -256, 218, 254, -256, -26, 0, 0};
const std::vector<Counts> kGamma1 = {0, 5, 256, -209, -250, 256, -196, -254, 0, 0, 0};

struct Truth {
    qsr::SegmentationInfo seg;
    TokenSeq labels;
};

Truth ground_truth(const PiecewiseSignal& s, const BlurMixture& blur, const SamplingGrid& g,
                   const std::vector<Counts>& gamma) {
    const Observation obs{g, gamma};
    const auto m = qsr::measurement_matrix(s, blur, g, obs);
    Truth t;
    t.seg = qsr::segmentation(s, g);
    t.labels = qsr::label_from_truth(qsr::difference_matrix(m), t.seg);
    return t;
}

bool in_set(const TokenSet& set, Token t) {
    return std::find(set.begin(), set.end(), t) != set.end();
}

void check_pairing(const TokenSeq& seq) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seq[i] == Token::F1) REQUIRE(seq[i + 1] == Token::F2);
        if (seq[i] == Token::S1) REQUIRE(seq[i + 1] == Token::S2);
        if (seq[i] == Token::P1) {
            REQUIRE(seq[i + 1] == Token::P2);
            REQUIRE(seq[i + 2] == Token::P3);
        }
    }
}

}  // namespace

TEST_CASE("ground-truth labels of the worked example") {
    using T = Token;
    const auto t0 = ground_truth(alternating(), BlurMixture::single(0.125), grid0(), kGamma0);
    CHECK(t0.labels == TokenSeq{T::Z, T::Z, T::P1, T::P2, T::P3, T::P1, T::P2, T::P3, T::F1, T::F2,
                                T::Z});
    const auto t1 = ground_truth(alternating(), BlurMixture::single(1.0 / 7.0), grid1(), kGamma1);
    CHECK(t1.labels == TokenSeq{T::Z, T::S1, T::S2, T::P1, T::P2, T::P3, T::P1, T::P2, T::P3, T::Z,
                                T::Z});
    check_pairing(t0.labels);
    check_pairing(t1.labels);
}

TEST_CASE("narrow blur labels every break as a whole step") {
    const PiecewiseSignal s{{0.0, 2.2, 4.51}, {256, -256}};
    const SamplingGrid g{-1.55, 1.0, 8};
    const BlurMixture blur = BlurMixture::single(0.02);
    const auto obs = qsr::sample(s, blur, g).observation;
    const auto truth = ground_truth(s, blur, g, obs.samples);
    for (std::size_t i = 0; i < truth.labels.size(); ++i) {
        const bool at_break =
            std::find(truth.seg.iotas.begin(), truth.seg.iotas.end(), i) != truth.seg.iotas.end();
        CHECK(truth.labels[i] == (at_break ? Token::A : Token::Z));
    }
}

TEST_CASE("token sums recover the amplitude differences") {
    const Observation obs{grid0(), kGamma0};
    const auto delta = qsr::difference_sequence(obs);
    const auto truth = ground_truth(alternating(), BlurMixture::single(0.125), grid0(), kGamma0);
    const auto gd = qsr::difference_vector(alternating());
    // P-triples straddle two steps: triple sum = g_{j+2} - g_j
    CHECK(delta[2] + delta[3] + delta[4] == gd[0] + gd[1]);
    CHECK(delta[5] + delta[6] + delta[7] == gd[2] + gd[3]);
    CHECK(delta[8] + delta[9] == gd[4]);
    CHECK(truth.labels[8] == Token::F1);
}

TEST_CASE("gap geometry of the worked example") {
    const auto g1 = qsr::gap_geometry(alternating(), grid0(), 1);
    CHECK(g1.n == 2);
    CHECK(g1.f == doctest::Approx(0.49).epsilon(1e-9));
    CHECK(g1.delta == doctest::Approx(0.2).epsilon(1e-9));
    const auto g4 = qsr::gap_geometry(alternating(), grid0(), 4);
    CHECK(g4.delta == doctest::Approx(0.67).epsilon(1e-9));
    CHECK_THROWS_AS(qsr::gap_geometry(alternating(), grid0(), 0), std::out_of_range);
}

TEST_CASE("gap categories") {
    const GapGeometry geom{2, 0.49, 0.2};
    // worked example, first gap: both windows inside fT, overlapping the slack
    const auto c = qsr::classify_gap(qsr::nu(256), qsr::nu(512), 0.125, geom);
    CHECK(c.category == 1);
    CHECK(c.sub == 1);
    // later window spills past fT
    const auto c12 = qsr::classify_gap(2.0, 3.3, 0.14, {2, 0.45, 0.2});
    CHECK(c12.category == 1);
    CHECK(c12.sub == 2);
    // earlier window spills past fT
    const auto c31 = qsr::classify_gap(3.3, 2.0, 0.14, {2, 0.45, 0.2});
    CHECK(c31.category == 3);
    CHECK(c31.sub == 1);
    const auto c32 = qsr::classify_gap(3.3, 3.4, 0.14, {2, 0.45, 0.2});
    CHECK(c32.category == 3);
    CHECK(c32.sub == 2);
    // windows too narrow to overlap: no merged parse possible
    const auto c2 = qsr::classify_gap(qsr::nu(256), qsr::nu(512), 0.05, geom);
    CHECK(c2.category == 2);
    CHECK(c2.sub == 0);
    const auto c4 = qsr::classify_gap(3.2, 2.9, 0.08, {2, 0.24, 0.2});
    CHECK(c4.category == 4);
    const auto c5 = qsr::classify_gap(4.4, 1.2, 0.08, {2, 0.24, 0.2});
    CHECK(c5.category == 5);
    CHECK_THROWS_AS(qsr::classify_gap(2.0, 3.0, 0.1, {3, 0.4, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(qsr::classify_gap(2.0, 3.0, 0.1, {2, 0.7, 0.2}), std::invalid_argument);
    // window edge exactly on a boundary
    CHECK_THROWS_AS(qsr::classify_gap(4.0, 3.0, 0.1, {2, 0.4, 0.2}), std::domain_error);
}

TEST_CASE("parse table rows of the primary case") {
    const double wp = 0.125 * qsr::nu(256);  // 0.3607
    const double wj = 0.125 * qsr::nu(512);  // 0.3872
    const CategoryId cat{1, 1};
    const auto at = [&](double delta) {
        return qsr::predict_parse(cat, {2, 0.49, delta}, qsr::nu(256), qsr::nu(512), 0.125);
    };
    const auto r1 = at(0.06);  // below (1-f)T - wj = 0.1228
    CHECK(r1.interval == "1.1/1");
    CHECK(r1.segment == std::vector<TokenSet>{{Token::F1}, {Token::F2}});
    CHECK(r1.next_opening == std::vector<TokenSet>{{Token::A}});
    const auto r2 = at(0.2);
    CHECK(r2.interval == "1.1/2");
    CHECK(r2.segment == std::vector<TokenSet>{{Token::P1}, {Token::P2}});
    CHECK(r2.next_opening == std::vector<TokenSet>{{Token::P3}});
    const auto r3 = at(0.45);  // between wp and (1-f)T
    CHECK(r3.interval == "1.1/3");
    CHECK(r3.segment == std::vector<TokenSet>{{Token::A}, {Token::S1}});
    const auto r4 = at(0.56);  // between (1-f)T and T - wp
    CHECK(r4.interval == "1.1/4");
    CHECK(r4.segment == std::vector<TokenSet>{{Token::A}});
    CHECK(r4.next_opening == std::vector<TokenSet>{{Token::F1, Token::P1}});
    const auto r5 = at(0.7);
    CHECK(r5.interval == "1.1/5");
    CHECK(r5.segment == std::vector<TokenSet>{{Token::S2, Token::P3}});
    const auto r6 = at(0.93);  // beyond (1-f)T + wj = 0.8972
    CHECK(r6.interval == "1.1/6");
    CHECK(r6.next_opening == std::vector<TokenSet>{{Token::A}});
    CHECK_THROWS_AS(at(wp), std::domain_error);  // offset exactly on an interval endpoint
    (void)wj;
}

TEST_CASE("parse table follow-on dispatch") {
    // case 3.1 geometry: wp = 0.462, wj = 0.28, f = 0.45
    const double nup = 3.3, nuj = 2.0, sigma = 0.14;
    const CategoryId cat{3, 1};
    const auto at = [&](double delta) {
        return qsr::predict_parse(cat, {2, 0.45, delta}, nup, nuj, sigma);
    };
    // below wp: falls through to the 1.1 table
    const auto r1 = at(0.2);  // (1-f)T - wj = 0.27, so this is still 1.1/1
    CHECK(r1.interval == "1.1/1");
    const auto r2 = at(0.4);  // inside ((1-f)T - wj, wp) = (0.27, 0.462)
    CHECK(r2.interval == "1.1/2");
    CHECK(r2.segment == std::vector<TokenSet>{{Token::P1}, {Token::P2}});
    const auto r3 = at(0.5);
    CHECK(r3.interval == "3.1/2");
    CHECK(r3.segment == std::vector<TokenSet>{{Token::A}, {Token::S1}});
    const auto r4 = at(0.54);  // (T - wp, (1-f)T) = (0.538, 0.55)
    CHECK(r4.interval == "3.1/3");
    CHECK(r4.segment == std::vector<TokenSet>{{Token::S2, Token::P3}, {Token::S1}});
    CHECK(r4.next_opening == std::vector<TokenSet>{{Token::S2}});
    const auto r5 = at(0.6);  // ((1-f)T, (1-f)T + wj) = (0.55, 0.83)
    CHECK(r5.interval == "3.1/4");
    const auto r6 = at(0.9);
    CHECK(r6.interval == "3.1/5");
}

TEST_CASE("unsupported geometries come back flagged") {
    const auto wide = qsr::predict_parse({1, 1}, {3, 0.4, 0.2}, 2.9, 3.1, 0.1);
    CHECK_FALSE(wide.supported);
    const auto cat2 = qsr::predict_parse({2, 0}, {2, 0.49, 0.2}, qsr::nu(256), qsr::nu(512), 0.05);
    CHECK_FALSE(cat2.supported);
    CHECK(cat2.reason.find("category 2") != std::string::npos);
}

TEST_CASE("predictions agree with ground truth across the worked example") {
    struct Side {
        BlurMixture blur;
        SamplingGrid grid;
        std::vector<Counts> gamma;
    };
    const Side sides[] = {{BlurMixture::single(0.125), grid0(), kGamma0},
                          {BlurMixture::single(1.0 / 7.0), grid1(), kGamma1}};
    const PiecewiseSignal s = alternating();
    const auto profile = qsr::make_profile(s);
    for (const auto& side : sides) {
        const auto truth = ground_truth(s, side.blur, side.grid, side.gamma);
        const double sm = side.blur.sigma_max();
        for (std::size_t j = 1; j < s.breaks.size(); ++j) {
            const auto geom = qsr::gap_geometry(s, side.grid, j);
            const auto cat = qsr::classify_gap(profile.nus[j - 1], profile.nus[j], sm, geom);
            const auto pred =
                qsr::predict_parse(cat, geom, profile.nus[j - 1], profile.nus[j], sm);
            REQUIRE(pred.supported);
            const std::size_t lo = truth.seg.iotas[j - 1];
            const std::size_t hi = truth.seg.iotas[j];
            REQUIRE(pred.segment.size() == hi - lo);
            for (std::size_t k = 0; k < pred.segment.size(); ++k)
                CHECK(in_set(pred.segment[k], truth.labels[lo + k]));
            REQUIRE(pred.next_opening.size() == 1);
            CHECK(in_set(pred.next_opening[0], truth.labels[hi]));
        }
    }
}
