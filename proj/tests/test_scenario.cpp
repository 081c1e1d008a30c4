#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <stdexcept>

#include "qsr/bounds.hpp"
#include "qsr/scenario.hpp"
#include "qsr/signal.hpp"

using qsr::Instance;
using qsr::PropertyReport;
using qsr::ScenarioConfig;
using qsr::ScenarioGenerator;

TEST_CASE("same seed, same draws") {
    ScenarioConfig cfg;
    cfg.seed = 77;
    ScenarioGenerator a(cfg), b(cfg);
    for (int i = 0; i < 5; ++i) {
        const Instance x = a.next(), y = b.next();
        CHECK(x.signal.breaks == y.signal.breaks);
        CHECK(x.signal.amps == y.signal.amps);
        CHECK(x.blur.sigmas == y.blur.sigmas);
        CHECK(x.obs[0].grid.t0 == y.obs[0].grid.t0);
        CHECK(x.obs[1].grid.t0 == y.obs[1].grid.t0);
        CHECK(x.obs[0].samples == y.obs[0].samples);
        CHECK(x.obs[1].samples == y.obs[1].samples);
    }
    ScenarioGenerator c({78});
    CHECK(c.next().signal.breaks != a.next().signal.breaks);
}

TEST_CASE("every accepted draw is a valid in-regime instance") {
    ScenarioConfig cfg;
    cfg.seed = 5;
    ScenarioGenerator gen(cfg);
    for (int i = 0; i < 50; ++i) {
        const Instance inst = gen.next();
        CHECK(qsr::validate_signal(inst.signal).ok());
        CHECK(qsr::min_gap(inst.signal) > cfg.gap_lo);
        CHECK(qsr::min_gap(inst.signal) < cfg.gap_hi);
        CHECK(qsr::prop1_holds(inst.blur, inst.profile));
        for (int o = 0; o < 2; ++o) {
            CHECK(inst.labels[o].size() == inst.obs[o].grid.count);
            CHECK(qsr::anchors(inst.labels[o]).size() == inst.signal.breaks.size());
        }
    }
}

TEST_CASE("rejections stay within the documented reasons") {
    ScenarioConfig cfg;
    cfg.seed = 11;
    cfg.mixture_rate = 0.5;
    ScenarioGenerator gen(cfg);
    for (int i = 0; i < 200; ++i) (void)gen.next();
    const std::set<std::string> allowed{
        "category-boundary", "sample-on-break",  "window-edge",
        "table-endpoint",    "fragile-quantization", "half-residual",
        "identical-observations", "matched-residuals", "uncleared-step",
        "split-residual-tie"};
    for (const auto& [reason, count] : gen.rejects_by_reason()) {
        CAPTURE(reason);
        CHECK(allowed.count(reason) == 1);
        CHECK(count > 0);
    }
}

TEST_CASE("config validation") {
    ScenarioConfig cfg;
    cfg.gap_lo = 0.5;
    CHECK_THROWS_AS(ScenarioGenerator{cfg}, std::invalid_argument);
    cfg = {};
    cfg.min_regions = 3;
    cfg.max_regions = 2;
    CHECK_THROWS_AS(ScenarioGenerator{cfg}, std::invalid_argument);
}

TEST_CASE("property run over a few hundred instances is clean") {
    ScenarioConfig cfg;
    cfg.seed = 42;
    cfg.trials = 300;
    const PropertyReport rep = qsr::run_properties(cfg);
    CHECK(rep.ok());
    CHECK(rep.structure_violations == 0);
    CHECK(rep.recovery_violations == 0);
    CHECK(rep.bounds_violations == 0);
    CHECK(rep.gap_disagreements == 0);
    CHECK(rep.complete_recoveries > 0);
    CHECK(rep.exact_recoveries <= rep.complete_recoveries);
    CHECK(rep.complete_recoveries <= rep.trials);
    CHECK(rep.gaps_checked > 0);
    // the loose distance variants are genuinely loose, not equivalent
    CHECK(rep.alt_form_misses > 0);
    CHECK(qsr::report_text(rep) == qsr::report_text(qsr::run_properties(cfg)));
}

TEST_CASE("pure and mixture blurs both run clean") {
    for (double rate : {0.0, 1.0}) {
        ScenarioConfig cfg;
        cfg.seed = 9;
        cfg.trials = 100;
        cfg.mixture_rate = rate;
        CAPTURE(rate);
        CHECK(qsr::run_properties(cfg).ok());
    }
}
