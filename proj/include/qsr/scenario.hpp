// Seeded random pipeline instances and the property harness shared by the
// command-line checker and the acceptance suite.
//
// The generator rejects draws that sit on measure-zero ties (a sample on a
// break, a window edge, a residual of exactly half a step, a table
// boundary) and redraws the whole instance; every rejection is counted by
// reason.  A rejected reason outside that documented set is rethrown, so a
// structural failure cannot hide inside the resampling loop.
#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "qsr/forward.hpp"
#include "qsr/labeling.hpp"
#include "qsr/regime.hpp"
#include "qsr/signal.hpp"

namespace qsr {

struct ScenarioConfig {
    std::uint64_t seed = 1;
    int trials = 100;
    double gap_lo = 1.5;  // units of T, open interval
    double gap_hi = 2.0;
    std::size_t min_regions = 2;
    std::size_t max_regions = 4;
    double mixture_rate = 0.2;  // chance of a two-component blur
};

// One accepted draw with everything derived from it, both observations.
struct Instance {
    PiecewiseSignal signal;
    BlurMixture blur;
    RegimeProfile profile;
    Observation obs[2];
    MeasurementMatrix m[2];
    DifferenceMatrix md[2];
    SegmentationInfo seg[2];
    TokenSeq labels[2];
};

class ScenarioGenerator {
  public:
    explicit ScenarioGenerator(const ScenarioConfig& cfg);

    Instance next();

    long long rejected() const { return rejected_; }
    const std::map<std::string, long long>& rejects_by_reason() const { return rejects_; }

  private:
    double u01();
    // Empty reason on success; a documented rejection reason otherwise.
    std::string try_draw(Instance& out);

    ScenarioConfig cfg_;
    std::mt19937_64 rng_;
    long long rejected_ = 0;
    std::map<std::string, long long> rejects_;
};

struct PropertyReport {
    int trials = 0;
    long long rejected_draws = 0;
    std::map<std::string, long long> rejects_by_reason;

    int structure_violations = 0;  // column forms, row shapes, triple ordering
    int recovery_violations = 0;   // recovered values disagreeing with truth
    int bounds_violations = 0;     // a location bracket missing its break
    int gap_disagreements = 0;     // two-row gap table vs. actual labels

    int alt_form_misses = 0;  // loose distance variants, reported only
    int complete_recoveries = 0;
    int exact_recoveries = 0;
    long long gaps_checked = 0;
    long long gaps_category1 = 0;
    long long gaps_category3 = 0;

    std::vector<std::string> failures;  // first few, with trial index

    bool ok() const {
        return structure_violations == 0 && recovery_violations == 0 &&
               bounds_violations == 0 && gap_disagreements == 0;
    }
};

PropertyReport run_properties(const ScenarioConfig& cfg);

std::string report_text(const PropertyReport& r);

}  // namespace qsr
