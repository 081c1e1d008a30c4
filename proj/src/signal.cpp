#include "qsr/signal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qsr {

namespace {

constexpr double kBreakTol = 1e-9;  // sample-on-break / integer-gap tolerance

void check_signal_only(const PiecewiseSignal& s, Counts amp_cap, ValidationReport& r) {
    if (s.breaks.empty()) {
        r.violations.push_back("breaks empty: D_0 = 0 is required");
        return;
    }
    if (s.breaks.size() != s.amps.size() + 1)
        r.violations.push_back("breaks/amps size mismatch: need one more break than amplitudes");
    if (s.breaks.front() != 0.0)
        r.violations.push_back("D_0 != 0");
    for (std::size_t j = 1; j < s.breaks.size(); ++j)
        if (!(s.breaks[j] > s.breaks[j - 1]))
            r.violations.push_back("breaks not strictly increasing at index " + std::to_string(j));
    if (!s.amps.empty()) {
        if (s.amps.front() == 0) r.violations.push_back("g_1 == 0");
        if (s.amps.back() == 0) r.violations.push_back("g_m == 0");
    }
    for (std::size_t j = 0; j + 1 < s.amps.size(); ++j)
        if (s.amps[j] == s.amps[j + 1])
            r.violations.push_back("g_" + std::to_string(j + 1) + " == g_" + std::to_string(j + 2));
    for (std::size_t j = 0; j < s.amps.size(); ++j)
        if (std::llabs(s.amps[j]) > amp_cap)
            r.violations.push_back("amplitude " + std::to_string(j + 1) + " exceeds cap");
    // Integer-multiple gap between ANY break pair makes sample/break offsets
    // repeat exactly, which the parsing theory excludes.
    for (std::size_t a = 0; a < s.breaks.size(); ++a)
        for (std::size_t b = a + 1; b < s.breaks.size(); ++b) {
            const double gap = s.breaks[b] - s.breaks[a];
            if (std::fabs(gap - std::round(gap)) < kBreakTol)
                r.violations.push_back("break gap D_" + std::to_string(b) + " - D_" +
                                       std::to_string(a) + " is an integer multiple of T");
        }
}

}  // namespace

double BlurMixture::sigma_max() const {
    double m = 0.0;
    for (double s : sigmas) m = std::max(m, s);
    return m;
}

ValidationReport validate_signal(const PiecewiseSignal& s, Counts amp_cap) {
    ValidationReport r;
    check_signal_only(s, amp_cap, r);
    return r;
}

ValidationReport validate_signal(const PiecewiseSignal& s, const SamplingGrid& grid,
                                 bool require_min_gap, Counts amp_cap) {
    ValidationReport r;
    check_signal_only(s, amp_cap, r);
    if (!(grid.t0 < 0.0)) r.violations.push_back("grid t0 must be negative");
    if (grid.count < 2) r.violations.push_back("grid needs at least two samples");
    if (!(grid.unit_T > 0.0)) r.violations.push_back("grid unit T must be positive");
    if (!s.breaks.empty() && grid.count >= 1) {
        const double last = grid.time(grid.count - 1);
        if (!(last > s.breaks.back()))
            r.violations.push_back("grid does not extend past D_m");
    }
    for (std::size_t i = 0; i < grid.count; ++i)
        for (double d : s.breaks)
            if (std::fabs(grid.time(i) - d) < kBreakTol)
                r.violations.push_back("sample " + std::to_string(i) + " lies on a discontinuity");
    if (require_min_gap && min_gap(s) <= 1.5)
        r.violations.push_back("break gap <= 1.5T");
    return r;
}

DifferenceVector difference_vector(const PiecewiseSignal& s) {
    const ValidationReport r = validate_signal(s);
    if (!r.ok()) throw std::invalid_argument("difference_vector: " + r.violations.front());
    DifferenceVector d(s.breaks.size());
    Counts prev = 0;
    for (std::size_t j = 0; j < s.breaks.size(); ++j) {
        const Counts next = j < s.amps.size() ? s.amps[j] : 0;
        d[j] = next - prev;
        prev = next;
    }
    return d;
}

double min_gap(const PiecewiseSignal& s) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < s.breaks.size(); ++j)
        g = std::min(g, s.breaks[j] - s.breaks[j - 1]);
    return g;
}

}  // namespace qsr
