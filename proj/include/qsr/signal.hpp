// Piecewise-constant signal model, Gaussian blur mixture, sampling grid.
//
// A signal has m regions: discontinuities D_0 = 0 < D_1 < ... < D_m (units
// of T) and amplitudes g_1..g_m in counts, with g(t) = 0 outside [D_0, D_m].
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qsr/types.hpp"

namespace qsr {

struct PiecewiseSignal {
    std::vector<double> breaks;  // D_0..D_m, units of T, D_0 == 0
    std::vector<Counts> amps;    // g_1..g_m, counts

    std::size_t regions() const { return amps.size(); }
};

// Gaussian mixture blur: sum_k w_k N(0, sigma_k^2), weights summing to 1.
// sigma_max drives every window/regime computation.
struct BlurMixture {
    std::vector<double> weights;
    std::vector<double> sigmas;  // units of T

    static BlurMixture single(double sigma) { return {{1.0}, {sigma}}; }
    double sigma_max() const;
};

// Uniformly spaced samples t_i = t0 + i, i = 0..count-1, in units of T.
// unit_T records the physical spacing and does not enter the math.
struct SamplingGrid {
    double t0 = 0.0;  // < 0, units of T
    double unit_T = 1.0;
    std::size_t count = 0;

    double time(std::size_t i) const { return t0 + static_cast<double>(i); }
};

// Consecutive amplitude differences (g_1-g_0, ..., g_{m+1}-g_m) with
// g_0 = g_{m+1} = 0.  Entries sum to zero and none is zero.
using DifferenceVector = std::vector<Counts>;

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Structural checks on the signal alone, and against a grid when given:
// D_0 == 0, breaks strictly increasing, no zero or repeated amplitude where
// forbidden, no break gap an integer multiple of T, amplitudes under the cap;
// with a grid: t0 < 0, grid brackets the support, no sample on a break,
// and (when require_min_gap) every gap > 1.5T.
ValidationReport validate_signal(const PiecewiseSignal& s, Counts amp_cap = kDefaultAmpCap);
ValidationReport validate_signal(const PiecewiseSignal& s, const SamplingGrid& grid,
                                 bool require_min_gap = false, Counts amp_cap = kDefaultAmpCap);

// Throws std::invalid_argument if validate_signal(s) fails.
DifferenceVector difference_vector(const PiecewiseSignal& s);

// Smallest distance between consecutive breaks, units of T.  +inf for m < 1.
double min_gap(const PiecewiseSignal& s);

}  // namespace qsr
