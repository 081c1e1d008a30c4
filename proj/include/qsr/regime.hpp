// Working-regime machinery: per-step critical thresholds nu_j, the blur
// bound that keeps at most one critical value per column, segmentation
// indices, column forms, and the structural checks the parser relies on.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qsr/forward.hpp"
#include "qsr/signal.hpp"
#include "qsr/types.hpp"

namespace qsr {

// Threshold nu with Phi(nu) = 1 - 1/(2|step|), step in counts: beyond
// nu*sigma_max from a break, blur cannot move a sample across a rounding
// boundary.  Exactly 0 for |step| == 1.  Throws on step == 0.
double nu(Counts step);

struct RegimeProfile {
    std::vector<double> nus;  // per difference-vector entry
    double nu_max = 0.0;
    double sigma_bound = 0.0;  // 0.5 / nu_max, +inf when nu_max == 0
};

RegimeProfile make_profile(const PiecewiseSignal& s);

// sigma_max < 0.5 T / nu_max: each measurement-matrix column has at most
// one entry differing from 0 and 1.
bool prop1_holds(const BlurMixture& blur, const RegimeProfile& profile);

// etas[j] = number of samples strictly inside (D_{j-1}, D_j) (etas[0]:
// t < 0, etas[m+1]: t > D_m); iotas[j] = sum of etas[0..j] = index of the
// first sample after D_j.
struct SegmentationInfo {
    std::vector<std::size_t> etas;   // size m+2
    std::vector<std::size_t> iotas;  // size m+1
};

SegmentationInfo segmentation(const PiecewiseSignal& s, const SamplingGrid& grid);

enum class ColumnFormKind {
    EXACT_STEP,      // 0..0, 1..1 flip at iota(j)
    LATE_CRITICAL,   // value in (0.5, 1) at row iota(j)
    EARLY_CRITICAL,  // value in (0, 0.5) at row iota(j)-1
};

struct ColumnForm {
    ColumnFormKind kind = ColumnFormKind::EXACT_STEP;
    std::size_t critical_row = 0;  // meaningful for the two critical kinds
    Rational critical_value{0};
};

// Throws std::runtime_error when the column matches none of the three forms.
ColumnForm classify_column(const MeasurementMatrix& m, std::size_t j, const SegmentationInfo& seg);

struct CheckReport {
    std::string id;
    bool passed = true;
    std::vector<std::string> notes;    // failures
    std::vector<std::string> flagged;  // report-only observations
};

// At most one critical entry per measurement row; with min gap > 2T also at
// most one nonzero per difference-matrix row.
CheckReport check_prop3(const MeasurementMatrix& m, const DifferenceMatrix& md, double min_gap_T);

// With min gap > (l+1)T/l there are no l+1 consecutive segmentation points.
CheckReport check_prop4(const SegmentationInfo& seg, unsigned l, double min_gap_T);

// Difference-matrix rows have at most two nonzeros, in consecutive columns,
// at least one fractional; with min gap > 1.5T both lie in (0, 0.5).
CheckReport check_prop5(const DifferenceMatrix& md, double min_gap_T);

// With min gap > 1.5T, rows with two nonzeros are at least three apart.
CheckReport check_prop6(const DifferenceMatrix& md, double min_gap_T);

// For merged triples (column j late-critical, column j+1 early-critical,
// iota(j+1) = iota(j)+2): |delta(iota(j))| > |delta(iota(j)+1)|.  The
// unmerged configurations that share the weaker surface precondition are
// evaluated report-only, as is the companion inequality
// |delta(iota(j)) + 2 units| > |delta(iota(j)+1)|.
CheckReport check_theorem7(const DifferenceSequence& delta, const SegmentationInfo& seg,
                           const MeasurementMatrix& m);

}  // namespace qsr
