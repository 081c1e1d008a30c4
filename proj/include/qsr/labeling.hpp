// Token labels for difference-sequence entries, ground-truth labeling from
// the difference matrix, and the closed-form parse tables for gaps that
// span two samples.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qsr/forward.hpp"
#include "qsr/regime.hpp"
#include "qsr/signal.hpp"

namespace qsr {

// A marks a whole step landing on one entry; F1/F2 a step split forward
// across a break; S1/S2 a split reaching back before the break; P1/P2/P3 an
// F-pair merged with the following S-pair; Z a structural zero.
enum class Token { Z, A, F1, F2, S1, S2, P1, P2, P3 };

const char* token_name(Token t);

using TokenSeq = std::vector<Token>;

// Alternatives for one slot; singleton when the label is forced.
using TokenSet = std::vector<Token>;

// Ground-truth labels read off the difference-matrix column forms.
// Throws std::runtime_error on any column or overlap that matches no form.
TokenSeq label_from_truth(const DifferenceMatrix& md, const SegmentationInfo& seg);

// Gap between consecutive breaks: D_j - D_{j-1} = (n - f) T with integral
// n >= 2 and f in (0, 1); delta is the offset of the first sample after
// D_{j-1}, in (0, T).
struct GapGeometry {
    unsigned n = 2;
    double f = 0.0;
    double delta = 0.0;
};

// Geometry of the gap ending at break j (j >= 1).
GapGeometry gap_geometry(const PiecewiseSignal& s, const SamplingGrid& grid, std::size_t j);

// Ordering of the window edges around a two-sample gap.  Categories 1 and 3
// are the ones where a merged triple can occur; their sub-cases split on
// whether the later break's window clears fT.
struct CategoryId {
    int category = 0;  // 1..5
    int sub = 0;       // 1 or 2 for categories 1 and 3, otherwise 0
};

// Requires n = 2 and f in (0, 0.5).  Throws std::domain_error when a window
// edge ties a category boundary (degenerate geometry).
CategoryId classify_gap(double nu_prev, double nu_j, double sigma_max, const GapGeometry& geom);

struct ParsePrediction {
    bool supported = true;
    std::vector<TokenSet> segment;       // labels of the samples inside the gap
    std::vector<TokenSet> next_opening;  // how the next segment's parse starts
    std::string interval;                // resolved table row, e.g. "1.1/2"
    std::string reason;                  // set when unsupported
};

// Closed-form parse for categories 1 and 3 driven by where delta falls; the
// other categories and wider gaps come back unsupported.  Throws
// std::domain_error when delta ties an interval endpoint.
ParsePrediction predict_parse(const CategoryId& cat, const GapGeometry& geom, double nu_prev,
                              double nu_j, double sigma_max);

}  // namespace qsr
