// Location brackets for recovered discontinuities.  A parse pins each break
// to one anchor row; the anchor's side plus the critical radius nu*sigma_max
// bracket the break, and two anchors bracket the distance between breaks.
#pragma once

#include <cstddef>
#include <vector>

#include "qsr/labeling.hpp"

namespace qsr {

// Side of the break relative to its anchor row's sample:
//   kBefore:  within nu*sigma_max before the anchor sample (F1/P1 anchors);
//   kAfter:   within nu*sigma_max after the sample preceding the anchor
//             row (S2/P3 anchors);
//   kBetween: clear of every sample by at least nu*sigma_max (A anchors;
//             exact only when the largest blur scale is the one that sets
//             the rounding radius, which the scenario generator enforces).
enum class BreakSide { kBetween, kBefore, kAfter };

// Anchor tokens only: A, F1, P1, S2, P3.  Throws std::invalid_argument for
// the rest; F2/S1/P2 ride along with their anchor and Z anchors nothing.
BreakSide break_side(Token t);

struct Anchor {
    std::size_t row = 0;
    BreakSide side = BreakSide::kBetween;
};

// One anchor per labeled discontinuity, in order.  Validates pair/triple
// structure (F1 followed by F2, and so on); throws std::invalid_argument on
// a malformed sequence.
std::vector<Anchor> anchors(const TokenSeq& labels);

// Open interval; all times and distances in units of the sample spacing.
struct LocationInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return lo < x && x < hi; }
    double width() const { return hi - lo; }
};

// Bracket for one break.  t_first is the time of sample 0; iota the anchor
// row; nu the break's critical threshold.
LocationInterval locate(BreakSide side, std::size_t iota, double t_first, double nu,
                        double sigma_max);

// Bracket for the distance from break j (anchor x at row iota_j) to the
// later break j+k (anchor y at row iota_jk).  Throws std::invalid_argument
// unless iota_j < iota_jk.  alt_forms switches two of the cases to a
// tempting simplification that the containment tests show to be unsound;
// it exists to document that the default forms are load-bearing.
LocationInterval distance_bounds(BreakSide x, BreakSide y, std::size_t iota_j,
                                 std::size_t iota_jk, double nu_j, double nu_jk,
                                 double sigma_max, bool alt_forms = false);

// Raise a distance lower bound using the minimum admissible gap: k
// consecutive gaps cover at least k*min_gap.  Throws std::domain_error when
// the tightened interval is empty.
LocationInterval tighten_with_min_gap(LocationInterval in, std::size_t k,
                                      double min_gap = 1.5);

}  // namespace qsr
