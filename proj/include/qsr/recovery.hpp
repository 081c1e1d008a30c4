#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsr/forward.hpp"
#include "qsr/labeling.hpp"
#include "qsr/types.hpp"

namespace qsr {

// Two byte-identical sequences carry no joint information: every split of one
// is a split of the other, so nothing can be pinned down.  Callers get a
// dedicated type so they can report this case separately.
struct IdenticalInputsError : std::invalid_argument {
    IdenticalInputsError()
        : std::invalid_argument("difference sequences are identical; nothing can be resolved") {}
};

// The two sequences cannot both describe the same underlying signal
// (nonzero total, or the parse forces two different values onto one step).
struct InconsistentInputsError : std::runtime_error {
    explicit InconsistentInputsError(const std::string& what) : std::runtime_error(what) {}
};

struct RecoveryResult {
    TokenSeq labels0;
    TokenSeq labels1;

    // Consecutive amplitude steps, in counts.  An entry is a closed interval;
    // exact() unless only a bounded split was possible, in which case the two
    // entries of that split are reported as intervals whose sum is pinned.
    std::vector<CountsInterval> gd;

    // Interior amplitudes accumulated from zero.  Exact again right after a
    // bounded split because the split's sum is known exactly.
    std::vector<CountsInterval> amplitudes;

    std::vector<std::string> trace;        // fired matcher names, in order
    std::vector<std::string> diagnostics;  // why a parse stopped or stayed loose
    bool complete = false;                 // both sequences fully explained
};

struct RecoverOptions {
    // Restart the matcher scan from the top after every fired match.  Off is
    // kept only to show the scan order is load-bearing; results can degrade.
    bool reset_after_match = true;
};

RecoveryResult recover(const DifferenceSequence& d0, const DifferenceSequence& d1,
                       const RecoverOptions& opts = {});

// Bounds for the two steps hidden in a pair of aligned commingled triples
// with a common sum.  Returns closed count intervals (first step, second
// step).  Throws std::invalid_argument if either triple is not
// commingle-shaped or no common split exists.
std::pair<CountsInterval, CountsInterval> commingle_split_bounds(
    const std::array<Counts, 3>& t0, const std::array<Counts, 3>& t1);

}  // namespace qsr
