// Shared scalar types and constants for the quantized step-signal toolkit.
//
// Amplitudes live on a 1/256 grid.  All amplitude arithmetic is done in
// integer "counts" (multiples of 1/256) so that equality tests are exact.
// Times and blur widths are reals measured in units of the sample spacing T.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/rational.hpp>

namespace qsr {

// Amplitude in counts (multiples of 1/256 of the amplitude unit).
using Counts = std::int64_t;

// Exact fraction type for measurement-matrix entries.
using Rational = boost::rational<std::int64_t>;

inline constexpr Counts kCountsPerUnit = 256;

// Default cap on |amplitude| in counts.  Anything beyond this is treated as
// an input error rather than silently accepted.
inline constexpr Counts kDefaultAmpCap = 65536;

inline int sign(Counts v) { return v > 0 ? 1 : v < 0 ? -1 : 0; }

// Closed integer interval [lo, hi] in counts.  lo == hi encodes an exact value.
struct CountsInterval {
    Counts lo = 0;
    Counts hi = 0;

    bool exact() const { return lo == hi; }
    bool contains(Counts v) const { return lo <= v && v <= hi; }
    bool empty() const { return lo > hi; }
};

inline CountsInterval intersect(CountsInterval a, CountsInterval b) {
    return {a.lo > b.lo ? a.lo : b.lo, a.hi < b.hi ? a.hi : b.hi};
}

}  // namespace qsr
