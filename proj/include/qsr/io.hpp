// JSON text for signals, observations, and recovery results.
//
// Counts travel as plain JSON integers and are parsed strictly (a float
// where counts belong is an error).  Times travel as decimal strings in
// shortest round-trip form, so files survive a parse/print cycle
// bit-exactly; a bare JSON number is accepted on input.
#pragma once

#include <string>
#include <vector>

#include "qsr/bounds.hpp"
#include "qsr/forward.hpp"
#include "qsr/recovery.hpp"
#include "qsr/signal.hpp"

namespace qsr {

std::string format_time(double t);
double parse_time(const std::string& text);

std::string signal_to_json(const PiecewiseSignal& s);
PiecewiseSignal signal_from_json(const std::string& text);

std::string observation_to_json(const Observation& obs);
Observation observation_from_json(const std::string& text);

// Location brackets for one observation's anchors, absolute times in T.
struct ObservationBrackets {
    std::size_t observation = 0;
    std::vector<Anchor> anchor_rows;
    std::vector<LocationInterval> brackets;
};

std::string result_to_json(const RecoveryResult& r,
                           const std::vector<ObservationBrackets>& brackets = {});

}  // namespace qsr
