#include "qsr/io.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

#include "qsr/labeling.hpp"

namespace qsr {

using nlohmann::ordered_json;

std::string format_time(double t) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), t);
    return std::string(buf, res.ptr);
}

double parse_time(const std::string& text) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end)
        throw std::invalid_argument("parse_time: not a decimal number: " + text);
    return v;
}

namespace {

double time_field(const ordered_json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_string()) return parse_time(v.get<std::string>());
    if (v.is_number()) return v.get<double>();
    throw std::invalid_argument(std::string(key) + ": expected a decimal string");
}

Counts counts_field(const ordered_json& v, const char* what) {
    if (!v.is_number_integer())
        throw std::invalid_argument(std::string(what) + ": expected an integer");
    return v.get<Counts>();
}

ordered_json interval_json(const CountsInterval& c) {
    if (c.exact()) return c.lo;
    return ordered_json::array({c.lo, c.hi});
}

}  // namespace

std::string signal_to_json(const PiecewiseSignal& s) {
    ordered_json j;
    j["breaks"] = ordered_json::array();
    for (double b : s.breaks) j["breaks"].push_back(format_time(b));
    j["amps"] = s.amps;
    return j.dump(2) + "\n";
}

PiecewiseSignal signal_from_json(const std::string& text) {
    const auto j = ordered_json::parse(text);
    PiecewiseSignal s;
    for (const auto& b : j.at("breaks")) {
        if (b.is_string())
            s.breaks.push_back(parse_time(b.get<std::string>()));
        else if (b.is_number())
            s.breaks.push_back(b.get<double>());
        else
            throw std::invalid_argument("breaks: expected a decimal string");
    }
    for (const auto& a : j.at("amps")) s.amps.push_back(counts_field(a, "amps"));
    return s;
}

std::string observation_to_json(const Observation& obs) {
    ordered_json j;
    j["t0"] = format_time(obs.grid.t0);
    j["T"] = format_time(obs.grid.unit_T);
    j["samples"] = obs.samples;
    return j.dump(2) + "\n";
}

Observation observation_from_json(const std::string& text) {
    const auto j = ordered_json::parse(text);
    Observation obs;
    obs.grid.t0 = time_field(j, "t0");
    obs.grid.unit_T = time_field(j, "T");
    for (const auto& v : j.at("samples")) obs.samples.push_back(counts_field(v, "samples"));
    obs.grid.count = obs.samples.size();
    return obs;
}

std::string result_to_json(const RecoveryResult& r,
                           const std::vector<ObservationBrackets>& brackets) {
    ordered_json j;
    j["complete"] = r.complete;
    for (const auto* seq : {&r.labels0, &r.labels1}) {
        ordered_json names = ordered_json::array();
        for (Token t : *seq) names.push_back(token_name(t));
        j[seq == &r.labels0 ? "labels0" : "labels1"] = std::move(names);
    }
    j["gd"] = ordered_json::array();
    for (const auto& c : r.gd) j["gd"].push_back(interval_json(c));
    j["amplitudes"] = ordered_json::array();
    for (const auto& c : r.amplitudes) j["amplitudes"].push_back(interval_json(c));
    j["trace"] = r.trace;
    j["diagnostics"] = r.diagnostics;
    if (!brackets.empty()) {
        j["brackets"] = ordered_json::array();
        for (const auto& ob : brackets) {
            ordered_json o;
            o["observation"] = ob.observation;
            o["anchors"] = ordered_json::array();
            for (std::size_t i = 0; i < ob.anchor_rows.size(); ++i) {
                ordered_json a;
                a["row"] = ob.anchor_rows[i].row;
                switch (ob.anchor_rows[i].side) {
                    case BreakSide::kBetween: a["side"] = "between"; break;
                    case BreakSide::kBefore: a["side"] = "before"; break;
                    case BreakSide::kAfter: a["side"] = "after"; break;
                }
                a["lo"] = format_time(ob.brackets[i].lo);
                a["hi"] = format_time(ob.brackets[i].hi);
                o["anchors"].push_back(std::move(a));
            }
            j["brackets"].push_back(std::move(o));
        }
    }
    return j.dump(2) + "\n";
}

}  // namespace qsr
